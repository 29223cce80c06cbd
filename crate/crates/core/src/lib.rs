//! Exact and approximate relations between satellite proper time,
//! Earth-surface proper time, and Earth-centered coordinate time in
//! Schwarzschild spacetime, plus a GPS-style pseudorange positioning harness
//! that quantifies what the relativistic clock rate is worth.
//!
//! The crate is organized around the rate `ds/dt` of a moving clock relative
//! to the coordinate time of the Earth-centered inertial frame:
//!
//! - [`schwarzschild`] holds the metric and its length-square forms;
//! - [`rates`] turns them into exact, circular-orbit, and first-order clock
//!   rates, integrates proper time along trajectories, and inverts s(t);
//! - [`orbits`] supplies Keplerian trajectories;
//! - [`positioning`] broadcasts time tags, forms pseudoranges, and solves
//!   for receiver position and clock bias by Gauss-Newton;
//! - [`units`] converts between SI and geometric units (c = gamma = 1) at
//!   the API boundary; everything inside runs geometric.

pub mod error;
pub mod orbits;
pub mod positioning;
mod quad;
pub mod rates;
pub mod schwarzschild;
pub mod units;
pub mod vector;

pub use error::{Error, Result};
pub use orbits::{kepler_state, orbital_period, sample_trajectory, KeplerElements, Trajectory};
pub use positioning::{
    make_observation, relativity_impact_experiment, solve_position, ClockMode, ImpactReport,
    ImpactScenario, PositionFix, PseudorangeObs, SatelliteClockModel, SolverConfig,
};
pub use rates::{
    coordinate_time_of_proper, geoid_rescale, integrate_approximation_gap, integrate_proper_time,
    integrate_rate_offset, rate_approx, rate_circular, rate_exact, GeoidConstant, KinematicState,
    RateResult,
};
pub use schwarzschild::{
    four_length_sq, metric_at, potential, space_length_sq, validate_exterior, FourVector,
    GravBody, MetricComponents,
};
pub use units::{from_geometric, to_geometric, GeometricQuantity, QuantityKind, UnitSystem};
pub use vector::SpaceVector;
