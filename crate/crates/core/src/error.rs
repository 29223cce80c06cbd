//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by geometry, clock-rate, orbit, and positioning routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite input: {what}")]
    NonFinite { what: &'static str },

    /// A quantity that must be strictly positive (or otherwise in range) was not.
    #[error("invalid value for {what}: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    /// Operation evaluated at the spatial origin where `1/|x|` blows up.
    #[error("{what} undefined at origin")]
    OriginSingularity { what: &'static str },

    /// World point lies on or inside the Schwarzschild radius.
    #[error("inside Schwarzschild radius: |x| = {radius} <= r_s = {schwarzschild_radius}")]
    InsideHorizon {
        radius: f64,
        schwarzschild_radius: f64,
    },

    /// The state has a non-timelike world line (radicand of the rate formula <= 0).
    #[error("world line not timelike at t = {t}")]
    NotTimelike { t: f64 },

    /// Velocity fails the tangential tolerance required by the circular-orbit rate.
    #[error("velocity not tangential: |n.v| = {radial} exceeds {tolerance} * |v|")]
    NotTangential { radial: f64, tolerance: f64 },

    /// An iterative solver ran out of its iteration or subdivision budget.
    #[error("{what} did not converge within {budget} steps")]
    Convergence { what: &'static str, budget: usize },

    /// Root bracketing for the proper-time inversion failed.
    #[error("failed to bracket root for {what}")]
    Bracketing { what: &'static str },

    /// Time lies outside the domain of a tabulated trajectory.
    #[error("time {t} outside trajectory domain [{start}, {end}]")]
    OutsideDomain { t: f64, start: f64, end: f64 },

    /// A trajectory evaluation failed at a specific sample index.
    #[error("trajectory sample {index} failed: {source}")]
    AtSample {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Fewer observations than unknowns for the positioning solve.
    #[error("at least {needed} observations required, got {got}")]
    InsufficientObservations { got: usize, needed: usize },

    /// Observation geometry is rank-deficient or too ill-conditioned to solve.
    #[error("degenerate observation geometry: condition number {condition:e} exceeds {cap:e}")]
    DegenerateGeometry { condition: f64, cap: f64 },
}

impl Error {
    fn at_sample(self, index: usize) -> Error {
        Error::AtSample {
            index,
            source: Box::new(self),
        }
    }

    /// Attaches a sample index to an error propagated out of a grid evaluation.
    pub(crate) fn with_sample_index<T>(result: Result<T>, index: usize) -> Result<T> {
        result.map_err(|e| e.at_sample(index))
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
