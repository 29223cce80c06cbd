//! Keplerian two-body trajectories supplying kinematic states to the rate
//! and positioning machinery.
//!
//! Orbit dynamics are Newtonian: the metric enters the clock relation only,
//! never the equations of motion, and satellite velocity enters the rate
//! formula as given data. Relativistic orbit corrections sit far below the
//! clock-rate effects of interest here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::KinematicState;
use crate::schwarzschild::GravBody;
use crate::vector::SpaceVector;

use std::f64::consts::TAU;

/// Classical Keplerian elements in geometric units (lengths in meters,
/// epoch in geometric time, angles in radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeplerElements {
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    pub raan: f64,
    pub arg_perigee: f64,
    pub mean_anomaly_epoch: f64,
    pub epoch: f64,
}

impl KeplerElements {
    /// Validated constructor. Hyperbolic and parabolic orbits (`e >= 1`)
    /// are rejected; satellite scenarios have no use for them.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        semi_major_axis: f64,
        eccentricity: f64,
        inclination: f64,
        raan: f64,
        arg_perigee: f64,
        mean_anomaly_epoch: f64,
        epoch: f64,
    ) -> Result<Self> {
        let el = Self {
            semi_major_axis,
            eccentricity,
            inclination,
            raan,
            arg_perigee,
            mean_anomaly_epoch,
            epoch,
        };
        for (value, what) in [
            (semi_major_axis, "semi-major axis"),
            (eccentricity, "eccentricity"),
            (inclination, "inclination"),
            (raan, "raan"),
            (arg_perigee, "argument of perigee"),
            (mean_anomaly_epoch, "mean anomaly"),
            (epoch, "epoch"),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { what });
            }
        }
        if semi_major_axis <= 0.0 {
            return Err(Error::OutOfRange {
                what: "semi-major axis",
                value: semi_major_axis,
            });
        }
        if !(0.0..1.0).contains(&eccentricity) {
            return Err(Error::OutOfRange {
                what: "eccentricity",
                value: eccentricity,
            });
        }
        Ok(el)
    }

    fn perigee(&self) -> f64 {
        self.semi_major_axis * (1.0 - self.eccentricity)
    }
}

const KEPLER_TOL: f64 = 1e-14;
const KEPLER_NEWTON_ITER: usize = 50;
const KEPLER_BISECT_ITER: usize = 200;

/// Solves Kepler's equation `M = E - e sin E` for the eccentric anomaly.
///
/// Newton iteration seeded with `E0 = M + e sin M`; bisection fallback on
/// the bracket `[M - e, M + e]` if Newton stalls.
fn solve_kepler(mean_anomaly: f64, e: f64) -> Result<f64> {
    let m = mean_anomaly.rem_euclid(TAU);
    let mut ecc = m + e * m.sin();
    for _ in 0..KEPLER_NEWTON_ITER {
        let f = ecc - e * ecc.sin() - m;
        let step = f / (1.0 - e * ecc.cos());
        ecc -= step;
        if step.abs() <= KEPLER_TOL {
            return Ok(ecc);
        }
    }
    // f(E) = E - e sin E - M is strictly increasing for e < 1 and changes
    // sign on [M - e, M + e].
    let (mut lo, mut hi) = (m - e, m + e);
    for _ in 0..KEPLER_BISECT_ITER {
        let mid = 0.5 * (lo + hi);
        let f = mid - e * mid.sin() - m;
        if f > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= KEPLER_TOL {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence {
        what: "Kepler solver",
        budget: KEPLER_NEWTON_ITER,
    })
}

fn rotate_z(v: SpaceVector, angle: f64) -> SpaceVector {
    let (s, c) = angle.sin_cos();
    SpaceVector::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z)
}

fn rotate_x(v: SpaceVector, angle: f64) -> SpaceVector {
    let (s, c) = angle.sin_cos();
    SpaceVector::new(v.x, c * v.y - s * v.z, s * v.y + c * v.z)
}

fn perifocal_to_inertial(el: &KeplerElements, v: SpaceVector) -> SpaceVector {
    rotate_z(
        rotate_x(rotate_z(v, el.arg_perigee), el.inclination),
        el.raan,
    )
}

fn check_orbit(el: &KeplerElements, body: &GravBody) -> Result<()> {
    if body.m_geo() <= 0.0 {
        return Err(Error::OutOfRange {
            what: "central mass for orbit propagation",
            value: body.m_geo(),
        });
    }
    if el.perigee() <= body.schwarzschild_radius() {
        return Err(Error::InsideHorizon {
            radius: el.perigee(),
            schwarzschild_radius: body.schwarzschild_radius(),
        });
    }
    Ok(())
}

/// Kinematic state of the two-body orbit at coordinate time `t`.
pub fn kepler_state(el: &KeplerElements, body: &GravBody, t: f64) -> Result<KinematicState> {
    check_orbit(el, body)?;
    let a = el.semi_major_axis;
    let e = el.eccentricity;
    let mean_motion = (body.m_geo() / (a * a * a)).sqrt();
    let m = el.mean_anomaly_epoch + mean_motion * (t - el.epoch);
    let ecc_anomaly = if e == 0.0 {
        m.rem_euclid(TAU)
    } else {
        solve_kepler(m, e)?
    };
    let (sin_e, cos_e) = ecc_anomaly.sin_cos();
    let b = a * (1.0 - e * e).sqrt();
    let position = SpaceVector::new(a * (cos_e - e), b * sin_e, 0.0);
    // dE/dt = n / (1 - e cos E)
    let ecc_rate = mean_motion / (1.0 - e * cos_e);
    let velocity = SpaceVector::new(-a * sin_e * ecc_rate, b * cos_e * ecc_rate, 0.0);
    Ok(KinematicState::new(
        t,
        perifocal_to_inertial(el, position),
        perifocal_to_inertial(el, velocity),
    ))
}

/// Orbital period `2 pi sqrt(a^3 / m)` in geometric time.
///
/// Pure Kepler's-third-law arithmetic; unlike state evaluation it does not
/// demand the perigee to clear the Schwarzschild radius, so it stays usable
/// for normalized-unit checks.
pub fn orbital_period(el: &KeplerElements, body: &GravBody) -> Result<f64> {
    if body.m_geo() <= 0.0 {
        return Err(Error::OutOfRange {
            what: "central mass for orbit propagation",
            value: body.m_geo(),
        });
    }
    let a = el.semi_major_axis;
    Ok(TAU * (a * a * a / body.m_geo()).sqrt())
}

/// A trajectory interpolated from a grid of stored states with cubic
/// Hermite segments (C1, as the quadrature requires).
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedTrajectory {
    states: Vec<KinematicState>,
}

impl TabulatedTrajectory {
    /// Builds the table from states with strictly increasing times.
    pub fn new(states: Vec<KinematicState>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::OutOfRange {
                what: "tabulated trajectory length",
                value: states.len() as f64,
            });
        }
        for pair in states.windows(2) {
            if !(pair[1].t > pair[0].t) {
                return Err(Error::OutOfRange {
                    what: "tabulated trajectory time step",
                    value: pair[1].t - pair[0].t,
                });
            }
        }
        Ok(Self { states })
    }

    pub fn start(&self) -> f64 {
        self.states[0].t
    }

    pub fn end(&self) -> f64 {
        self.states[self.states.len() - 1].t
    }

    fn state_at(&self, t: f64) -> Result<KinematicState> {
        if !(t >= self.start() && t <= self.end()) {
            return Err(Error::OutsideDomain {
                t,
                start: self.start(),
                end: self.end(),
            });
        }
        let i = match self
            .states
            .binary_search_by(|s| s.t.partial_cmp(&t).expect("finite times"))
        {
            Ok(i) => i.min(self.states.len() - 2),
            Err(i) => i - 1,
        };
        let (s0, s1) = (&self.states[i], &self.states[i + 1]);
        let h = s1.t - s0.t;
        let u = (t - s0.t) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        let x = h00 * s0.x + (h10 * h) * s0.v + h01 * s1.x + (h11 * h) * s1.v;
        let d00 = (6.0 * u2 - 6.0 * u) / h;
        let d10 = 3.0 * u2 - 4.0 * u + 1.0;
        let d01 = (-6.0 * u2 + 6.0 * u) / h;
        let d11 = 3.0 * u2 - 2.0 * u;
        let v = d00 * s0.x + d10 * s0.v + d01 * s1.x + d11 * s1.v;
        Ok(KinematicState::new(t, x, v))
    }
}

/// A time-parameterized source of kinematic states.
#[derive(Debug, Clone, PartialEq)]
pub enum Trajectory {
    /// Circular Keplerian orbit (`e = 0`).
    Circular(KeplerElements),
    /// General elliptic Keplerian orbit.
    Kepler(KeplerElements),
    /// Interpolated table of stored states.
    Tabulated(TabulatedTrajectory),
}

impl Trajectory {
    /// Circular-orbit variant; the elements must have `e = 0`.
    pub fn circular(el: KeplerElements) -> Result<Self> {
        if el.eccentricity != 0.0 {
            return Err(Error::OutOfRange {
                what: "circular-orbit eccentricity",
                value: el.eccentricity,
            });
        }
        Ok(Trajectory::Circular(el))
    }

    pub fn kepler(el: KeplerElements) -> Self {
        Trajectory::Kepler(el)
    }

    pub fn tabulated(states: Vec<KinematicState>) -> Result<Self> {
        Ok(Trajectory::Tabulated(TabulatedTrajectory::new(states)?))
    }

    /// Kinematic state at coordinate time `t`.
    pub fn state_at(&self, body: &GravBody, t: f64) -> Result<KinematicState> {
        match self {
            Trajectory::Circular(el) | Trajectory::Kepler(el) => kepler_state(el, body, t),
            Trajectory::Tabulated(table) => table.state_at(t),
        }
    }

    /// Reference epoch: the element epoch, or the first tabulated time.
    pub fn epoch(&self) -> f64 {
        match self {
            Trajectory::Circular(el) | Trajectory::Kepler(el) => el.epoch,
            Trajectory::Tabulated(table) => table.start(),
        }
    }
}

/// Evaluates the trajectory on a time grid; failures carry the grid index.
pub fn sample_trajectory(
    traj: &Trajectory,
    body: &GravBody,
    t_grid: &[f64],
) -> Result<Vec<KinematicState>> {
    t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let state = Error::with_sample_index(traj.state_at(body, t), i)?;
            // Every delivered sample must be exterior and timelike.
            Error::with_sample_index(crate::rates::rate_exact(body, &state), i)?;
            Ok(state)
        })
        .collect()
}
