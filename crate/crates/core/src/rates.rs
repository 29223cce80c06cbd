//! Relations between satellite proper time, geoid proper time, and
//! Earth-centered coordinate time.
//!
//! The exact rate is `ds/dt = sqrt(1 + 2V - |v|^2_Sch)` with the
//! Schwarzschild speed-square of the coordinate velocity spelled out:
//!
//! ```text
//! ds/dt = sqrt(1 + 2V - |v|^2 + (2V/(1+2V)) (n.v)^2)
//! ```
//!
//! which reduces to `sqrt(1 + 2V - |v|^2)` for tangential (circular-orbit)
//! velocities, and to the first-order standard `1 + V - |v|^2/2` after
//! series expansion. The physically meaningful signal is the offset
//! `ds/dt - 1`, around 1e-10 in the GPS regime, so the offset is computed
//! through `expm1(0.5 * ln_1p(eps))` rather than `sqrt(1 + eps) - 1`: the
//! naive radical would surrender ten of its sixteen digits to cancellation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::Trajectory;
use crate::quad;
use crate::schwarzschild::{validate_exterior, GravBody};
use crate::vector::SpaceVector;

/// Largest ratio `|n.v| / |v|` still accepted as tangential by
/// [`rate_circular`].
pub const TANGENTIAL_TOL: f64 = 1e-9;

/// Position, coordinate velocity, and coordinate time of a material point.
///
/// All fields are geometric: `t` in meters, `x` in meters, `v = dx/dt`
/// dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub t: f64,
    pub x: SpaceVector,
    pub v: SpaceVector,
}

impl KinematicState {
    pub fn new(t: f64, x: SpaceVector, v: SpaceVector) -> Self {
        Self { t, x, v }
    }
}

/// The constant relating geoid-surface clock rate to coordinate time,
/// `dt/dt_E = 1 - phi0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoidConstant {
    phi0: f64,
}

/// Default sanity bound on `|phi0|` for Earth-like bodies.
pub const GEOID_PHI0_BOUND: f64 = 1e-8;

impl GeoidConstant {
    /// Geoid constant with the Earth-like sanity bound `|phi0| < 1e-8`.
    pub fn new(phi0: f64) -> Result<Self> {
        Self::with_bound(phi0, GEOID_PHI0_BOUND)
    }

    /// Geoid constant with a caller-chosen sanity bound.
    pub fn with_bound(phi0: f64, bound: f64) -> Result<Self> {
        if !phi0.is_finite() {
            return Err(Error::NonFinite { what: "phi0" });
        }
        if phi0.abs() >= bound {
            return Err(Error::OutOfRange {
                what: "phi0",
                value: phi0,
            });
        }
        Ok(Self { phi0 })
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }
}

/// A clock rate `ds/dt` carried in both absolute and offset form.
///
/// `rate == 1 + offset` by construction; the offset retains full relative
/// precision even when it is ~1e-10.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub rate: f64,
    pub offset: f64,
}

impl RateResult {
    fn from_radicand_offset(eps: f64) -> Self {
        let offset = (0.5 * eps.ln_1p()).exp_m1();
        RateResult {
            rate: 1.0 + offset,
            offset,
        }
    }
}

struct StateGeometry {
    potential: f64,
    speed_sq: f64,
    radial_speed: f64,
}

fn state_geometry(body: &GravBody, s: &KinematicState) -> Result<StateGeometry> {
    if !s.t.is_finite() {
        return Err(Error::NonFinite {
            what: "coordinate time",
        });
    }
    if !s.v.is_finite() {
        return Err(Error::NonFinite { what: "velocity" });
    }
    if !validate_exterior(body, &s.x)? {
        return Err(Error::InsideHorizon {
            radius: s.x.norm(),
            schwarzschild_radius: body.schwarzschild_radius(),
        });
    }
    let normal = s.x.outward_normal()?;
    Ok(StateGeometry {
        potential: -body.m_geo() / s.x.norm(),
        speed_sq: s.v.norm_sq(),
        radial_speed: normal.dot(&s.v),
    })
}

/// Exact rate `ds/dt` of a clock in the state `s`.
pub fn rate_exact(body: &GravBody, s: &KinematicState) -> Result<RateResult> {
    let g = state_geometry(body, s)?;
    let eps = exact_radicand_offset(&g);
    if eps <= -1.0 {
        return Err(Error::NotTimelike { t: s.t });
    }
    Ok(RateResult::from_radicand_offset(eps))
}

// eps = (2V - |v|^2) + (2V/(1+2V)) (n.v)^2, in this fixed association
// order, each product formed before the sums. The radial correction enters
// with the sign that makes 1 + eps equal 1 + 2V - |v|^2_Sch: radial rulers
// are stretched, so radial motion dilates the clock more, never less.
fn exact_radicand_offset(g: &StateGeometry) -> f64 {
    let two_v = 2.0 * g.potential;
    let correction = (two_v / (1.0 + two_v)) * (g.radial_speed * g.radial_speed);
    (two_v - g.speed_sq) + correction
}

/// Circular-orbit rate `sqrt(1 + 2V - |v|^2)`; requires the velocity to be
/// tangential within [`TANGENTIAL_TOL`].
pub fn rate_circular(body: &GravBody, s: &KinematicState) -> Result<RateResult> {
    let g = state_geometry(body, s)?;
    let speed = g.speed_sq.sqrt();
    if g.radial_speed.abs() > TANGENTIAL_TOL * speed {
        return Err(Error::NotTangential {
            radial: g.radial_speed.abs(),
            tolerance: TANGENTIAL_TOL,
        });
    }
    let eps = 2.0 * g.potential - g.speed_sq;
    if eps <= -1.0 {
        return Err(Error::NotTimelike { t: s.t });
    }
    Ok(RateResult::from_radicand_offset(eps))
}

/// First-order rate `1 + V - |v|^2/2`, exactly as the standard formula is
/// written, with no additional terms.
pub fn rate_approx(body: &GravBody, s: &KinematicState) -> Result<RateResult> {
    let g = state_geometry(body, s)?;
    let offset = g.potential - 0.5 * g.speed_sq;
    Ok(RateResult {
        rate: 1.0 + offset,
        offset,
    })
}

/// Rescales a geoid-clock duration to coordinate time: `dt = (1 - phi0) dt_E`.
pub fn geoid_rescale(g: &GeoidConstant, dt_e: f64) -> Result<f64> {
    if !dt_e.is_finite() {
        return Err(Error::NonFinite { what: "duration" });
    }
    Ok((1.0 - g.phi0) * dt_e)
}

/// Which rate formula drives an integration or inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RateFormula {
    Exact,
    Approximate,
}

pub(crate) fn offset_at(
    body: &GravBody,
    traj: &Trajectory,
    t: f64,
    formula: RateFormula,
) -> Result<f64> {
    let state = traj.state_at(body, t)?;
    let result = match formula {
        RateFormula::Exact => rate_exact(body, &state)?,
        RateFormula::Approximate => rate_approx(body, &state)?,
    };
    Ok(result.offset)
}

pub(crate) fn integrate_offset_with(
    body: &GravBody,
    traj: &Trajectory,
    t0: f64,
    t1: f64,
    tol: f64,
    formula: RateFormula,
) -> Result<f64> {
    let q = quad::integrate(|t| offset_at(body, traj, t, formula), t0, t1, tol)?;
    Ok(q.value)
}

/// Accumulated proper-time minus coordinate-time along the trajectory:
/// `integral of (ds/dt - 1) dt` over `[t0, t1]`.
///
/// This is the full-precision route to clock drifts: the integrand is the
/// cancellation-safe offset, so nothing of the ~1e-10 signal is lost to the
/// large common part of the two time scales.
pub fn integrate_rate_offset(
    body: &GravBody,
    traj: &Trajectory,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<f64> {
    integrate_offset_with(body, traj, t0, t1, tol, RateFormula::Exact)
}

/// Proper time elapsed along the trajectory between coordinate times `t0`
/// and `t1`: `integral of ds/dt dt`, with estimated quadrature error at most
/// `tol * (t1 - t0)`.
pub fn integrate_proper_time(
    body: &GravBody,
    traj: &Trajectory,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<f64> {
    Ok((t1 - t0) + integrate_rate_offset(body, traj, t0, t1, tol)?)
}

/// Accumulated difference between the exact and the first-order rate:
/// `integral of (exact - approx) dt` over `[t0, t1]`.
pub fn integrate_approximation_gap(
    body: &GravBody,
    traj: &Trajectory,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<f64> {
    let q = quad::integrate(
        |t| {
            Ok(offset_at(body, traj, t, RateFormula::Exact)?
                - offset_at(body, traj, t, RateFormula::Approximate)?)
        },
        t0,
        t1,
        tol,
    )?;
    Ok(q.value)
}

const INVERSION_MAX_ITER: usize = 100;
const BRACKET_MAX_ITER: usize = 60;

/// Coordinate time `t` at which the proper time elapsed since `t_epoch`
/// reaches `s_target`; the inverse of [`integrate_proper_time`].
///
/// `ds/dt > 0` makes the solution unique; a safeguarded Newton iteration on
/// the monotone map, bracketed by a coarse outward scan, finds it.
pub fn coordinate_time_of_proper(
    body: &GravBody,
    traj: &Trajectory,
    t_epoch: f64,
    s_target: f64,
    tol: f64,
) -> Result<f64> {
    coordinate_time_of_proper_with(body, traj, t_epoch, s_target, tol, RateFormula::Exact)
}

pub(crate) fn coordinate_time_of_proper_with(
    body: &GravBody,
    traj: &Trajectory,
    t_epoch: f64,
    s_target: f64,
    tol: f64,
    formula: RateFormula,
) -> Result<f64> {
    if !(s_target.is_finite() && t_epoch.is_finite()) {
        return Err(Error::NonFinite {
            what: "inversion inputs",
        });
    }
    if s_target < 0.0 {
        return Err(Error::OutOfRange {
            what: "proper-time target",
            value: s_target,
        });
    }
    if s_target == 0.0 {
        return Ok(t_epoch);
    }

    // Residual of the monotone map: g(t) = (t - t_epoch) - s_target + I(t),
    // with I the tiny offset integral; the big terms cancel exactly.
    let residual = |t: f64| -> Result<f64> {
        let drift = integrate_offset_with(body, traj, t_epoch, t, tol, formula)?;
        Ok(((t - t_epoch) - s_target) + drift)
    };
    let rate_at = |t: f64| -> Result<f64> {
        let state = traj.state_at(body, t)?;
        Ok(match formula {
            RateFormula::Exact => rate_exact(body, &state)?.rate,
            RateFormula::Approximate => rate_approx(body, &state)?.rate,
        })
    };

    let stop = (tol * s_target).max(4.0 * f64::EPSILON * (t_epoch.abs() + s_target));

    // Coarse outward scan for an upper bracket; ds/dt <= 1 in the exterior,
    // so t_epoch + s_target is already close to (and usually just below)
    // the root.
    let mut lo = t_epoch;
    let mut hi = t_epoch + s_target;
    let mut g_hi = residual(hi)?;
    let mut expansions = 0;
    while g_hi < 0.0 {
        lo = hi;
        let step = (-g_hi / rate_at(hi)?).max(stop);
        hi += 1.125 * step;
        g_hi = residual(hi)?;
        expansions += 1;
        if expansions > BRACKET_MAX_ITER {
            return Err(Error::Bracketing {
                what: "proper-time inversion",
            });
        }
    }

    // Safeguarded Newton within [lo, hi].
    let mut t = hi;
    let mut g_t = g_hi;
    for _ in 0..INVERSION_MAX_ITER {
        if g_t.abs() <= stop {
            return Ok(t);
        }
        if g_t > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let mut t_next = t - g_t / rate_at(t)?;
        if !(t_next > lo && t_next < hi) {
            t_next = 0.5 * (lo + hi);
        }
        if t_next == t {
            // No representable point closer to the root remains.
            return Ok(t);
        }
        t = t_next;
        g_t = residual(t)?;
    }
    Err(Error::Convergence {
        what: "proper-time inversion",
        budget: INVERSION_MAX_ITER,
    })
}
