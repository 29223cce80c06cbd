//! Schwarzschild metric in Schwarzschild coordinates, restricted to the
//! exterior region `1 + 2V(x) > 0`.
//!
//! The metric is kept in two equivalent forms: the assembled component
//! matrix (for the oracle/teaching path) and contracted closed forms for the
//! length-squares of space vectors and four-vectors. The closed forms never
//! build the 3x3 matrix, so the ~1e-10 correction factor is applied in a
//! single fused expression.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;
use crate::vector::SpaceVector;

/// Central gravitating body, characterized by its geometric mass in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravBody {
    m_geo: f64,
}

impl GravBody {
    /// Creates a body from its geometric mass (meters, equals gamma M / c^2).
    ///
    /// `m_geo = 0` is accepted and yields flat Minkowski spacetime; several
    /// callers use it as the zero-gravity reference.
    pub fn new(m_geo: f64) -> Result<Self> {
        if !m_geo.is_finite() {
            return Err(Error::NonFinite {
                what: "geometric mass",
            });
        }
        if m_geo < 0.0 {
            return Err(Error::OutOfRange {
                what: "geometric mass",
                value: m_geo,
            });
        }
        Ok(Self { m_geo })
    }

    /// Creates a body from its standard gravitational parameter GM in SI.
    pub fn from_gm_si(gm_si: f64, units: &UnitSystem) -> Result<Self> {
        if !gm_si.is_finite() {
            return Err(Error::NonFinite { what: "GM" });
        }
        Self::new(units.gm_to_geo(gm_si))
    }

    /// Creates a body from a mass in kg.
    pub fn from_mass_kg(mass_kg: f64, units: &UnitSystem) -> Result<Self> {
        if !mass_kg.is_finite() {
            return Err(Error::NonFinite { what: "mass" });
        }
        Self::new(units.mass_to_geo(mass_kg))
    }

    /// Geometric mass in meters.
    pub fn m_geo(&self) -> f64 {
        self.m_geo
    }

    /// Schwarzschild radius `r_s = 2 m`.
    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.m_geo
    }
}

/// Gravitational potential `V(x) = -m / |x|` (dimensionless).
pub fn potential(body: &GravBody, x: &SpaceVector) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite { what: "position" });
    }
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::OriginSingularity {
            what: "potential",
        });
    }
    Ok(-body.m_geo / r)
}

/// True iff the world point is in the exterior region `1 + 2V(x) > 0`,
/// equivalently `|x| > 2 m`. The inequality is strict with no epsilon pad.
pub fn validate_exterior(body: &GravBody, x: &SpaceVector) -> Result<bool> {
    if !x.is_finite() {
        return Err(Error::NonFinite { what: "position" });
    }
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::OriginSingularity {
            what: "exterior check",
        });
    }
    Ok(r > body.schwarzschild_radius())
}

fn require_exterior(body: &GravBody, x: &SpaceVector) -> Result<f64> {
    if !validate_exterior(body, x)? {
        return Err(Error::InsideHorizon {
            radius: x.norm(),
            schwarzschild_radius: body.schwarzschild_radius(),
        });
    }
    potential(body, x)
}

/// Components of the metric at a world point: time-time scalar plus the
/// symmetric spatial 3x3 block. The time-space block is identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    /// `-(1 + 2V)`; negative everywhere in the exterior.
    pub tt: f64,
    /// `I - (2V / (1 + 2V)) n(x) (x) n(x)`; symmetric positive definite.
    pub spatial: [[f64; 3]; 3],
}

impl MetricComponents {
    /// Quadratic form `q^T spatial q`, the explicit-contraction route used
    /// as oracle for [`space_length_sq`].
    pub fn spatial_quadratic(&self, q: &SpaceVector) -> f64 {
        let qa: [f64; 3] = (*q).into();
        let mut acc = 0.0;
        for (i, row) in self.spatial.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                acc += qa[i] * g * qa[j];
            }
        }
        acc
    }

    /// Length-square of the four-vector `(s, q)` by explicit contraction.
    pub fn four_quadratic(&self, u: &FourVector) -> f64 {
        self.tt * u.time_part * u.time_part + self.spatial_quadratic(&u.space_part)
    }
}

/// A four-vector split into its time part and space part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub time_part: f64,
    pub space_part: SpaceVector,
}

impl FourVector {
    pub fn new(time_part: f64, space_part: SpaceVector) -> Self {
        Self {
            time_part,
            space_part,
        }
    }
}

/// Assembles the metric components at `x`.
pub fn metric_at(body: &GravBody, x: &SpaceVector) -> Result<MetricComponents> {
    let v = require_exterior(body, x)?;
    let one_plus_2v = 1.0 + 2.0 * v;
    let factor = 2.0 * v / one_plus_2v;
    let n: [f64; 3] = x.outward_normal()?.into();
    let mut spatial = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let identity = if i == j { 1.0 } else { 0.0 };
            spatial[i][j] = identity - factor * n[i] * n[j];
        }
    }
    // constructed symmetric: [i][j] and [j][i] come from the same product
    Ok(MetricComponents {
        tt: -one_plus_2v,
        spatial,
    })
}

/// Schwarzschild length-square of a space vector `q` at the point `x`:
/// `|q|^2 - (2V/(1+2V)) (n.q)^2`.
pub fn space_length_sq(body: &GravBody, x: &SpaceVector, q: &SpaceVector) -> Result<f64> {
    let v = require_exterior(body, x)?;
    let n = x.outward_normal()?;
    Ok(space_length_sq_from_potential(v, &n, q))
}

/// Same contraction with the potential and normal already in hand; the fast
/// path used by the rate formulas.
pub(crate) fn space_length_sq_from_potential(v: f64, n: &SpaceVector, q: &SpaceVector) -> f64 {
    let radial = n.dot(q);
    q.norm_sq() - (2.0 * v / (1.0 + 2.0 * v)) * (radial * radial)
}

/// Schwarzschild length-square of a four-vector `(s, q)` at the point `x`:
/// `-(1+2V) s^2 + |q|^2_Sch`.
pub fn four_length_sq(body: &GravBody, x: &SpaceVector, u: &FourVector) -> Result<f64> {
    let v = require_exterior(body, x)?;
    let n = x.outward_normal()?;
    let s = u.time_part;
    Ok(-(1.0 + 2.0 * v) * (s * s) + space_length_sq_from_potential(v, &n, &u.space_part))
}
