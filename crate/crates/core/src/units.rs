//! Conversion between SI and geometric units (c = 1, gamma = 1).
//!
//! In geometric units every physical quantity used by the metric and therate
//! formulas carries length units or is dimensionless: times are multiplied by
//! c, masses by gamma/c^2, speeds and potentials are divided by c and c^2.
//! The public API accepts SI at the boundary and all internal physics runs in
//! geometric units, so the conversion happens exactly once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values of the universal constants used for unit conversion.
///
/// These are configuration, not ground truth: scenario files may override
/// them, and no formula in this crate embeds them as literals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    /// Speed of light, m/s.
    pub c_si: f64,
    /// Gravitational constant, m^3/(kg s^2).
    pub gamma_si: f64,
}

/// CODATA 2018 speed of light (exact by SI definition), m/s.
pub const C_SI_CODATA: f64 = 299_792_458.0;
/// CODATA 2018 gravitational constant, m^3/(kg s^2).
pub const GAMMA_SI_CODATA: f64 = 6.674_30e-11;

impl UnitSystem {
    /// Unit system with the CODATA 2018 constant values.
    pub fn codata() -> Self {
        Self {
            c_si: C_SI_CODATA,
            gamma_si: GAMMA_SI_CODATA,
        }
    }

    /// Validated constructor: both constants must be finite and positive.
    pub fn new(c_si: f64, gamma_si: f64) -> Result<Self> {
        if !(c_si.is_finite() && gamma_si.is_finite()) {
            return Err(Error::NonFinite {
                what: "unit system constants",
            });
        }
        if c_si <= 0.0 {
            return Err(Error::OutOfRange {
                what: "speed of light",
                value: c_si,
            });
        }
        if gamma_si <= 0.0 {
            return Err(Error::OutOfRange {
                what: "gravitational constant",
                value: gamma_si,
            });
        }
        Ok(Self { c_si, gamma_si })
    }

    /// SI seconds to geometric meters.
    pub fn time_to_geo(&self, t_si: f64) -> f64 {
        t_si * self.c_si
    }

    /// Geometric meters to SI seconds.
    pub fn time_to_si(&self, t_geo: f64) -> f64 {
        t_geo / self.c_si
    }

    /// SI m/s to dimensionless coordinate speed.
    pub fn speed_to_geo(&self, v_si: f64) -> f64 {
        v_si / self.c_si
    }

    /// Dimensionless speed to SI m/s.
    pub fn speed_to_si(&self, v_geo: f64) -> f64 {
        v_geo * self.c_si
    }

    /// Standard gravitational parameter GM (m^3/s^2) to geometric mass (m).
    ///
    /// GM is what orbit determination measures directly, so it is accepted
    /// as-is without splitting into gamma * M.
    pub fn gm_to_geo(&self, gm_si: f64) -> f64 {
        gm_si / (self.c_si * self.c_si)
    }

    /// Mass in kg to geometric mass in meters (gamma M / c^2).
    pub fn mass_to_geo(&self, m_kg: f64) -> f64 {
        m_kg * self.gamma_si / (self.c_si * self.c_si)
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::codata()
    }
}

/// Dimension tag for a converted quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    Length,
    Time,
    Mass,
    Speed,
    Potential,
}

/// A value in geometric units together with its dimension tag.
///
/// Length, time, and mass all carry meters after conversion; speed and
/// potential are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricQuantity {
    pub value: f64,
    pub kind: QuantityKind,
}

/// Converts an SI value of the given kind to geometric units.
pub fn to_geometric(value_si: f64, kind: QuantityKind, u: &UnitSystem) -> Result<GeometricQuantity> {
    if !value_si.is_finite() {
        return Err(Error::NonFinite {
            what: "SI value to convert",
        });
    }
    let c = u.c_si;
    let value = match kind {
        QuantityKind::Length => value_si,
        QuantityKind::Time => value_si * c,
        QuantityKind::Mass => value_si * u.gamma_si / (c * c),
        QuantityKind::Speed => value_si / c,
        QuantityKind::Potential => value_si / (c * c),
    };
    Ok(GeometricQuantity { value, kind })
}

/// Converts a geometric quantity back to SI; exact inverse of
/// [`to_geometric`] up to one rounding step per direction.
pub fn from_geometric(q: &GeometricQuantity, u: &UnitSystem) -> Result<f64> {
    if !q.value.is_finite() {
        return Err(Error::NonFinite {
            what: "geometric value to convert",
        });
    }
    let c = u.c_si;
    Ok(match q.kind {
        QuantityKind::Length => q.value,
        QuantityKind::Time => q.value / c,
        QuantityKind::Mass => q.value * c * c / u.gamma_si,
        QuantityKind::Speed => q.value * c,
        QuantityKind::Potential => q.value * c * c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_is_identity() {
        let q = to_geometric(1.0, QuantityKind::Length, &UnitSystem::codata()).unwrap();
        assert_eq!(q.value, 1.0);
        let q = to_geometric(26_561_763.0, QuantityKind::Length, &UnitSystem::codata()).unwrap();
        assert_eq!(q.value, 26_561_763.0);
    }

    #[test]
    fn time_multiplies_by_c() {
        let q = to_geometric(1.0, QuantityKind::Time, &UnitSystem::codata()).unwrap();
        assert_eq!(q.value, 2.997_924_58e8);
    }

    #[test]
    fn speed_divides_by_c() {
        let u = UnitSystem::codata();
        let si = from_geometric(
            &GeometricQuantity {
                value: 1.29217e-5,
                kind: QuantityKind::Speed,
            },
            &u,
        )
        .unwrap();
        // 1.29217e-5 * c = 3873.87... m/s
        assert!((si - 3873.9).abs() < 0.1, "got {si}");
    }

    #[test]
    fn day_roundtrip_within_one_ulp() {
        let u = UnitSystem::codata();
        let geo = to_geometric(86_400.0, QuantityKind::Time, &u).unwrap();
        let back = from_geometric(&geo, &u).unwrap();
        assert!((back - 86_400.0).abs() <= 86_400.0 * f64::EPSILON);
    }

    #[test]
    fn non_finite_rejected() {
        let u = UnitSystem::codata();
        assert!(matches!(
            to_geometric(f64::INFINITY, QuantityKind::Time, &u),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            from_geometric(
                &GeometricQuantity {
                    value: f64::NAN,
                    kind: QuantityKind::Mass
                },
                &u
            ),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn unit_system_validation() {
        assert!(UnitSystem::new(0.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, -2.0).is_err());
        assert!(UnitSystem::new(f64::NAN, 1.0).is_err());
        assert!(UnitSystem::new(2.0, 3.0).is_ok());
    }
}
