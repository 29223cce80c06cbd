//! Adaptive Gauss-Kronrod quadrature with embedded error estimation.
//!
//! Each interval is scored with a 15-point Kronrod rule whose embedded
//! 7-point Gauss rule supplies the error estimate; intervals failing their
//! proportional share of the error budget are bisected, up to a hard cap of
//! subdivisions.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half, descending) and weights, with
// the embedded 7-point Gauss weights. Standard QUADPACK DQK15 constants.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on interval bisections before giving up.
pub(crate) const MAX_SUBDIVISIONS: usize = 1_000_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Quadrature {
    pub value: f64,
    #[allow(dead_code)]
    pub error_estimate: f64,
    #[allow(dead_code)]
    pub subdivisions: usize,
}

/// One Kronrod-15 panel: returns (integral, |K15 - G7| estimate).
fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center)?;
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];

    // Gauss nodes sit at the odd Kronrod indices.
    for (j, wg) in WG.iter().enumerate().take(3) {
        let i = 2 * j + 1;
        let x = half * XGK[i];
        let sum = f(center - x)? + f(center + x)?;
        gauss += wg * sum;
        kronrod += WGK[i] * sum;
    }
    for j in 0..4 {
        let i = 2 * j;
        let x = half * XGK[i];
        let sum = f(center - x)? + f(center + x)?;
        kronrod += WGK[i] * sum;
    }

    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integrates `f` over `[a, b]` so that the accumulated error estimate stays
/// below `tol * (b - a)`; bisects intervals whose estimate exceeds their
/// proportional share of that budget.
pub(crate) fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite {
            what: "integration bounds",
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::OutOfRange {
            what: "quadrature tolerance",
            value: tol,
        });
    }
    if a > b {
        return Err(Error::OutOfRange {
            what: "integration interval (t1 - t0)",
            value: b - a,
        });
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }

    let mut stack = vec![(a, b)];
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut subdivisions = 0usize;

    while let Some((lo, hi)) = stack.pop() {
        let (value, err) = kronrod15(&mut f, lo, hi)?;
        let len = hi - lo;
        let mid = 0.5 * (lo + hi);
        // Accept on meeting the proportional budget, or when the interval
        // has no representable midpoint left to split at.
        if err <= tol * len || mid <= lo || mid >= hi {
            total += value;
            total_err += err;
            continue;
        }
        subdivisions += 1;
        if subdivisions > MAX_SUBDIVISIONS {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                budget: MAX_SUBDIVISIONS,
            });
        }
        stack.push((lo, mid));
        stack.push((mid, hi));
    }

    Ok(Quadrature {
        value: total,
        error_estimate: total_err,
        subdivisions,
    })
}
