//! Pseudorange observations, Gauss-Newton position/clock-bias estimation,
//! and the experiment quantifying what ignoring the relativistic rate does.
//!
//! Signals propagate along straight coordinate lines at c = 1, so the
//! pseudorange is `d = t_dev - t_sat` exactly. Satellite positions at
//! emission are treated as given; there is no receiver-side light-time
//! iteration. The receiver clock bias is always estimated as a fourth
//! unknown because the device cannot measure coordinate time on its own.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::Trajectory;
use crate::rates::{
    coordinate_time_of_proper_with, integrate_approximation_gap, integrate_proper_time,
    integrate_rate_offset, RateFormula,
};
use crate::schwarzschild::{validate_exterior, GravBody};
use crate::units::UnitSystem;
use crate::vector::SpaceVector;

/// Tolerance used for onboard proper-time integration and its inversion
/// when constructing broadcast times.
const CLOCK_TOL: f64 = 1e-15;

/// How a satellite turns onboard proper time into a broadcast time tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockMode {
    /// Exact rate relation; broadcast reproduces coordinate time up to the
    /// inversion tolerance.
    Exact,
    /// First-order rate relation used for the conversion.
    Approximate,
    /// No conversion at all: raw proper time goes out.
    Uncorrected,
}

impl ClockMode {
    pub fn label(&self) -> &'static str {
        match self {
            ClockMode::Exact => "exact",
            ClockMode::Approximate => "approximate",
            ClockMode::Uncorrected => "uncorrected",
        }
    }
}

/// Satellite clock: a conversion mode plus the clock reading at the
/// trajectory epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatelliteClockModel {
    pub mode: ClockMode,
    pub epoch_offset: f64,
}

impl SatelliteClockModel {
    pub fn new(mode: ClockMode, epoch_offset: f64) -> Self {
        Self { mode, epoch_offset }
    }
}

/// One broadcast/reception pair: satellite position at emission, the
/// broadcast time tag, and the reception time on the device clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudorangeObs {
    pub sat_position: SpaceVector,
    pub t_sat_broadcast: f64,
    pub t_dev: f64,
}

impl PseudorangeObs {
    /// The pseudorange `d = t_dev - t_sat` (meters at c = 1).
    pub fn pseudorange(&self) -> f64 {
        self.t_dev - self.t_sat_broadcast
    }
}

/// Converged position solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionFix {
    pub position: SpaceVector,
    /// Receiver clock bias in geometric meters (divide by c for seconds).
    pub clock_bias: f64,
    pub iterations: u32,
    pub residual_norm: f64,
    /// Condition number of the final Gauss-Newton Jacobian.
    pub condition: f64,
}

/// Tolerances and caps for the Gauss-Newton solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold on the step norm, meters.
    pub step_tol: f64,
    pub max_iter: u32,
    /// Geometry is rejected when the Jacobian condition number exceeds this.
    pub condition_cap: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_tol: 1e-9,
            max_iter: 50,
            condition_cap: 1e8,
        }
    }
}

/// Generates the observation a receiver at `receiver` makes of a signal the
/// satellite emits at coordinate time `t_emit`.
pub fn make_observation(
    body: &GravBody,
    traj: &Trajectory,
    clock: &SatelliteClockModel,
    receiver: &SpaceVector,
    t_emit: f64,
) -> Result<PseudorangeObs> {
    let state = traj.state_at(body, t_emit)?;
    if !validate_exterior(body, receiver)? {
        return Err(Error::InsideHorizon {
            radius: receiver.norm(),
            schwarzschild_radius: body.schwarzschild_radius(),
        });
    }
    let distance = (state.x - *receiver).norm();
    if distance == 0.0 {
        return Err(Error::OutOfRange {
            what: "satellite-receiver distance",
            value: 0.0,
        });
    }
    let t_dev = t_emit + distance;

    let epoch = traj.epoch();
    let elapsed_proper = integrate_proper_time(body, traj, epoch, t_emit, CLOCK_TOL)?;
    let t_sat_broadcast = match clock.mode {
        ClockMode::Uncorrected => clock.epoch_offset + elapsed_proper,
        ClockMode::Exact => coordinate_time_of_proper_with(
            body,
            traj,
            epoch,
            elapsed_proper,
            CLOCK_TOL,
            RateFormula::Exact,
        )?,
        ClockMode::Approximate => coordinate_time_of_proper_with(
            body,
            traj,
            epoch,
            elapsed_proper,
            CLOCK_TOL,
            RateFormula::Approximate,
        )?,
    };

    Ok(PseudorangeObs {
        sat_position: state.x,
        t_sat_broadcast,
        t_dev,
    })
}

/// Broadcast-minus-coordinate time divergence of the given clock at
/// `t_emit`, computed through tiny integrals so no precision is lost to the
/// large common part of the time tags.
pub fn clock_divergence(
    body: &GravBody,
    traj: &Trajectory,
    clock: &SatelliteClockModel,
    t_emit: f64,
) -> Result<f64> {
    let epoch = traj.epoch();
    match clock.mode {
        ClockMode::Uncorrected => Ok(clock.epoch_offset
            + integrate_rate_offset(body, traj, epoch, t_emit, CLOCK_TOL)?),
        ClockMode::Approximate => integrate_approximation_gap(body, traj, epoch, t_emit, CLOCK_TOL),
        ClockMode::Exact => Ok(0.0),
    }
}

/// Residual vector plus the largest range, which sets the rounding-noise
/// floor of the residual norm.
fn residuals(
    obs: &[PseudorangeObs],
    position: &SpaceVector,
    bias: f64,
) -> Result<(DVector<f64>, f64)> {
    let mut r = DVector::zeros(obs.len());
    let mut scale: f64 = 0.0;
    for (i, o) in obs.iter().enumerate() {
        let range = (o.sat_position - *position).norm();
        if range == 0.0 {
            return Err(Error::OutOfRange {
                what: "iterate-to-satellite distance",
                value: 0.0,
            });
        }
        scale = scale.max(range).max(o.pseudorange().abs());
        r[i] = range - (o.pseudorange() - bias);
    }
    Ok((r, scale))
}

fn jacobian(obs: &[PseudorangeObs], position: &SpaceVector) -> DMatrix<f64> {
    DMatrix::from_fn(obs.len(), 4, |i, j| {
        let to_iterate = *position - obs[i].sat_position;
        let range = to_iterate.norm();
        match j {
            0 => to_iterate.x / range,
            1 => to_iterate.y / range,
            2 => to_iterate.z / range,
            _ => 1.0,
        }
    })
}

/// Gauss-Newton least squares for receiver position and clock bias from
/// four or more pseudorange observations.
pub fn solve_position(
    obs: &[PseudorangeObs],
    initial_position: &SpaceVector,
    initial_bias: f64,
    cfg: &SolverConfig,
) -> Result<PositionFix> {
    if obs.len() < 4 {
        return Err(Error::InsufficientObservations {
            got: obs.len(),
            needed: 4,
        });
    }

    let mut position = *initial_position;
    let mut bias = initial_bias;
    let (mut r, mut range_scale) = residuals(obs, &position, bias)?;
    let mut stalls = 0u32;

    for iteration in 1..=cfg.max_iter {
        let j = jacobian(obs, &position);
        let svd = j.svd(true, true);
        let s_max = svd.singular_values.max();
        let s_min = svd.singular_values.min();
        let condition = if s_min > 0.0 {
            s_max / s_min
        } else {
            f64::INFINITY
        };
        if !condition.is_finite() || condition > cfg.condition_cap {
            return Err(Error::DegenerateGeometry {
                condition,
                cap: cfg.condition_cap,
            });
        }

        let mut step = svd
            .solve(&(-&r), 0.0)
            .map_err(|_| Error::DegenerateGeometry {
                condition,
                cap: cfg.condition_cap,
            })?;

        let converged = |position: SpaceVector, bias: f64, residual_norm: f64| PositionFix {
            position,
            clock_bias: bias,
            iterations: iteration,
            residual_norm,
            condition,
        };

        // The proposed correction already being below tolerance means the
        // current iterate is the solution; taking the step would only stir
        // rounding noise.
        if step.norm() < cfg.step_tol {
            return Ok(converged(position, bias, r.norm()));
        }

        // Plain Gauss-Newton, falling back to halved steps whenever the
        // residual norm meaningfully increases. "Meaningfully" allows for
        // the rounding floor of the range computations, so ulp-level
        // dithering near the solution doesn't trigger endless halving.
        let current_norm = r.norm();
        let noise_slack = 32.0 * f64::EPSILON * range_scale * (obs.len() as f64).sqrt();
        let mut halvings = 0;
        let (next_position, next_bias, next_r, next_scale) = loop {
            let candidate_position = position + SpaceVector::new(step[0], step[1], step[2]);
            let candidate_bias = bias + step[3];
            let (candidate_r, candidate_scale) =
                residuals(obs, &candidate_position, candidate_bias)?;
            if candidate_r.norm() <= current_norm + noise_slack {
                break (candidate_position, candidate_bias, candidate_r, candidate_scale);
            }
            halvings += 1;
            if halvings > 30 {
                return Err(Error::Convergence {
                    what: "Gauss-Newton step search",
                    budget: 30,
                });
            }
            step *= 0.5;
        };

        // Quantized observation times put a floor under the achievable
        // residual; two consecutive iterations without measurable progress
        // mean the iterate has converged to that floor, and moving along
        // noise-level "improvements" would break solve idempotence.
        let improvement = current_norm - next_r.norm();
        if improvement <= noise_slack {
            stalls += 1;
            if stalls >= 2 {
                return Ok(converged(position, bias, current_norm));
            }
        } else {
            stalls = 0;
            position = next_position;
            bias = next_bias;
            r = next_r;
            range_scale = next_scale;
        }
    }

    Err(Error::Convergence {
        what: "Gauss-Newton",
        budget: cfg.max_iter as usize,
    })
}

/// Scenario for the relativity-impact experiment: one constellation, a
/// receiver, and a clock-mode pair to compare per epoch.
#[derive(Debug, Clone)]
pub struct ImpactScenario {
    pub body: GravBody,
    pub units: UnitSystem,
    pub satellites: Vec<Trajectory>,
    pub receiver: SpaceVector,
    /// First epoch, geometric time.
    pub t_start: f64,
    /// Mission duration over which epochs are spread, geometric time.
    pub duration: f64,
    pub epochs: usize,
    pub reference_mode: ClockMode,
    pub test_mode: ClockMode,
    pub epoch_offset: f64,
    pub solver: SolverConfig,
    pub initial_guess: SpaceVector,
    /// Standard deviation of reception-time noise, meters; 0 disables noise.
    pub noise_sigma_m: f64,
    pub seed: u64,
}

/// One epoch/mode row of the impact report. All quantities are SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactRecord {
    pub epoch_s: f64,
    pub mode: String,
    /// Distance between this mode's fix and the reference-mode fix, meters.
    pub position_error_m: f64,
    /// Broadcast-minus-coordinate clock divergence, seconds.
    pub clock_divergence_s: f64,
    pub iterations: u32,
    pub residual_norm_m: f64,
    /// Set when the solve for this epoch failed; numeric fields are NaN.
    pub error: Option<String>,
}

/// Full experiment output; serializes to JSON as-is, and to CSV row-by-row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactReport {
    pub seed: u64,
    pub noise_sigma_m: f64,
    pub reference_mode: String,
    pub test_mode: String,
    pub records: Vec<ImpactRecord>,
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u is bounded away from zero.
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

fn solve_epoch(
    scenario: &ImpactScenario,
    mode: ClockMode,
    t_emit: f64,
    noise: &[f64],
) -> Result<PositionFix> {
    let clock = SatelliteClockModel::new(mode, scenario.epoch_offset);
    let mut observations = Vec::with_capacity(scenario.satellites.len());
    for (traj, delta) in scenario.satellites.iter().zip(noise) {
        let mut obs = make_observation(&scenario.body, traj, &clock, &scenario.receiver, t_emit)?;
        obs.t_dev += delta;
        observations.push(obs);
    }
    solve_position(&observations, &scenario.initial_guess, 0.0, &scenario.solver)
}

/// Runs the epoch-by-epoch comparison of the two clock modes.
///
/// Per-epoch solver failures are recorded in the report rather than aborting
/// the experiment; the output is deterministic for a given scenario.
pub fn relativity_impact_experiment(scenario: &ImpactScenario) -> Result<ImpactReport> {
    if scenario.satellites.len() < 4 {
        return Err(Error::InsufficientObservations {
            got: scenario.satellites.len(),
            needed: 4,
        });
    }
    if scenario.epochs == 0 {
        return Err(Error::OutOfRange {
            what: "epoch count",
            value: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut records = Vec::with_capacity(2 * scenario.epochs);
    let spacing = scenario.duration / scenario.epochs as f64;

    for k in 1..=scenario.epochs {
        let t_emit = scenario.t_start + spacing * k as f64;
        let epoch_s = scenario.units.time_to_si(t_emit);
        let noise: Vec<f64> = scenario
            .satellites
            .iter()
            .map(|_| {
                if scenario.noise_sigma_m > 0.0 {
                    scenario.noise_sigma_m * gaussian(&mut rng)
                } else {
                    0.0
                }
            })
            .collect();

        let reference = solve_epoch(scenario, scenario.reference_mode, t_emit, &noise);
        for mode in [scenario.reference_mode, scenario.test_mode] {
            let divergence = scenario.satellites[0]
                .clone()
                .state_at(&scenario.body, t_emit)
                .and_then(|_| {
                    clock_divergence(
                        &scenario.body,
                        &scenario.satellites[0],
                        &SatelliteClockModel::new(mode, scenario.epoch_offset),
                        t_emit,
                    )
                });
            let fix = if mode == scenario.reference_mode {
                reference.clone()
            } else {
                solve_epoch(scenario, mode, t_emit, &noise)
            };
            let record = match (&reference, fix, divergence) {
                (Ok(reference_fix), Ok(fix), Ok(div_geo)) => ImpactRecord {
                    epoch_s,
                    mode: mode.label().to_string(),
                    position_error_m: (fix.position - reference_fix.position).norm(),
                    clock_divergence_s: scenario.units.time_to_si(div_geo),
                    iterations: fix.iterations,
                    residual_norm_m: fix.residual_norm,
                    error: None,
                },
                (_, fix, divergence) => ImpactRecord {
                    epoch_s,
                    mode: mode.label().to_string(),
                    position_error_m: f64::NAN,
                    clock_divergence_s: divergence.map(|d| scenario.units.time_to_si(d)).unwrap_or(f64::NAN),
                    iterations: 0,
                    residual_norm_m: f64::NAN,
                    error: Some(match fix {
                        Err(e) => e.to_string(),
                        Ok(_) => reference
                            .as_ref()
                            .err()
                            .map(|e| format!("reference solve failed: {e}"))
                            .unwrap_or_else(|| "unknown failure".to_string()),
                    }),
                },
            };
            records.push(record);
        }
    }

    Ok(ImpactReport {
        seed: scenario.seed,
        noise_sigma_m: scenario.noise_sigma_m,
        reference_mode: scenario.reference_mode.label().to_string(),
        test_mode: scenario.test_mode.label().to_string(),
        records,
    })
}
