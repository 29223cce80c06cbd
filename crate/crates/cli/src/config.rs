//! Scenario configuration: a single TOML file holding unit constants, the
//! central body, orbits, receivers, and per-command experiment blocks.
//!
//! All values in the file are SI (meters, seconds, degrees); conversion to
//! geometric units happens once, here, when the blocks are resolved against
//! the core types.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use relclock::orbits::{KeplerElements, Trajectory};
use relclock::positioning::{ClockMode, SolverConfig};
use relclock::rates::GeoidConstant;
use relclock::schwarzschild::GravBody;
use relclock::units::UnitSystem;
use relclock::vector::SpaceVector;

use crate::CliError;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub units: UnitsBlock,
    pub body: Option<BodyBlock>,
    pub geoid: Option<GeoidBlock>,
    #[serde(default)]
    pub orbits: Vec<OrbitBlock>,
    #[serde(default)]
    pub receivers: Vec<ReceiverBlock>,
    pub rate: Option<RateBlock>,
    pub drift: Option<DriftBlock>,
    pub orbit_sampling: Option<OrbitSamplingBlock>,
    pub solve: Option<SolveBlock>,
    pub impact: Option<ImpactBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsBlock {
    /// Speed of light, m/s.
    pub c: f64,
    /// Gravitational constant, m^3/(kg s^2).
    pub gamma: f64,
}

impl Default for UnitsBlock {
    fn default() -> Self {
        let u = UnitSystem::codata();
        Self {
            c: u.c_si,
            gamma: u.gamma_si,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyBlock {
    /// Standard gravitational parameter GM, m^3/s^2.
    pub gm: Option<f64>,
    /// Mass in kg (used when gm is absent).
    pub mass_kg: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeoidBlock {
    pub phi0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitBlock {
    pub name: String,
    pub semi_major_axis_m: f64,
    #[serde(default)]
    pub eccentricity: f64,
    #[serde(default)]
    pub inclination_deg: f64,
    #[serde(default)]
    pub raan_deg: f64,
    #[serde(default)]
    pub arg_perigee_deg: f64,
    #[serde(default)]
    pub mean_anomaly_deg: f64,
    #[serde(default)]
    pub epoch_s: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverBlock {
    pub name: String,
    pub position_m: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateBlock {
    pub orbit: String,
    #[serde(default)]
    pub t_s: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftBlock {
    pub orbit: String,
    pub duration_s: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSamplingBlock {
    pub orbit: String,
    #[serde(default)]
    pub start_s: f64,
    pub duration_s: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveBlock {
    pub satellites: Vec<String>,
    pub receiver: String,
    #[serde(default)]
    pub t_emit_s: f64,
    #[serde(default = "default_mode")]
    pub clock_mode: ClockMode,
    #[serde(default)]
    pub epoch_offset_s: f64,
    /// Starting point for the Gauss-Newton iteration; defaults to the
    /// configured receiver position (a warm start from a last known fix).
    pub initial_guess_m: Option<[f64; 3]>,
    #[serde(default)]
    pub solver: SolverBlock,
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub step_tol_m: Option<f64>,
    pub max_iter: Option<u32>,
    pub condition_cap: Option<f64>,
}

impl SolverBlock {
    pub fn resolve(&self) -> SolverConfig {
        let defaults = SolverConfig::default();
        SolverConfig {
            step_tol: self.step_tol_m.unwrap_or(defaults.step_tol),
            max_iter: self.max_iter.unwrap_or(defaults.max_iter),
            condition_cap: self.condition_cap.unwrap_or(defaults.condition_cap),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactBlock {
    pub satellites: Vec<String>,
    pub receiver: String,
    #[serde(default)]
    pub start_s: f64,
    pub duration_s: f64,
    pub epochs: usize,
    #[serde(default = "default_mode")]
    pub reference_mode: ClockMode,
    pub test_mode: ClockMode,
    #[serde(default)]
    pub epoch_offset_s: f64,
    #[serde(default)]
    pub noise_sigma_m: f64,
    pub seed: Option<u64>,
    pub initial_guess_m: Option<[f64; 3]>,
    #[serde(default)]
    pub solver: SolverBlock,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub format: Option<crate::output::Format>,
    pub seed: Option<u64>,
}

fn default_tol() -> f64 {
    1e-14
}

fn default_mode() -> ClockMode {
    ClockMode::Exact
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        let config: ScenarioConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        let mut names = BTreeMap::new();
        for orbit in &self.orbits {
            if names.insert(orbit.name.clone(), ()).is_some() {
                return Err(CliError::Config(format!(
                    "duplicate orbit name '{}'",
                    orbit.name
                )));
            }
        }
        let mut receivers = BTreeMap::new();
        for receiver in &self.receivers {
            if receivers.insert(receiver.name.clone(), ()).is_some() {
                return Err(CliError::Config(format!(
                    "duplicate receiver name '{}'",
                    receiver.name
                )));
            }
        }
        Ok(())
    }

    pub fn unit_system(&self) -> Result<UnitSystem, CliError> {
        UnitSystem::new(self.units.c, self.units.gamma).map_err(CliError::from)
    }

    pub fn grav_body(&self) -> Result<GravBody, CliError> {
        let units = self.unit_system()?;
        let block = self
            .body
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [body] block".into()))?;
        match (block.gm, block.mass_kg) {
            (Some(gm), _) => GravBody::from_gm_si(gm, &units).map_err(CliError::from),
            (None, Some(mass)) => GravBody::from_mass_kg(mass, &units).map_err(CliError::from),
            (None, None) => Err(CliError::Config(
                "[body] needs either gm or mass_kg".into(),
            )),
        }
    }

    pub fn geoid(&self) -> Result<Option<GeoidConstant>, CliError> {
        self.geoid
            .as_ref()
            .map(|g| GeoidConstant::new(g.phi0).map_err(CliError::from))
            .transpose()
    }

    pub fn orbit(&self, name: &str) -> Result<&OrbitBlock, CliError> {
        self.orbits
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| CliError::Config(format!("orbit '{name}' not defined")))
    }

    pub fn receiver(&self, name: &str) -> Result<SpaceVector, CliError> {
        self.receivers
            .iter()
            .find(|r| r.name == name)
            .map(|r| SpaceVector::from(r.position_m))
            .ok_or_else(|| CliError::Config(format!("receiver '{name}' not defined")))
    }

    pub fn trajectory(&self, name: &str) -> Result<Trajectory, CliError> {
        let block = self.orbit(name)?;
        let units = self.unit_system()?;
        let elements = block.elements(&units)?;
        if block.eccentricity == 0.0 {
            Trajectory::circular(elements).map_err(CliError::from)
        } else {
            Ok(Trajectory::kepler(elements))
        }
    }
}

impl OrbitBlock {
    pub fn elements(&self, units: &UnitSystem) -> Result<KeplerElements, CliError> {
        KeplerElements::new(
            self.semi_major_axis_m,
            self.eccentricity,
            self.inclination_deg.to_radians(),
            self.raan_deg.to_radians(),
            self.arg_perigee_deg.to_radians(),
            self.mean_anomaly_deg.to_radians(),
            units.time_to_geo(self.epoch_s),
        )
        .map_err(CliError::from)
    }
}
