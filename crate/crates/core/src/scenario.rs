//! Scenario files: parsing, validity rules, and the sampled run.
//!
//! A scenario is a TOML document; see the README for an annotated example.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MomentumGrid;
use crate::observables::{conservation_residuals, distribution, DistributionSnapshot, ObservableRecord, Residuals};
use crate::oracle::{compare_propagators, OdeSettings};
use crate::propagator::{dressed_spectrum, evolve};
use crate::state::{assemble_state, gaussian_amplitudes, Level, TabulatedAmplitudes, TwoLevelState};
use crate::units::{to_dimensionless, PhysicalParams, SimParams};

/// Largest conservation residual tolerated during a run.
pub const RUN_RESIDUAL_LIMIT: f64 = 1e-8;
/// Largest analytic-vs-oracle amplitude difference accepted by `verify`.
pub const VERIFY_MAX_ERROR: f64 = 1e-8;
pub const VERIFY_MAX_NORM_DRIFT: f64 = 1e-10;
pub const VERIFY_MAX_MOMENTUM_DRIFT: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// SI parameters; converted to recoil units on load.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalBlock {
    /// kg
    pub atomic_mass: f64,
    /// m
    pub wavelength: f64,
    /// ω₀ − ω, rad/s
    #[serde(default)]
    pub detuning: f64,
    /// Ω, rad/s
    pub rabi_frequency: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub center: f64,
    pub half_width: f64,
    pub n_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Gaussian {
        /// physical momentum of the packet center, ħk units
        center: f64,
        /// rms width of |ψ|², ħk units
        sigma: f64,
        #[serde(default)]
        phase_slope: f64,
    },
    /// `p Re Im` rows on the physical momentum axis
    Tabulated { path: PathBuf },
    /// unit amplitude on a single-point grid
    Definite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    #[serde(flatten)]
    pub shape: Shape,
    /// complex weight as [re, im]
    #[serde(default = "unit_weight")]
    pub weight: [f64; 2],
}

fn unit_weight() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_samples() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub tau_max: f64,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub snapshot_taus: Vec<f64>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_series() -> String {
    "series.csv".into()
}

fn default_summary() -> String {
    "summary.json".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_series")]
    pub series: String,
    #[serde(default = "default_summary")]
    pub summary: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: default_dir(), series: default_series(), summary: default_summary() }
    }
}

/// Raw scenario document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub override_validity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SimParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalBlock>,
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<LevelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excited: Option<LevelSpec>,
    pub schedule: Schedule,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ScenarioFile {
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes")
    }
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub params: SimParams,
    pub grid: MomentumGrid,
    /// directory that relative paths are resolved against
    pub base_dir: PathBuf,
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    load_scenario_with(path, false)
}

/// Like [`load_scenario`], with `force_override` skipping the validity rules
/// regardless of the file's `override_validity` key.
pub fn load_scenario_with(path: &Path, force_override: bool) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut file: ScenarioFile =
        toml::from_str(&text).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
    file.override_validity |= force_override;
    Scenario::from_file(file, &base)
}

pub fn parse_scenario(text: &str, base_dir: &Path) -> Result<Scenario> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
    Scenario::from_file(file, base_dir)
}

impl Scenario {
    pub fn from_file(file: ScenarioFile, base_dir: &Path) -> Result<Self> {
        let params = match (&file.params, &file.physical) {
            (Some(p), None) => {
                p.validate()?;
                *p
            }
            (None, Some(ph)) => to_dimensionless(&PhysicalParams::from_wavelength(
                ph.atomic_mass,
                ph.wavelength,
                ph.detuning,
                ph.rabi_frequency,
            )?)?,
            (Some(_), Some(_)) => {
                return Err(Error::Scenario("give either [params] or [physical], not both".into()))
            }
            (None, None) => return Err(Error::Scenario("missing [params] or [physical]".into())),
        };
        let grid = MomentumGrid::new(file.grid.center, file.grid.half_width, file.grid.n_points)?;
        if file.ground.is_none() && file.excited.is_none() {
            return Err(Error::Scenario("at least one of [ground], [excited] is required".into()));
        }
        let sched = &file.schedule;
        if !(sched.tau_max > 0.0 && sched.tau_max.is_finite()) {
            return Err(Error::Scenario(format!("tau_max must be > 0, got {}", sched.tau_max)));
        }
        if sched.n_samples < 2 {
            return Err(Error::Scenario(format!("n_samples must be >= 2, got {}", sched.n_samples)));
        }
        if let Some(t) = sched.snapshot_taus.iter().find(|t| !(0.0..=sched.tau_max).contains(*t)) {
            return Err(Error::Scenario(format!("snapshot tau {t} outside [0, tau_max]")));
        }
        for spec in [&file.ground, &file.excited].into_iter().flatten() {
            match spec.shape {
                Shape::Definite if !grid.is_single_point() => {
                    return Err(Error::Scenario("kind = \"definite\" requires n_points = 1".into()))
                }
                Shape::Gaussian { sigma, .. } if sigma.is_nan() || sigma <= 0.0 => {
                    return Err(Error::Scenario(format!("sigma must be > 0, got {sigma}")))
                }
                _ => {}
            }
        }
        let scenario = Self { file, params, grid, base_dir: base_dir.to_path_buf() };
        if !scenario.file.override_validity {
            scenario.check_validity()?;
        }
        Ok(scenario)
    }

    /// Grid adequacy and time validity. Violations name the rule.
    pub fn check_validity(&self) -> Result<()> {
        let g = &self.grid;
        for (level, spec) in self.levels() {
            if let Shape::Gaussian { center, sigma, .. } = spec.shape {
                if g.is_single_point() {
                    return Err(Error::Validity(format!(
                        "grid adequacy: {level} Gaussian packet needs a multi-point grid"
                    )));
                }
                let half_width = 0.5 * (g.p_max() - g.p_min());
                let need = (center - g.center()).abs() + 6.0 * sigma + 1.0;
                if half_width < need - 1e-12 {
                    return Err(Error::Validity(format!(
                        "grid adequacy: half_width >= |center offset| + 6 sigma + 1 \
                         ({half_width} < {need}) for the {level} packet"
                    )));
                }
                if g.dp() > sigma / 8.0 {
                    return Err(Error::Validity(format!(
                        "grid adequacy: dp <= sigma/8 ({} > {}) for the {level} packet",
                        g.dp(),
                        sigma / 8.0
                    )));
                }
            }
        }
        if !g.is_single_point() {
            let advance = 2.0 * g.dp() * self.file.schedule.tau_max;
            if advance > PI / 4.0 {
                return Err(Error::Validity(format!(
                    "time validity: 2 dp tau_max <= pi/4 ({advance:.4} > {:.4}); \
                     refine the grid or shorten tau_max",
                    PI / 4.0
                )));
            }
        }
        Ok(())
    }

    fn levels(&self) -> impl Iterator<Item = (Level, &LevelSpec)> {
        [(Level::Ground, &self.file.ground), (Level::Excited, &self.file.excited)]
            .into_iter()
            .filter_map(|(l, s)| s.as_ref().map(|s| (l, s)))
    }

    fn amplitudes(&self, level: Level, spec: &LevelSpec) -> Result<Vec<C64>> {
        match &spec.shape {
            Shape::Gaussian { center, sigma, phase_slope } => {
                gaussian_amplitudes(&self.grid, level, *center, *sigma, *phase_slope)
            }
            Shape::Tabulated { path } => {
                let table = TabulatedAmplitudes::read(&self.base_dir.join(path))?;
                Ok(table.resample(&self.grid, level))
            }
            Shape::Definite => Ok(vec![C64::new(1.0, 0.0); self.grid.len()]),
        }
    }

    pub fn initial_state(&self) -> Result<TwoLevelState> {
        let mut ground = None;
        let mut excited = None;
        let mut weights = [C64::new(0.0, 0.0); 2];
        for (level, spec) in self.levels() {
            let amps = self.amplitudes(level, spec)?;
            let w = C64::new(spec.weight[0], spec.weight[1]);
            match level {
                Level::Ground => {
                    ground = Some(amps);
                    weights[0] = w;
                }
                Level::Excited => {
                    excited = Some(amps);
                    weights[1] = w;
                }
            }
        }
        assemble_state(self.grid, ground.as_deref(), excited.as_deref(), weights[0], weights[1])
    }

    pub fn sample_taus(&self) -> Vec<f64> {
        let s = &self.file.schedule;
        let last = (s.n_samples - 1) as f64;
        (0..s.n_samples).map(|k| s.tau_max * k as f64 / last).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub tau: f64,
    pub state: TwoLevelState,
}

impl Snapshot {
    pub fn distribution(&self, level: Level) -> DistributionSnapshot {
        distribution(&self.state, level)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: Vec<ObservableRecord>,
    pub snapshots: Vec<Snapshot>,
    /// largest residuals over all samples
    pub residuals: Residuals,
}

/// Evolves the initial state to every sample time (each directly from τ = 0)
/// and collects observables, snapshots and conservation residuals.
pub fn run(scenario: &Scenario) -> Result<RunOutput> {
    let state0 = scenario.initial_state()?;
    let params = scenario.params;
    let mut records = Vec::with_capacity(scenario.file.schedule.n_samples);
    let mut residuals = Residuals { norm_drift: 0.0, momentum_drift: 0.0 };
    for tau in scenario.sample_taus() {
        let state = evolve(&state0, tau, &params);
        let r = conservation_residuals(&state, &state0)?;
        if r.norm_drift > RUN_RESIDUAL_LIMIT || r.momentum_drift > RUN_RESIDUAL_LIMIT {
            return Err(Error::Numeric(format!(
                "conservation residual above {RUN_RESIDUAL_LIMIT:e} at tau = {tau}: \
                 norm drift {:.3e}, momentum drift {:.3e}",
                r.norm_drift, r.momentum_drift
            )));
        }
        residuals = residuals.max(r);
        records.push(ObservableRecord::from_state(&state));
    }
    for r in &records {
        r.check()?;
    }
    let snapshots = scenario
        .file
        .schedule
        .snapshot_taus
        .iter()
        .map(|&tau| Snapshot { tau, state: evolve(&state0, tau, &params) })
        .collect();
    Ok(RunOutput { records, snapshots, residuals })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyReport {
    pub tau: f64,
    pub max_error: f64,
    pub residuals: Residuals,
    pub passed: bool,
}

/// Compares the closed-form propagator with the oracle at τ_max and checks
/// conservation there.
pub fn verify(scenario: &Scenario, settings: Option<OdeSettings>) -> Result<VerifyReport> {
    let state0 = scenario.initial_state()?;
    let params = scenario.params;
    let settings = settings.unwrap_or_else(|| {
        OdeSettings::default_for(dressed_spectrum(&scenario.grid, &params).beta_max())
    });
    let tau = scenario.file.schedule.tau_max;
    let max_error = compare_propagators(&state0, tau, &params, &settings)?;
    let residuals = conservation_residuals(&evolve(&state0, tau, &params), &state0)?;
    let passed = max_error <= VERIFY_MAX_ERROR
        && residuals.norm_drift <= VERIFY_MAX_NORM_DRIFT
        && residuals.momentum_drift <= VERIFY_MAX_MOMENTUM_DRIFT;
    Ok(VerifyReport { tau, max_error, residuals, passed })
}
