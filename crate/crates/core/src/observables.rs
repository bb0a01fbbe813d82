//! Per-level populations, momenta and kinetic energies.
//!
//! All integrals are trapezoidal sums over the grid in index order, so the
//! same state always yields bit-identical values. Excited-level moments use
//! the physical momentum p̃ + 1 of each excited slot.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{Level, TwoLevelState};

/// Populations below this leave the normalized quantities undefined.
pub const POPULATION_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservableRecord {
    pub tau: f64,
    pub n_g: f64,
    pub n_e: f64,
    pub p_mean_g: f64,
    pub p_mean_e: f64,
    pub p_norm_g: Option<f64>,
    pub p_norm_e: Option<f64>,
    pub e_kin_g: f64,
    pub e_kin_e: f64,
    pub e_kin_total: f64,
    pub e_norm_g: Option<f64>,
    pub e_norm_e: Option<f64>,
}

impl ObservableRecord {
    pub fn from_state(state: &TwoLevelState) -> Self {
        let (n_g, n_e) = populations(state);
        let (p_mean_g, p_mean_e) = level_momenta(state);
        let (e_kin_g, e_kin_e, e_kin_total) = level_kinetic(state);
        Self {
            tau: state.tau,
            n_g,
            n_e,
            p_mean_g,
            p_mean_e,
            p_norm_g: ratio(p_mean_g, n_g),
            p_norm_e: ratio(p_mean_e, n_e),
            e_kin_g,
            e_kin_e,
            e_kin_total,
            e_norm_g: ratio(e_kin_g, n_g),
            e_norm_e: ratio(e_kin_e, n_e),
        }
    }

    /// ⟨p⟩_g + ⟨p⟩_e − n_e, conserved because every family keeps its population.
    pub fn conserved_momentum(&self) -> f64 {
        self.p_mean_g + self.p_mean_e - self.n_e
    }

    /// Checks the population bounds and the kinetic-energy split.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Numeric(format!("tau = {}: {msg}", self.tau)));
        for (name, n) in [("n_g", self.n_g), ("n_e", self.n_e)] {
            if !(n.is_finite() && (0.0..=1.0 + 1e-12).contains(&n)) {
                return bad(format!("{name} = {n} outside [0, 1]"));
            }
        }
        let sum = self.n_g + self.n_e;
        if (sum - 1.0).abs() > 1e-10 {
            return bad(format!("n_g + n_e = {sum}"));
        }
        if self.e_kin_total != self.e_kin_g + self.e_kin_e {
            return bad("kinetic energy split is not exact".into());
        }
        if self.p_norm_g.is_some() != (self.n_g >= POPULATION_EPS)
            || self.p_norm_e.is_some() != (self.n_e >= POPULATION_EPS)
        {
            return bad("normalized momentum definedness does not match population".into());
        }
        Ok(())
    }
}

#[inline]
fn ratio(x: f64, n: f64) -> Option<f64> {
    (n >= POPULATION_EPS).then(|| x / n)
}

/// Weighted moment ∫ |ψ_level|² f(p) dp over the level's physical momenta.
fn moment(state: &TwoLevelState, level: Level, f: impl Fn(f64) -> f64) -> f64 {
    let amps = state.amplitudes(level);
    state.grid.integrate_with(|j| amps[j].norm_sqr() * f(state.momentum(level, j)))
}

pub fn populations(state: &TwoLevelState) -> (f64, f64) {
    (moment(state, Level::Ground, |_| 1.0), moment(state, Level::Excited, |_| 1.0))
}

pub fn level_momenta(state: &TwoLevelState) -> (f64, f64) {
    (moment(state, Level::Ground, |p| p), moment(state, Level::Excited, |p| p))
}

/// ⟨p⟩/n per level; `None` where the level population is below [`POPULATION_EPS`].
pub fn normalized_momenta(state: &TwoLevelState) -> (Option<f64>, Option<f64>) {
    let (n_g, n_e) = populations(state);
    let (p_g, p_e) = level_momenta(state);
    (ratio(p_g, n_g), ratio(p_e, n_e))
}

/// Kinetic energy per level and total, in recoil energies (p̃² per sample).
pub fn level_kinetic(state: &TwoLevelState) -> (f64, f64, f64) {
    let g = moment(state, Level::Ground, |p| p * p);
    let e = moment(state, Level::Excited, |p| p * p);
    (g, e, g + e)
}

pub fn normalized_kinetic(state: &TwoLevelState) -> (Option<f64>, Option<f64>) {
    let (n_g, n_e) = populations(state);
    let (e_g, e_e, _) = level_kinetic(state);
    (ratio(e_g, n_g), ratio(e_e, n_e))
}

/// Momentum-space density of one level on its physical momentum axis.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSnapshot {
    pub tau: f64,
    pub level: Level,
    pub momenta: Vec<f64>,
    pub density: Vec<f64>,
}

pub fn distribution(state: &TwoLevelState, level: Level) -> DistributionSnapshot {
    let amps = state.amplitudes(level);
    DistributionSnapshot {
        tau: state.tau,
        level,
        momenta: (0..amps.len()).map(|j| state.momentum(level, j)).collect(),
        density: amps.iter().map(|z| z.norm_sqr()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub norm_drift: f64,
    pub momentum_drift: f64,
}

impl Residuals {
    pub fn max(self, other: Residuals) -> Residuals {
        Residuals {
            norm_drift: self.norm_drift.max(other.norm_drift),
            momentum_drift: self.momentum_drift.max(other.momentum_drift),
        }
    }
}

/// Drift of the norm and of ⟨p⟩_g + ⟨p⟩_e − n_e between two states on the same grid.
pub fn conservation_residuals(state: &TwoLevelState, initial: &TwoLevelState) -> Result<Residuals> {
    if state.grid != initial.grid {
        return Err(Error::GridMismatch);
    }
    let now = ObservableRecord::from_state(state);
    let then = ObservableRecord::from_state(initial);
    Ok(Residuals {
        norm_drift: (state.norm() - initial.norm()).abs(),
        momentum_drift: (now.conserved_momentum() - then.conserved_momentum()).abs(),
    })
}
