//! Brute-force reference for the closed-form propagator.
//!
//! Each family's coupled amplitude equations are integrated with classic
//! fourth-order Runge–Kutta in the interaction picture, where the free
//! phases are stripped:
//!
//! ```text
//! i dā/dτ = −(Ω/2) e^{−iατ} b̄
//! i db̄/dτ = −(Ω/2) e^{+iατ} ā
//! ```
//!
//! The result is mapped back with a = e^{−i(K−α/2)τ} ā and b = e^{−i(K+α/2)τ} b̄.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagator::{dressed_spectrum, family_matrix, generalized_detuning, kinetic_mean};
use crate::state::TwoLevelState;
use crate::units::SimParams;

/// Population drift beyond which an oracle run is rejected.
pub const MAX_POPULATION_DRIFT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OdeSettings {
    /// Fixed step, shortened so that it divides the interval evenly.
    Fixed { step: f64 },
    /// Step-doubling error control with the given per-step tolerance.
    Adaptive { tolerance: f64 },
}

impl OdeSettings {
    /// min(0.001, 0.01/β_max): about 600 steps per period of the fastest
    /// family, enough for 1e-10 population drift over τ = 100 at β = 20.
    pub fn default_for(beta_max: f64) -> Self {
        let step = if beta_max > 0.0 { (0.01 / beta_max).min(0.001) } else { 0.001 };
        OdeSettings::Fixed { step }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OdeSettings::Fixed { step } if step > 0.0 && step.is_finite() => Ok(()),
            OdeSettings::Fixed { step } => {
                Err(Error::InvalidParameter(format!("ODE step must be positive, got {step}")))
            }
            OdeSettings::Adaptive { tolerance } if tolerance > 0.0 && tolerance <= 1e-6 => Ok(()),
            OdeSettings::Adaptive { tolerance } => Err(Error::InvalidParameter(format!(
                "ODE tolerance must lie in (0, 1e-6], got {tolerance}"
            ))),
        }
    }
}

#[derive(Clone, Copy)]
struct Family {
    half_rabi: f64,
    alpha: f64,
}

impl Family {
    /// Right-hand side with the coupling phase e^{−iατ} supplied as `rot`.
    #[inline]
    fn rhs(&self, rot: C64, y: [C64; 2]) -> [C64; 2] {
        let g = C64::new(0.0, self.half_rabi);
        [g * rot * y[1], g * rot.conj() * y[0]]
    }

    /// One RK4 step from τ to τ + h given e^{−iατ} and e^{−iα(τ+h)}.
    #[inline]
    fn rk4_step(&self, rot0: C64, rot1: C64, h: f64, y: [C64; 2]) -> [C64; 2] {
        let add = |y: [C64; 2], k: [C64; 2], c: f64| [y[0] + k[0] * c, y[1] + k[1] * c];
        let mid = rot0 * C64::from_polar(1.0, -0.5 * self.alpha * h);
        let k1 = self.rhs(rot0, y);
        let k2 = self.rhs(mid, add(y, k1, 0.5 * h));
        let k3 = self.rhs(mid, add(y, k2, 0.5 * h));
        let k4 = self.rhs(rot1, add(y, k3, h));
        let w = h / 6.0;
        [
            y[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * w,
            y[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * w,
        ]
    }

    #[inline]
    fn rot(&self, tau: f64) -> C64 {
        C64::from_polar(1.0, -self.alpha * tau)
    }

    fn fixed(&self, y0: [C64; 2], tau_end: f64, step: f64) -> [C64; 2] {
        if tau_end == 0.0 || self.half_rabi == 0.0 {
            return y0;
        }
        let n = (tau_end / step).ceil().max(1.0) as u64;
        let h = tau_end / n as f64;
        let mut y = y0;
        let mut rot0 = self.rot(0.0);
        for k in 0..n {
            let rot1 = self.rot((k + 1) as f64 * h);
            y = self.rk4_step(rot0, rot1, h, y);
            rot0 = rot1;
        }
        y
    }

    fn adaptive(&self, y0: [C64; 2], tau_end: f64, tolerance: f64) -> [C64; 2] {
        if tau_end == 0.0 || self.half_rabi == 0.0 {
            return y0;
        }
        let mut y = y0;
        let mut tau = 0.0;
        let beta = self.alpha.hypot(2.0 * self.half_rabi);
        let mut h = (0.1 / beta.max(1.0)).min(tau_end);
        while tau < tau_end {
            h = h.min(tau_end - tau);
            let (r0, rm, r1) = (self.rot(tau), self.rot(tau + 0.5 * h), self.rot(tau + h));
            let full = self.rk4_step(r0, r1, h, y);
            let half = self.rk4_step(r0, rm, 0.5 * h, y);
            let two = self.rk4_step(rm, r1, 0.5 * h, half);
            let err = ((two[0] - full[0]).norm()).max((two[1] - full[1]).norm()) / 15.0;
            if err <= tolerance || h < 1e-12 {
                tau += h;
                // local extrapolation of the two half steps
                y = [
                    two[0] + (two[0] - full[0]) / 15.0,
                    two[1] + (two[1] - full[1]) / 15.0,
                ];
            }
            let grow = if err > 0.0 { 0.9 * (tolerance / err).powf(0.2) } else { 2.0 };
            h *= grow.clamp(0.2, 2.0);
        }
        y
    }
}

/// Integrates one family from (a0, b0) at τ = 0 to `tau_end`, returning the
/// interaction-picture amplitudes (ā, b̄).
pub fn integrate_family(
    a0: C64,
    b0: C64,
    p: f64,
    tau_end: f64,
    params: &SimParams,
    settings: &OdeSettings,
) -> Result<(C64, C64)> {
    settings.validate()?;
    if !(tau_end >= 0.0 && tau_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau_end must be >= 0, got {tau_end}")));
    }
    let family = Family { half_rabi: 0.5 * params.rabi, alpha: generalized_detuning(p, params) };
    let y0 = [a0, b0];
    let y = match *settings {
        OdeSettings::Fixed { step } => family.fixed(y0, tau_end, step),
        OdeSettings::Adaptive { tolerance } => family.adaptive(y0, tau_end, tolerance),
    };
    let before = a0.norm_sqr() + b0.norm_sqr();
    let after = y[0].norm_sqr() + y[1].norm_sqr();
    let drift = (after - before).abs();
    if drift.is_nan() || drift > MAX_POPULATION_DRIFT {
        return Err(Error::OracleAccuracy { drift });
    }
    Ok((y[0], y[1]))
}

/// Maps interaction-picture amplitudes at elapsed time `tau` into the frame
/// used by [`family_matrix`](crate::propagator::family_matrix).
pub fn to_propagator_frame(
    abar: C64,
    bbar: C64,
    p: f64,
    tau: f64,
    params: &SimParams,
) -> (C64, C64) {
    let half_alpha = 0.5 * generalized_detuning(p, params);
    let mean = kinetic_mean(p);
    (
        abar * C64::from_polar(1.0, -(mean - half_alpha) * tau),
        bbar * C64::from_polar(1.0, -(mean + half_alpha) * tau),
    )
}

/// Oracle flow map of one family as a matrix, built from the images of the
/// two basis vectors.
pub fn oracle_matrix(
    p: f64,
    tau: f64,
    params: &SimParams,
    settings: &OdeSettings,
) -> Result<crate::propagator::Matrix2> {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let (ag, bg) = integrate_family(o, z, p, tau, params, settings)?;
    let (ae, be) = integrate_family(z, o, p, tau, params, settings)?;
    let (ag, bg) = to_propagator_frame(ag, bg, p, tau, params);
    let (ae, be) = to_propagator_frame(ae, be, p, tau, params);
    Ok(crate::propagator::Matrix2([[ag, ae], [bg, be]]))
}

/// Largest |analytic − oracle| over all families and both levels after
/// evolving `state0` by `tau_end`.
pub fn compare_propagators(
    state0: &TwoLevelState,
    tau_end: f64,
    params: &SimParams,
    settings: &OdeSettings,
) -> Result<f64> {
    let grid = state0.grid;
    let errors: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let p = grid.momentum(j);
            let (a0, b0) = (state0.a[j], state0.b[j]);
            let (ea, eb) = family_matrix(p, tau_end, params).apply(a0, b0);
            let (abar, bbar) = integrate_family(a0, b0, p, tau_end, params, settings)?;
            let (oa, ob) = to_propagator_frame(abar, bbar, p, tau_end, params);
            Ok((ea - oa).norm().max((eb - ob).norm()))
        })
        .collect::<Result<_>>()?;
    Ok(errors.into_iter().fold(0.0, f64::max))
}

/// Default oracle settings for a state's grid.
pub fn default_settings(state: &TwoLevelState, params: &SimParams) -> OdeSettings {
    OdeSettings::default_for(dressed_spectrum(&state.grid, params).beta_max())
}
