//! Physical constants and the recoil unit system.
//!
//! Momentum is measured in ħk, frequency in ω_r = ħk²/2M, time in 1/ω_r and
//! energy in E_r = ħω_r. Everything past this module works with [`SimParams`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// reduced Planck constant (J s)
pub const HBAR: f64 = 6.62607015e-34 / (2.0 * PI);

/// speed of light in vacuum (m s^-1)
pub const C: f64 = 2.99792458e8;

/// Atom and field parameters in SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// kg
    pub atomic_mass: f64,
    /// m^-1
    pub wavenumber: f64,
    /// ω₀, rad s^-1
    pub transition_frequency: f64,
    /// ω, rad s^-1
    pub field_frequency: f64,
    /// Ω, rad s^-1
    pub rabi_frequency: f64,
}

impl PhysicalParams {
    /// Builds parameters for a field of vacuum wavelength `wavelength`, with
    /// k = ω/c and ω₀ = ω + `detuning`.
    pub fn from_wavelength(
        atomic_mass: f64,
        wavelength: f64,
        detuning: f64,
        rabi_frequency: f64,
    ) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        let wavenumber = 2.0 * PI / wavelength;
        let field_frequency = C * wavenumber;
        let params = Self {
            atomic_mass,
            wavenumber,
            transition_frequency: field_frequency + detuning,
            field_frequency,
            rabi_frequency,
        };
        params.validate()?;
        Ok(params)
    }

    /// Field-atom detuning Δ = ω₀ − ω.
    pub fn detuning(&self) -> f64 {
        self.transition_frequency - self.field_frequency
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
            }
        };
        positive("atomic_mass", self.atomic_mass)?;
        positive("wavenumber", self.wavenumber)?;
        positive("transition_frequency", self.transition_frequency)?;
        positive("field_frequency", self.field_frequency)?;
        if !(self.rabi_frequency >= 0.0 && self.rabi_frequency.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rabi_frequency must be non-negative, got {}",
                self.rabi_frequency
            )));
        }
        Ok(())
    }
}

/// Dimensionless interaction parameters in recoil units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    /// Ω/ω_r
    pub rabi: f64,
    /// (ω₀ − ω)/ω_r
    pub detuning: f64,
}

impl SimParams {
    pub fn new(rabi: f64, detuning: f64) -> Result<Self> {
        let params = Self { rabi, detuning };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi >= 0.0 && self.rabi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rabi must be finite and non-negative, got {}",
                self.rabi
            )));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "detuning must be finite, got {}",
                self.detuning
            )));
        }
        Ok(())
    }
}

/// Scale factors of the recoil unit system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoilScales {
    /// ħk²/2M, rad s^-1
    pub omega_r: f64,
    /// ħk, kg m s^-1
    pub p_photon: f64,
    /// ħ²k²/2M, J
    pub e_recoil: f64,
}

pub fn recoil_scales(params: &PhysicalParams) -> Result<RecoilScales> {
    params.validate()?;
    let k = params.wavenumber;
    let omega_r = HBAR * k * k / (2.0 * params.atomic_mass);
    Ok(RecoilScales {
        omega_r,
        p_photon: HBAR * k,
        e_recoil: HBAR * omega_r,
    })
}

pub fn to_dimensionless(params: &PhysicalParams) -> Result<SimParams> {
    let scales = recoil_scales(params)?;
    SimParams::new(
        params.rabi_frequency / scales.omega_r,
        params.detuning() / scales.omega_r,
    )
}
