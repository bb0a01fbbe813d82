//! Two-level momentum-space states.
//!
//! Index `j` of a [`TwoLevelState`] holds one momentum family: the ground
//! amplitude at p̃_j and the excited amplitude at p̃_j + 1.

use std::fmt;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MomentumGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Ground,
    Excited,
}

impl Level {
    /// Physical momentum offset of this level's slot relative to the family momentum.
    #[inline]
    pub fn offset(self) -> f64 {
        match self {
            Level::Ground => 0.0,
            Level::Excited => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Ground => "ground",
            Level::Excited => "excited",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevelState {
    pub grid: MomentumGrid,
    /// ground amplitude at p̃_j
    pub a: Vec<C64>,
    /// excited amplitude at p̃_j + 1
    pub b: Vec<C64>,
    pub tau: f64,
}

impl TwoLevelState {
    pub fn new(grid: MomentumGrid, a: Vec<C64>, b: Vec<C64>, tau: f64) -> Result<Self> {
        for v in [&a, &b] {
            if v.len() != grid.len() {
                return Err(Error::LengthMismatch { expected: grid.len(), got: v.len() });
            }
        }
        Ok(Self { grid, a, b, tau })
    }

    pub fn amplitudes(&self, level: Level) -> &[C64] {
        match level {
            Level::Ground => &self.a,
            Level::Excited => &self.b,
        }
    }

    /// Physical momentum of slot `j` on `level`.
    #[inline]
    pub fn momentum(&self, level: Level, j: usize) -> f64 {
        self.grid.momentum(j) + level.offset()
    }

    pub fn norm(&self) -> f64 {
        self.grid.integrate_with(|j| self.a[j].norm_sqr())
            + self.grid.integrate_with(|j| self.b[j].norm_sqr())
    }

    /// Rescales to unit norm.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState(format!("cannot normalize a state of norm {norm}")));
        }
        let scale = norm.sqrt().recip();
        for z in self.a.iter_mut().chain(self.b.iter_mut()) {
            *z *= scale;
        }
        Ok(self)
    }
}

/// Samples exp(−(p̃−center)²/4σ²)·exp(i·phase_slope·p̃) at the physical momenta
/// of `level` on `grid`. `sigma` is the rms width of the density |ψ|².
pub fn gaussian_amplitudes(
    grid: &MomentumGrid,
    level: Level,
    center: f64,
    sigma: f64,
    phase_slope: f64,
) -> Result<Vec<C64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let amps = grid
        .momenta()
        .map(|p| {
            let p = p + level.offset();
            let x = (p - center) / (2.0 * sigma);
            C64::from_polar((-x * x).exp(), phase_slope * p)
        })
        .collect();
    Ok(amps)
}

/// Builds a normalized state at τ = 0 from optional per-level amplitude
/// arrays and complex weights. An absent level is empty.
pub fn assemble_state(
    grid: MomentumGrid,
    ground: Option<&[C64]>,
    excited: Option<&[C64]>,
    weight_g: C64,
    weight_e: C64,
) -> Result<TwoLevelState> {
    if ground.is_none() && excited.is_none() {
        return Err(Error::InvalidState("both levels are absent".into()));
    }
    let fill = |src: Option<&[C64]>, w: C64| -> Result<Vec<C64>> {
        match src {
            None => Ok(vec![C64::new(0.0, 0.0); grid.len()]),
            Some(v) if v.len() != grid.len() => {
                Err(Error::LengthMismatch { expected: grid.len(), got: v.len() })
            }
            Some(v) => Ok(v.iter().map(|z| w * z).collect()),
        }
    };
    let a = fill(ground, weight_g)?;
    let b = fill(excited, weight_e)?;
    TwoLevelState::new(grid, a, b, 0.0)?.normalize()
}

/// Amplitudes tabulated as (p̃, Re, Im) rows on the physical momentum axis.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedAmplitudes {
    pub momenta: Vec<f64>,
    pub values: Vec<C64>,
}

impl TabulatedAmplitudes {
    /// Parses whitespace-separated `p Re Im` lines. Blank lines and lines
    /// starting with `#` are skipped. Momenta must be strictly increasing.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Tabulated { path: origin.to_string(), line, msg };
        let mut momenta = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(err(line_no, format!("expected 3 columns, found {}", cols.len())));
            }
            let mut nums = [0.0; 3];
            for (slot, c) in nums.iter_mut().zip(&cols) {
                *slot = c
                    .parse::<f64>()
                    .map_err(|e| err(line_no, format!("bad number {c:?}: {e}")))?;
                if !slot.is_finite() {
                    return Err(err(line_no, format!("non-finite value {c:?}")));
                }
            }
            if let Some(&last) = momenta.last() {
                if nums[0] <= last {
                    return Err(err(line_no, "momenta must be strictly increasing".into()));
                }
            }
            momenta.push(nums[0]);
            values.push(C64::new(nums[1], nums[2]));
        }
        if momenta.is_empty() {
            return Err(err(0, "no data rows".into()));
        }
        Ok(Self { momenta, values })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Linear interpolation at `p`; zero outside the tabulated range.
    pub fn interpolate(&self, p: f64) -> C64 {
        let m = &self.momenta;
        let n = m.len();
        if p < m[0] || p > m[n - 1] {
            return C64::new(0.0, 0.0);
        }
        if n == 1 {
            return self.values[0];
        }
        let hi = m.partition_point(|&x| x < p).clamp(1, n - 1);
        let lo = hi - 1;
        let t = (p - m[lo]) / (m[hi] - m[lo]);
        self.values[lo] * (1.0 - t) + self.values[hi] * t
    }

    /// Resamples onto the physical momenta of `level` on `grid`.
    pub fn resample(&self, grid: &MomentumGrid, level: Level) -> Vec<C64> {
        grid.momenta().map(|p| self.interpolate(p + level.offset())).collect()
    }
}
