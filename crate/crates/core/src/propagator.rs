//! Closed-form evolution of momentum families.
//!
//! Family `j` couples the ground amplitude at p̃ to the excited amplitude at
//! p̃ + 1. In recoil units its Hamiltonian is
//!
//! ```text
//! H = [[K − α/2,  −Ω/2  ],
//!      [ −Ω/2,    K + α/2]]
//! ```
//!
//! with kinetic mean K = (p̃² + (p̃+1)²)/2, generalized detuning
//! α = Δ + 2p̃ + 1 and generalized Rabi frequency β = √(α² + Ω²). The optical
//! frequencies only contribute a per-level global phase and are dropped.

use std::ops::Mul;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::grid::MomentumGrid;
use crate::state::TwoLevelState;
use crate::units::SimParams;

/// Detuning seen in the rest frame of a family with ground momentum `p`:
/// field detuning plus Doppler shift 2p̃ plus recoil shift 1.
#[inline]
pub fn generalized_detuning(p: f64, params: &SimParams) -> f64 {
    params.detuning + 2.0 * p + 1.0
}

#[inline]
pub fn generalized_rabi(alpha: f64, params: &SimParams) -> f64 {
    alpha.hypot(params.rabi)
}

/// Mean kinetic energy of the family pair, (p̃² + (p̃+1)²)/2.
#[inline]
pub fn kinetic_mean(p: f64) -> f64 {
    0.5 * (p * p + (p + 1.0) * (p + 1.0))
}

/// Per-grid-point dressed quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedSpectrum {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub mean_g: Vec<f64>,
    pub mean_e: Vec<f64>,
}

impl DressedSpectrum {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// ω_g, the upper ground-level quasistationary frequency.
    pub fn omega_g(&self, j: usize) -> f64 {
        self.mean_g[j] + 0.5 * self.beta[j]
    }

    /// ω'_g
    pub fn omega_g_prime(&self, j: usize) -> f64 {
        self.mean_g[j] - 0.5 * self.beta[j]
    }

    pub fn omega_e(&self, j: usize) -> f64 {
        self.mean_e[j] + 0.5 * self.beta[j]
    }

    pub fn omega_e_prime(&self, j: usize) -> f64 {
        self.mean_e[j] - 0.5 * self.beta[j]
    }

    pub fn beta_max(&self) -> f64 {
        self.beta.iter().copied().fold(0.0, f64::max)
    }
}

pub fn dressed_spectrum(grid: &MomentumGrid, params: &SimParams) -> DressedSpectrum {
    let n = grid.len();
    let mut spec = DressedSpectrum {
        alpha: Vec::with_capacity(n),
        beta: Vec::with_capacity(n),
        mean_g: Vec::with_capacity(n),
        mean_e: Vec::with_capacity(n),
    };
    for p in grid.momenta() {
        let alpha = generalized_detuning(p, params);
        spec.alpha.push(alpha);
        spec.beta.push(generalized_rabi(alpha, params));
        let mean = kinetic_mean(p);
        spec.mean_g.push(mean);
        spec.mean_e.push(mean);
    }
    spec
}

/// A 2×2 complex matrix acting on (ground, excited) amplitude pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2(pub [[C64; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Self([[o, z], [z, o]])
    }

    #[inline]
    pub fn apply(&self, a: C64, b: C64) -> (C64, C64) {
        let m = &self.0;
        (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        d
    }

    /// max |U†U − I| entry-wise.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (x, y) = (&self.0, &rhs.0);
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = x[r][0] * y[0][c] + x[r][1] * y[1][c];
            }
        }
        Matrix2(out)
    }
}

/// Propagator of one family over `dtau` in trigonometric form:
/// U = e^{−iK·dtau} [[c + i(α/β)s, i(Ω/β)s], [i(Ω/β)s, c − i(α/β)s]]
/// with c = cos(β·dtau/2), s = sin(β·dtau/2).
pub fn family_matrix(p: f64, dtau: f64, params: &SimParams) -> Matrix2 {
    let alpha = generalized_detuning(p, params);
    let beta = generalized_rabi(alpha, params);
    rabi_matrix(alpha, beta, kinetic_mean(p), params.rabi, dtau)
}

#[inline]
fn rabi_matrix(alpha: f64, beta: f64, mean: f64, rabi: f64, dtau: f64) -> Matrix2 {
    let phase = C64::from_polar(1.0, -mean * dtau);
    if beta == 0.0 {
        let z = C64::new(0.0, 0.0);
        return Matrix2([[phase, z], [z, phase]]);
    }
    let (s, c) = (0.5 * beta * dtau).sin_cos();
    let diag = alpha / beta * s;
    let off = phase * C64::new(0.0, rabi / beta * s);
    Matrix2([
        [phase * C64::new(c, diag), off],
        [off, phase * C64::new(c, -diag)],
    ])
}

/// Advances every family of `state` by `dtau`. Families are independent, so
/// the map runs in parallel on the current rayon pool; the result does not
/// depend on the number of threads.
pub fn evolve(state: &TwoLevelState, dtau: f64, params: &SimParams) -> TwoLevelState {
    let grid = state.grid;
    let (a, b): (Vec<C64>, Vec<C64>) = (0..grid.len())
        .into_par_iter()
        .map(|j| family_matrix(grid.momentum(j), dtau, params).apply(state.a[j], state.b[j]))
        .unzip();
    TwoLevelState { grid, a, b, tau: state.tau + dtau }
}
