//! Uniform momentum grid and trapezoidal quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform 1-D grid of family (ground-level) momenta in ħk units.
///
/// A single-point grid represents a definite-momentum state: its quadrature
/// weight is 1 and every integral reduces to the one sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    p_min: f64,
    dp: f64,
    n_points: usize,
}

impl MomentumGrid {
    /// Symmetric grid of `n_points` spanning `[center - half_width, center + half_width]`.
    pub fn new(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        if !center.is_finite() || !half_width.is_finite() {
            return Err(Error::InvalidGrid("center and half_width must be finite".into()));
        }
        if half_width < 0.0 {
            return Err(Error::InvalidGrid(format!("half_width must be >= 0, got {half_width}")));
        }
        match n_points {
            0 => Err(Error::InvalidGrid("n_points must be >= 1".into())),
            1 if half_width > 0.0 => Err(Error::InvalidGrid(
                "a single-point grid requires half_width = 0".into(),
            )),
            1 => Ok(Self { p_min: center, dp: 1.0, n_points: 1 }),
            _ if half_width == 0.0 => Err(Error::InvalidGrid(
                "half_width must be > 0 for more than one point".into(),
            )),
            n => Ok(Self {
                p_min: center - half_width,
                dp: 2.0 * half_width / (n - 1) as f64,
                n_points: n,
            }),
        }
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    /// Grid spacing; 1 by convention for a single-point grid.
    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn is_single_point(&self) -> bool {
        self.n_points == 1
    }

    pub fn p_max(&self) -> f64 {
        self.momentum(self.n_points - 1)
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.p_min + self.p_max())
    }

    #[inline]
    pub fn momentum(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp
    }

    pub fn momenta(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.momentum(j))
    }

    /// Trapezoidal weight of point `j`.
    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        if self.n_points == 1 {
            1.0
        } else if j == 0 || j + 1 == self.n_points {
            0.5 * self.dp
        } else {
            self.dp
        }
    }

    /// Index of the grid point nearest to `p`, clamped to the grid.
    pub fn nearest_index(&self, p: f64) -> usize {
        let x = ((p - self.p_min) / self.dp).round();
        x.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Trapezoidal integral of `samples`, summed in index order.
    pub fn integrate(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.n_points {
            return Err(Error::LengthMismatch { expected: self.n_points, got: samples.len() });
        }
        Ok(self.integrate_with(|j| samples[j]))
    }

    /// Trapezoidal integral of `f(j)` over the grid indices, summed in index order.
    #[inline]
    pub fn integrate_with<F: FnMut(usize) -> f64>(&self, mut f: F) -> f64 {
        if self.n_points == 1 {
            return f(0);
        }
        let last = self.n_points - 1;
        let mut interior = 0.0;
        for j in 1..last {
            interior += f(j);
        }
        self.dp * (interior + 0.5 * (f(0) + f(last)))
    }
}
