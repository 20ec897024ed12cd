//! Conjugate uniform grids and the unitary transform pair between them.
//!
//! A spectral function Θ(h) sampled on the centered grid
//! h_j = (j − N/2)·dh, dh = 2·h_max/N, maps to the spatial wave function
//!
//! ```text
//! ψ(x_m) = (dh/√(2π)) Σ_j Θ(h_j) e^{i h_j x_m}
//! ```
//!
//! on the conjugate centered grid x_m = (m − N/2)·dx with dx = π/h_max, so
//! that dh·dx·N = 2π exactly. With these measures the pair is unitary in the
//! physical sense: ∫|ψ|² dx = ∫|Θ|² dh as Riemann sums, and a round trip is
//! the identity to rounding. Internally the sums reduce to FFTs after
//! alternating-sign twiddles that absorb the grid centering.

use super::RabiError;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buffer: &mut [C64], inverse: bool) {
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        let fft = if inverse {
            planner.plan_fft_inverse(buffer.len())
        } else {
            planner.plan_fft_forward(buffer.len())
        };
        fft.process(buffer);
    });
}

/// Uniform spectral grid of `points` samples covering |h| ≤ h_max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    /// Sample count N; even and at least 4.
    pub points: usize,
    /// Half-extent of the spectral window (1/length units).
    pub h_max: f64,
}

impl SpectralGrid {
    pub fn new(points: usize, h_max: f64) -> Result<Self, RabiError> {
        let grid = Self { points, h_max };
        grid.validate()?;
        Ok(grid)
    }

    /// Re-checks the invariants; needed because configurations can arrive
    /// through deserialization without passing through [`Self::new`].
    pub fn validate(&self) -> Result<(), RabiError> {
        if self.points < 4 || self.points % 2 != 0 {
            return Err(RabiError::InvalidConfig(format!(
                "grid needs an even number of points ≥ 4, got {}",
                self.points
            )));
        }
        if !(self.h_max.is_finite() && self.h_max > 0.0) {
            return Err(RabiError::InvalidConfig(format!(
                "grid half-extent must be positive and finite, got {}",
                self.h_max
            )));
        }
        Ok(())
    }

    /// Spectral step dh = 2·h_max/N.
    pub fn dh(&self) -> f64 {
        2.0 * self.h_max / self.points as f64
    }

    /// Spatial step dx = π/h_max; dh·dx·N = 2π exactly.
    pub fn dx(&self) -> f64 {
        PI / self.h_max
    }

    /// Centered spectral samples h_j = (j − N/2)·dh.
    pub fn h_values(&self) -> Vec<f64> {
        let dh = self.dh();
        let half = (self.points / 2) as isize;
        (0..self.points as isize).map(|j| (j - half) as f64 * dh).collect()
    }

    /// Centered spatial samples x_m = (m − N/2)·dx.
    pub fn x_values(&self) -> Vec<f64> {
        let dx = self.dx();
        let half = (self.points / 2) as isize;
        (0..self.points as isize).map(|m| (m - half) as f64 * dx).collect()
    }

    /// Sign carried by i^N for the even N of this grid.
    fn reflection(&self) -> f64 {
        if self.points % 4 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Synthesizes ψ on the spatial grid from spectral samples.
    pub fn to_spatial(&self, spectral: &[C64]) -> Vec<C64> {
        assert_eq!(spectral.len(), self.points, "spectral length must match the grid");
        let mut buffer: Vec<C64> = spectral
            .iter()
            .enumerate()
            .map(|(j, &v)| if j % 2 == 1 { -v } else { v })
            .collect();
        fft_in_place(&mut buffer, true);
        let scale = self.dh() / (2.0 * PI).sqrt() * self.reflection();
        for (m, value) in buffer.iter_mut().enumerate() {
            let sign = if m % 2 == 1 { -scale } else { scale };
            *value *= sign;
        }
        buffer
    }

    /// Analyzes spatial samples back into the spectral representation;
    /// exact inverse of [`Self::to_spatial`] up to rounding.
    pub fn to_spectral(&self, spatial: &[C64]) -> Vec<C64> {
        assert_eq!(spatial.len(), self.points, "spatial length must match the grid");
        let mut buffer: Vec<C64> = spatial
            .iter()
            .enumerate()
            .map(|(m, &v)| if m % 2 == 1 { -v } else { v })
            .collect();
        fft_in_place(&mut buffer, false);
        let scale = self.dx() / (2.0 * PI).sqrt() * self.reflection();
        for (j, value) in buffer.iter_mut().enumerate() {
            let sign = if j % 2 == 1 { -scale } else { scale };
            *value *= sign;
        }
        buffer
    }

    /// ∫|f|² under the grid's measure: `step · Σ |f_i|²`.
    pub fn norm_sq_spectral(&self, spectral: &[C64]) -> f64 {
        self.dh() * spectral.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Spatial counterpart of [`Self::norm_sq_spectral`].
    pub fn norm_sq_spatial(&self, spatial: &[C64]) -> f64 {
        self.dx() * spatial.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}
