//! Inversion trajectories and their frequency content.
//!
//! [`simulate_inversion`] samples the per-chain population inversion on a
//! uniform time grid; because the evolution is diagonal in (q, h), the loop
//! advances raw spectral arrays and never pays for spatial resynthesis.
//! [`revival_spectrum`] turns one sampled trajectory into a one-sided
//! amplitude spectrum so oscillation and revival lines can be read off as
//! peaks.

use super::packet::{kappa_eigenvalue_bound, Component, PacketState, TubeConfig};
use super::RabiError;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

/// Per-chain inversion w_q(t_k) sampled at t_k = k / sample_rate for
/// k = 0, 1, …, len−1 (half-open: the nominal duration itself is not
/// sampled, which keeps whole-period trajectories aligned with DFT bins).
#[derive(Debug, Clone, Serialize)]
pub struct InversionHistory {
    sample_rate_hz: f64,
    times: Vec<f64>,
    per_chain: Vec<Vec<f64>>,
}

impl InversionHistory {
    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn chains(&self) -> usize {
        self.per_chain.len()
    }

    /// Trajectory of chain `q`. Panics if `q` is out of range.
    pub fn chain(&self, q: usize) -> &[f64] {
        &self.per_chain[q]
    }
}

/// Advances `initial` under `cfg` and records every chain's inversion at
/// `sample_rate_hz` for `duration` seconds (half-open grid, see
/// [`InversionHistory`]).
///
/// The packet must be normalized. The sample rate must clear the Nyquist
/// rate of the fastest inversion line, 2·g·sqrt(l−1)·max|κ_q|/π Hz;
/// otherwise the trajectory would alias and the call fails with
/// [`RabiError::Aliasing`].
pub fn simulate_inversion(
    cfg: &TubeConfig,
    initial: &PacketState,
    duration: f64,
    sample_rate_hz: f64,
) -> Result<InversionHistory, RabiError> {
    cfg.validate()?;
    if cfg.chains != initial.chains() || cfg.grid != *initial.grid() {
        return Err(RabiError::DimensionMismatch(
            "configuration grid or chain count does not match the packet".into(),
        ));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(RabiError::InvalidConfig(format!(
            "duration must be finite and positive, got {duration}"
        )));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(RabiError::InvalidConfig(format!(
            "sample rate must be finite and positive, got {sample_rate_hz}"
        )));
    }

    let kappa_bound = kappa_eigenvalue_bound(cfg)?;
    let required_hz = 2.0 * cfg.rabi_prefactor() * kappa_bound / PI;
    if required_hz > 0.0 && sample_rate_hz <= required_hz {
        return Err(RabiError::Aliasing { required_hz, sample_rate_hz });
    }

    let samples = (duration * sample_rate_hz).round() as usize;
    if samples < 2 {
        return Err(RabiError::InvalidConfig(format!(
            "duration {duration} s at {sample_rate_hz} Hz yields fewer than two samples"
        )));
    }

    // Validates normalization once; unitarity preserves it from here on.
    initial.inversion()?;

    let dt = 1.0 / sample_rate_hz;
    let op = super::packet::evolution_operator(cfg, dt)?;
    let mut excited = initial.spectral(Component::Excited).to_owned();
    let mut ground = initial.spectral(Component::Ground).to_owned();

    let mut times = Vec::with_capacity(samples);
    let mut per_chain = vec![Vec::with_capacity(samples); cfg.chains];
    for k in 0..samples {
        times.push(k as f64 * dt);
        record_inversions(&excited, &ground, &mut per_chain);
        if k + 1 < samples {
            op.advance_spectral(&mut excited, &mut ground);
        }
    }
    Ok(InversionHistory { sample_rate_hz, times, per_chain })
}

/// Population ratio per chain; the grid measure cancels, so plain sums of
/// squared moduli suffice.
fn record_inversions(excited: &Array2<C64>, ground: &Array2<C64>, out: &mut [Vec<f64>]) {
    for (q, slot) in out.iter_mut().enumerate() {
        let e: f64 = excited.row(q).iter().map(|z| z.norm_sqr()).sum();
        let g: f64 = ground.row(q).iter().map(|z| z.norm_sqr()).sum();
        let total = e + g;
        slot.push(if total == 0.0 { 0.0 } else { (e - g) / total });
    }
}

/// One-sided amplitude spectrum of a real sampled signal.
///
/// Bin k sits at k·rate/len Hz; amplitudes are scaled so a pure cosine of
/// amplitude A landing exactly on a bin reports A there (and a constant
/// offset reports its value in the DC bin).
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    resolution_hz: f64,
    frequencies_hz: Vec<f64>,
    amplitudes: Vec<f64>,
}

/// One spectral line: a local maximum of the one-sided amplitude spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPeak {
    pub bin: usize,
    pub frequency_hz: f64,
    pub amplitude: f64,
}

impl Spectrum {
    pub fn resolution_hz(&self) -> f64 {
        self.resolution_hz
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Largest-amplitude bin excluding DC. `None` only for degenerate
    /// spectra with a single bin.
    pub fn dominant_nonzero_peak(&self) -> Option<SpectralPeak> {
        let (bin, &amplitude) = self
            .amplitudes
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        Some(SpectralPeak { bin, frequency_hz: self.frequencies_hz[bin], amplitude })
    }

    /// Local maxima (DC excluded) whose amplitude reaches
    /// `threshold_fraction` of the strongest non-DC bin, in frequency order.
    /// `threshold_fraction` must lie in (0, 1].
    pub fn peaks(&self, threshold_fraction: f64) -> Vec<SpectralPeak> {
        assert!(
            threshold_fraction > 0.0 && threshold_fraction <= 1.0,
            "threshold fraction must lie in (0, 1], got {threshold_fraction}"
        );
        let Some(top) = self.dominant_nonzero_peak() else {
            return Vec::new();
        };
        let floor = threshold_fraction * top.amplitude;
        let a = &self.amplitudes;
        (1..a.len())
            .filter(|&k| {
                let left_ok = a[k] >= a[k - 1];
                let right_ok = k + 1 >= a.len() || a[k] >= a[k + 1];
                left_ok && right_ok && a[k] >= floor
            })
            .map(|k| SpectralPeak {
                bin: k,
                frequency_hz: self.frequencies_hz[k],
                amplitude: a[k],
            })
            .collect()
    }
}

/// Computes the one-sided amplitude spectrum of `signal` sampled at
/// `sample_rate_hz`.
pub fn revival_spectrum(signal: &[f64], sample_rate_hz: f64) -> Result<Spectrum, RabiError> {
    if signal.len() < 2 {
        return Err(RabiError::InvalidConfig(format!(
            "spectrum needs at least two samples, got {}",
            signal.len()
        )));
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(RabiError::InvalidConfig(format!(
            "sample rate must be finite and positive, got {sample_rate_hz}"
        )));
    }
    if let Some(bad) = signal.iter().find(|v| !v.is_finite()) {
        return Err(RabiError::DegenerateInput(format!(
            "signal contains a non-finite sample: {bad}"
        )));
    }

    let n = signal.len();
    let mut buf: Vec<C64> = signal.iter().map(|&v| C64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2;
    let mut frequencies_hz = Vec::with_capacity(half + 1);
    let mut amplitudes = Vec::with_capacity(half + 1);
    let resolution_hz = sample_rate_hz / n as f64;
    for (k, value) in buf.iter().take(half + 1).enumerate() {
        frequencies_hz.push(k as f64 * resolution_hz);
        // DC and (for even n) the Nyquist bin have no mirror partner.
        let scale = if k == 0 || (n % 2 == 0 && k == half) { 1.0 } else { 2.0 };
        amplitudes.push(scale * value.norm() / n as f64);
    }
    Ok(Spectrum { resolution_hz, frequencies_hz, amplitudes })
}
