//! Packet state on the ring and its exact spectral evolution.
//!
//! Couplings along the ring are circulant: a profile assigns to each offset
//! j (distance between chains, mod n) a real function of h. The hypercomplex
//! component q then evolves with the circulant eigenvalue
//!
//! ```text
//! Ω_q(h) = Σ_j e^{2πi q j / n} · profile_j(h)
//! ```
//!
//! which must come out real: a non-real Ω_q means the offset profiles do not
//! assemble into a hermitian coupling, and evolution refuses to run
//! ([`RabiError::ModelConsistency`]). Two profiles enter: ϑ (common phase
//! rate) and κ (dimensionless Rabi shape). In the photon sector l the
//! excited/ground pair at each (q, h) is rotated by the angle
//! g·sqrt(l−1)·κ_q(h)·t around σ_x while both components pick up the common
//! phase e^{i ϑ_q(h) t}:
//!
//! ```text
//! |e⟩ ↦ e^{iϑt} (cos φ |e⟩ − i sin φ |g⟩)      φ = g·sqrt(l−1)·κ_q(h)·t
//! |g⟩ ↦ e^{iϑt} (cos φ |g⟩ − i sin φ |e⟩)
//! ```
//!
//! The dressed combinations (|e⟩ ± |g⟩)/√2 therefore accumulate the phases
//! (ϑ ∓ g·sqrt(l−1)·κ)t, and a packet prepared in |e⟩ oscillates between
//! the components at angular rate 2g·sqrt(l−1)·κ.

use super::grid::SpectralGrid;
use super::RabiError;
use ndarray::{Array2, Array3, ArrayView2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Tolerance scale for the hermiticity proxy: evolution fails if any
/// eigenvalue's imaginary part exceeds this times max(1, |Ω|_∞).
pub const REALITY_TOLERANCE: f64 = 1e-9;

/// Norm window accepted by inversion measurements.
const NORM_TOLERANCE: f64 = 1e-6;

/// Two-level component selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Excited,
    Ground,
}

/// Common-phase profile ϑ_j(h) by ring offset j (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaProfile {
    /// No phase evolution.
    Zero,
    /// Intrachain cosine dispersion with a constant nearest-neighbour
    /// coupling: ϑ₀(h) = amplitude·cos(period·h),
    /// ϑ₁ = ϑ_{n−1} = interchain, other offsets 0.
    Cosine { amplitude: f64, period: f64, interchain: f64 },
    /// Pure drift: ϑ₀(h) = slope·h; translates packets rigidly.
    Linear { slope: f64 },
    /// Arbitrary h-independent values by offset; length must equal n.
    /// Offsets j and n−j must mirror each other for a hermitian coupling.
    PerOffset { values: Vec<f64> },
}

impl ThetaProfile {
    fn value(&self, offset: usize, n: usize, h: f64) -> f64 {
        match self {
            ThetaProfile::Zero => 0.0,
            ThetaProfile::Cosine { amplitude, period, interchain } => {
                if offset == 0 {
                    amplitude * (period * h).cos()
                } else if offset == 1 || offset == n - 1 {
                    *interchain
                } else {
                    0.0
                }
            }
            ThetaProfile::Linear { slope } => {
                if offset == 0 {
                    slope * h
                } else {
                    0.0
                }
            }
            ThetaProfile::PerOffset { values } => values[offset],
        }
    }

    fn validate(&self, n: usize) -> Result<(), RabiError> {
        let all_finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        let ok = match self {
            ThetaProfile::Zero => true,
            ThetaProfile::Cosine { amplitude, period, interchain } => {
                all_finite(&[*amplitude, *period, *interchain])
            }
            ThetaProfile::Linear { slope } => slope.is_finite(),
            ThetaProfile::PerOffset { values } => {
                if values.len() != n {
                    return Err(RabiError::InvalidConfig(format!(
                        "per-offset profile has {} entries for {} chains",
                        values.len(),
                        n
                    )));
                }
                all_finite(values)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(RabiError::InvalidConfig("profile contains non-finite values".into()))
        }
    }
}

/// Rabi-shape profile κ_j(h) by ring offset j (dimensionless; the rate is
/// g·sqrt(l−1)·κ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KappaProfile {
    /// No Rabi rotation at all.
    Zero,
    /// Uniform shape: κ₀(h) = value, other offsets 0. Every (q, h) rotates
    /// at the same rate, giving a single clean inversion line.
    Constant { value: f64 },
    /// h-modulated shape κ₀(h) = base + modulation·cos(period·h); spreads
    /// the rotation rates and produces collapse-revival structure.
    Cosine { base: f64, modulation: f64, period: f64 },
    /// Arbitrary h-independent values by offset; length must equal n.
    PerOffset { values: Vec<f64> },
}

impl KappaProfile {
    fn value(&self, offset: usize, _n: usize, h: f64) -> f64 {
        match self {
            KappaProfile::Zero => 0.0,
            KappaProfile::Constant { value } => {
                if offset == 0 {
                    *value
                } else {
                    0.0
                }
            }
            KappaProfile::Cosine { base, modulation, period } => {
                if offset == 0 {
                    base + modulation * (period * h).cos()
                } else {
                    0.0
                }
            }
            KappaProfile::PerOffset { values } => values[offset],
        }
    }

    fn validate(&self, n: usize) -> Result<(), RabiError> {
        let all_finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        let ok = match self {
            KappaProfile::Zero => true,
            KappaProfile::Constant { value } => value.is_finite(),
            KappaProfile::Cosine { base, modulation, period } => {
                all_finite(&[*base, *modulation, *period])
            }
            KappaProfile::PerOffset { values } => {
                if values.len() != n {
                    return Err(RabiError::InvalidConfig(format!(
                        "per-offset profile has {} entries for {} chains",
                        values.len(),
                        n
                    )));
                }
                all_finite(values)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(RabiError::InvalidConfig("profile contains non-finite values".into()))
        }
    }
}

/// Full model configuration for one ring of chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeConfig {
    /// Number of chains n ≥ 1.
    pub chains: usize,
    /// Coupling rate g ≥ 0 (rad/s).
    pub coupling: f64,
    /// Photon sector l ≥ 1; the collective Rabi rate is g·sqrt(l−1).
    pub photon_sector: u32,
    pub theta: ThetaProfile,
    pub kappa: KappaProfile,
    pub grid: SpectralGrid,
}

impl TubeConfig {
    pub fn validate(&self) -> Result<(), RabiError> {
        if self.chains < 1 {
            return Err(RabiError::InvalidConfig("at least one chain is required".into()));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(RabiError::InvalidConfig(format!(
                "coupling must be finite and non-negative, got {}",
                self.coupling
            )));
        }
        if self.photon_sector < 1 {
            return Err(RabiError::InvalidConfig(
                "photon sector counts photons plus one; it must be at least 1".into(),
            ));
        }
        self.grid.validate()?;
        self.theta.validate(self.chains)?;
        self.kappa.validate(self.chains)?;
        Ok(())
    }

    /// Collective Rabi prefactor g·sqrt(l−1) (rad/s).
    pub fn rabi_prefactor(&self) -> f64 {
        self.coupling * ((self.photon_sector - 1) as f64).sqrt()
    }
}

/// Circulant eigenvalues Ω_q(h_m) of one profile, with the hermiticity
/// proxy applied: fails unless every eigenvalue is real within
/// [`REALITY_TOLERANCE`] · max(1, |Ω|_∞).
fn real_eigenvalue_table(
    cfg: &TubeConfig,
    profile: &dyn Fn(usize, usize, f64) -> f64,
) -> Result<Array2<f64>, RabiError> {
    let n = cfg.chains;
    let h = cfg.grid.h_values();
    let mut table = Array2::zeros((n, h.len()));
    let mut max_imag = 0.0_f64;
    let mut max_abs = 0.0_f64;

    for q in 0..n {
        for (m, &hm) in h.iter().enumerate() {
            let mut sum = C64::new(0.0, 0.0);
            for j in 0..n {
                let v = profile(j, n, hm);
                if v != 0.0 {
                    sum += v * C64::from_polar(1.0, TAU * ((q * j) % n) as f64 / n as f64);
                }
            }
            max_imag = max_imag.max(sum.im.abs());
            max_abs = max_abs.max(sum.norm());
            table[(q, m)] = sum.re;
        }
    }

    let tolerance = REALITY_TOLERANCE * max_abs.max(1.0);
    if max_imag > tolerance {
        return Err(RabiError::ModelConsistency { max_imag, tolerance });
    }
    Ok(table)
}

/// Largest |κ_q(h)| eigenvalue over the whole grid; the maximum Rabi rate is
/// this times [`TubeConfig::rabi_prefactor`]. Used for Nyquist guards.
pub(crate) fn kappa_eigenvalue_bound(cfg: &TubeConfig) -> Result<f64, RabiError> {
    let table = real_eigenvalue_table(cfg, &|j, n, h| cfg.kappa.value(j, n, h))?;
    Ok(table.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs())))
}

/// Precomputed diagonal evolution over a fixed duration.
///
/// Building the operator runs the hermiticity proxy once; applying it is a
/// pure per-(q, h) phase and σ_x rotation, so repeated application (time
/// stepping) costs one complex multiply per sample plus the spatial
/// resynthesis.
#[derive(Debug, Clone)]
pub struct EvolutionOperator {
    duration: f64,
    chains: usize,
    points: usize,
    /// e^{i ϑ_q(h) t}.
    theta_phase: Array2<C64>,
    /// cos(φ_q(h)) with φ = g·sqrt(l−1)·κ_q(h)·t.
    rot_cos: Array2<f64>,
    /// sin(φ_q(h)).
    rot_sin: Array2<f64>,
}

impl EvolutionOperator {
    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Advances a spectral pair in place by one application of the operator.
    /// Dimensions must already match; callers check before looping.
    pub(crate) fn advance_spectral(
        &self,
        excited: &mut Array2<C64>,
        ground: &mut Array2<C64>,
    ) {
        debug_assert_eq!(excited.dim(), (self.chains, self.points));
        debug_assert_eq!(ground.dim(), (self.chains, self.points));
        for q in 0..self.chains {
            for m in 0..self.points {
                let idx = (q, m);
                let e = excited[idx];
                let g = ground[idx];
                let phase = self.theta_phase[idx];
                let (c, s) = (self.rot_cos[idx], self.rot_sin[idx]);
                let rot = C64::new(0.0, -s);
                excited[idx] = phase * (e * c + g * rot);
                ground[idx] = phase * (g * c + e * rot);
            }
        }
    }
}

/// Builds the diagonal evolution for duration `t ≥ 0` seconds.
pub fn evolution_operator(cfg: &TubeConfig, t: f64) -> Result<EvolutionOperator, RabiError> {
    cfg.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(RabiError::NegativeDuration { t });
    }

    let theta_eig = real_eigenvalue_table(cfg, &|j, n, h| cfg.theta.value(j, n, h))?;
    let kappa_eig = real_eigenvalue_table(cfg, &|j, n, h| cfg.kappa.value(j, n, h))?;
    let prefactor = cfg.rabi_prefactor();

    let theta_phase = theta_eig.mapv(|w| C64::from_polar(1.0, w * t));
    let rot_cos = kappa_eig.mapv(|k| (prefactor * k * t).cos());
    let rot_sin = kappa_eig.mapv(|k| (prefactor * k * t).sin());

    Ok(EvolutionOperator {
        duration: t,
        chains: cfg.chains,
        points: cfg.grid.points,
        theta_phase,
        rot_cos,
        rot_sin,
    })
}

/// A two-component wave packet on the ring.
///
/// Spectral content Θ_q(h) is the source of truth; the spatial functions
/// ψ_q(x) are kept in sync through the grid's transform pair. The physical
/// amplitude array Φ_qp(x) = e^{−2πiqp/n}·ψ_q(x) is materialized on demand
/// by [`Self::amplitudes`].
#[derive(Debug, Clone, PartialEq)]
pub struct PacketState {
    chains: usize,
    grid: SpectralGrid,
    time: f64,
    spectral_excited: Array2<C64>,
    spectral_ground: Array2<C64>,
    spatial_excited: Array2<C64>,
    spatial_ground: Array2<C64>,
}

/// Builds a packet at t = 0 with the whole amplitude in the excited
/// component: Θ_q(h) = envelope(q, h), ground component empty.
///
/// Fails if the envelope carries no amplitude at all or returns non-finite
/// values. The packet is *not* normalized automatically; call
/// [`PacketState::normalize`] before measuring inversions.
pub fn build_initial_packet(
    cfg: &TubeConfig,
    envelope: impl Fn(usize, f64) -> C64,
) -> Result<PacketState, RabiError> {
    let zero = |_q: usize, _h: f64| C64::new(0.0, 0.0);
    PacketState::from_component_envelopes(cfg, envelope, zero)
}

impl PacketState {
    /// Builds a packet at t = 0 with independently chosen excited and ground
    /// envelopes.
    pub fn from_component_envelopes(
        cfg: &TubeConfig,
        excited: impl Fn(usize, f64) -> C64,
        ground: impl Fn(usize, f64) -> C64,
    ) -> Result<Self, RabiError> {
        cfg.validate()?;
        let n = cfg.chains;
        let h = cfg.grid.h_values();
        let fill = |f: &dyn Fn(usize, f64) -> C64| -> Result<Array2<C64>, RabiError> {
            let mut arr = Array2::zeros((n, h.len()));
            for q in 0..n {
                for (m, &hm) in h.iter().enumerate() {
                    let v = f(q, hm);
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(RabiError::DegenerateInput(format!(
                            "envelope produced a non-finite value at chain {q}, h = {hm}"
                        )));
                    }
                    arr[(q, m)] = v;
                }
            }
            Ok(arr)
        };
        let spectral_excited = fill(&excited)?;
        let spectral_ground = fill(&ground)?;

        let total: f64 = spectral_excited.iter().chain(spectral_ground.iter())
            .map(|z| z.norm_sqr())
            .sum();
        if total == 0.0 {
            return Err(RabiError::DegenerateInput(
                "envelope carries no amplitude anywhere".into(),
            ));
        }

        let spatial_excited = synthesize(&cfg.grid, &spectral_excited);
        let spatial_ground = synthesize(&cfg.grid, &spectral_ground);
        Ok(Self {
            chains: n,
            grid: cfg.grid,
            time: 0.0,
            spectral_excited,
            spectral_ground,
            spatial_excited,
            spatial_ground,
        })
    }

    pub fn chains(&self) -> usize {
        self.chains
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    /// Time stamp (s) the packet has been evolved to.
    pub fn time(&self) -> f64 {
        self.time
    }

    /// Spectral functions Θ_q(h), one row per hypercomplex component.
    pub fn spectral(&self, component: Component) -> ArrayView2<'_, C64> {
        match component {
            Component::Excited => self.spectral_excited.view(),
            Component::Ground => self.spectral_ground.view(),
        }
    }

    /// Spatial functions ψ_q(x), kept in sync with the spectral content.
    pub fn spatial(&self, component: Component) -> ArrayView2<'_, C64> {
        match component {
            Component::Excited => self.spatial_excited.view(),
            Component::Ground => self.spatial_ground.view(),
        }
    }

    /// Physical amplitudes Φ_qp(x) = e^{−2πiqp/n}·ψ_q(x), indexed
    /// [q, p, x]. The p dependence is a pure phase: every shift-generator
    /// power carries the same spatial profile.
    pub fn amplitudes(&self, component: Component) -> Array3<C64> {
        let spatial = self.spatial(component);
        let n = self.chains;
        let points = self.grid.points;
        Array3::from_shape_fn((n, n, points), |(q, p, m)| {
            let phase = C64::from_polar(1.0, -TAU * ((q * p) % n) as f64 / n as f64);
            phase * spatial[(q, m)]
        })
    }

    /// Total packet norm Σ_{q,p} ∫|Φ_qp|² dx, evaluated spectrally. The sum
    /// over the n shift powers contributes a factor n.
    pub fn total_norm(&self) -> f64 {
        let dh = self.grid.dh();
        let sum: f64 = self
            .spectral_excited
            .iter()
            .chain(self.spectral_ground.iter())
            .map(|z| z.norm_sqr())
            .sum();
        self.chains as f64 * dh * sum
    }

    /// Rescales the packet to total norm 1.
    pub fn normalize(&mut self) -> Result<(), RabiError> {
        let norm = self.total_norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(RabiError::DegenerateInput(format!(
                "cannot normalize a packet of norm {norm}"
            )));
        }
        let scale = C64::new(1.0 / norm.sqrt(), 0.0);
        self.spectral_excited.mapv_inplace(|z| z * scale);
        self.spectral_ground.mapv_inplace(|z| z * scale);
        // Resynthesize rather than scale in place: the spatial arrays stay
        // bitwise equal to synthesize(spectral), the invariant every other
        // mutation preserves.
        self.spatial_excited = synthesize(&self.grid, &self.spectral_excited);
        self.spatial_ground = synthesize(&self.grid, &self.spectral_ground);
        Ok(())
    }

    /// Per-chain population inversion w_q ∈ [−1, 1]: excited minus ground
    /// population over their sum, integrated over the packet. Chains with no
    /// amplitude report 0. Requires a normalized packet.
    pub fn inversion(&self) -> Result<Vec<f64>, RabiError> {
        let norm = self.total_norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(RabiError::Unnormalized { norm, tolerance: NORM_TOLERANCE });
        }
        Ok((0..self.chains)
            .map(|q| {
                let excited: f64 =
                    self.spectral_excited.row(q).iter().map(|z| z.norm_sqr()).sum();
                let ground: f64 =
                    self.spectral_ground.row(q).iter().map(|z| z.norm_sqr()).sum();
                let total = excited + ground;
                if total == 0.0 {
                    0.0
                } else {
                    (excited - ground) / total
                }
            })
            .collect())
    }

    /// Applies a precomputed evolution operator, advancing the time stamp.
    pub fn apply(&self, op: &EvolutionOperator) -> Result<Self, RabiError> {
        if op.chains != self.chains || op.points != self.grid.points {
            return Err(RabiError::DimensionMismatch(format!(
                "operator built for {} chains × {} points, state has {} × {}",
                op.chains, op.points, self.chains, self.grid.points
            )));
        }
        let mut spectral_excited = self.spectral_excited.clone();
        let mut spectral_ground = self.spectral_ground.clone();
        op.advance_spectral(&mut spectral_excited, &mut spectral_ground);
        let spatial_excited = synthesize(&self.grid, &spectral_excited);
        let spatial_ground = synthesize(&self.grid, &spectral_ground);
        Ok(Self {
            chains: self.chains,
            grid: self.grid,
            time: self.time + op.duration,
            spectral_excited,
            spectral_ground,
            spatial_excited,
            spatial_ground,
        })
    }

    /// Evolves the packet for `t` seconds under `cfg`.
    pub fn evolve(&self, cfg: &TubeConfig, t: f64) -> Result<Self, RabiError> {
        if cfg.chains != self.chains || cfg.grid != self.grid {
            return Err(RabiError::DimensionMismatch(
                "configuration grid or chain count changed since the packet was built".into(),
            ));
        }
        self.apply(&evolution_operator(cfg, t)?)
    }

    /// Cyclic relabeling of the ring by `shift` steps, implemented as left
    /// multiplication by the shift generator: component q picks up the phase
    /// e^{2πi q shift/n}. Observables (moduli, norms, inversions) are
    /// untouched, and the operation commutes with evolution because both are
    /// diagonal in q.
    pub fn relabel_chains(&self, shift: usize) -> Self {
        let n = self.chains;
        let phase_row = |q: usize| C64::from_polar(1.0, TAU * ((q * shift) % n) as f64 / n as f64);
        let mut out = self.clone();
        for arr in [
            &mut out.spectral_excited,
            &mut out.spectral_ground,
            &mut out.spatial_excited,
            &mut out.spatial_ground,
        ] {
            for (q, mut row) in arr.rows_mut().into_iter().enumerate() {
                let phase = phase_row(q);
                row.mapv_inplace(|z| z * phase);
            }
        }
        out
    }
}

fn synthesize(grid: &SpectralGrid, spectral: &Array2<C64>) -> Array2<C64> {
    let mut spatial = Array2::zeros(spectral.raw_dim());
    for (row, mut out) in spectral.rows().into_iter().zip(spatial.rows_mut()) {
        let values = grid.to_spatial(row.as_slice().expect("rows of a standard array are contiguous"));
        for (slot, value) in out.iter_mut().zip(values) {
            *slot = value;
        }
    }
    spatial
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_envelope(center_chain: usize) -> impl Fn(usize, f64) -> C64 {
        move |q, h| {
            if q == center_chain {
                C64::new((-0.5 * h * h).exp(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }
    }

    fn small_config() -> TubeConfig {
        TubeConfig {
            chains: 3,
            coupling: 1.0,
            photon_sector: 2,
            theta: ThetaProfile::Cosine { amplitude: 1.0, period: 1.0, interchain: 0.3 },
            kappa: KappaProfile::Constant { value: 1.0 },
            grid: SpectralGrid::new(128, 6.0).unwrap(),
        }
    }

    #[test]
    fn config_validation_catches_bad_input() {
        let mut cfg = small_config();
        cfg.chains = 0;
        assert!(matches!(cfg.validate(), Err(RabiError::InvalidConfig(_))));

        let mut cfg = small_config();
        cfg.photon_sector = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = small_config();
        cfg.coupling = -1.0;
        assert!(cfg.validate().is_err());

        let mut cfg = small_config();
        cfg.theta = ThetaProfile::PerOffset { values: vec![1.0, 2.0] }; // wrong length
        assert!(cfg.validate().is_err());

        assert!(small_config().validate().is_ok());
    }

    #[test]
    fn empty_envelope_is_rejected() {
        let cfg = small_config();
        let err = build_initial_packet(&cfg, |_, _| C64::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, RabiError::DegenerateInput(_)));
    }

    #[test]
    fn non_finite_envelope_is_rejected() {
        let cfg = small_config();
        let err =
            build_initial_packet(&cfg, |_, h| C64::new(1.0 / h, 0.0)).unwrap_err();
        assert!(matches!(err, RabiError::DegenerateInput(_)));
    }

    #[test]
    fn initial_packet_is_purely_excited_and_at_time_zero() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(1)).unwrap();
        packet.normalize().unwrap();
        assert_eq!(packet.time(), 0.0);
        let w = packet.inversion().unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[0], 0.0, "empty chain reports zero inversion");
        assert_eq!(w[1], 1.0, "occupied chain is fully excited");
        assert_eq!(w[2], 0.0);
    }

    #[test]
    fn normalization_reaches_unit_norm() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        packet.normalize().unwrap();
        assert!((packet.total_norm() - 1.0).abs() <= 1e-12);
        // Spatial representation agrees through Plancherel.
        let spatial_norm: f64 = (0..cfg.chains)
            .map(|q| {
                let row: Vec<C64> = packet.spatial(Component::Excited).row(q).to_vec();
                cfg.grid.norm_sq_spatial(&row)
            })
            .sum::<f64>()
            * cfg.chains as f64;
        assert!((spatial_norm - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn unnormalized_packet_cannot_report_inversion() {
        let cfg = small_config();
        let packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        assert!(matches!(packet.inversion(), Err(RabiError::Unnormalized { .. })));
    }

    #[test]
    fn amplitudes_are_phase_copies_of_the_spatial_profile() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        packet.normalize().unwrap();
        let amps = packet.amplitudes(Component::Excited);
        let spatial = packet.spatial(Component::Excited);
        let n = cfg.chains;
        for q in 0..n {
            for p in 0..n {
                let phase = C64::from_polar(1.0, -TAU * ((q * p) % n) as f64 / n as f64);
                for m in 0..cfg.grid.points {
                    let expected = phase * spatial[(q, m)];
                    assert!((amps[(q, p, m)] - expected).norm() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn evolution_conserves_norm_and_advances_time() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        packet.normalize().unwrap();
        let evolved = packet.evolve(&cfg, 3.7).unwrap();
        assert!((evolved.total_norm() - 1.0).abs() <= 1e-12);
        assert!((evolved.time() - 3.7).abs() <= 1e-15);
    }

    #[test]
    fn evolution_composes_additively() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(2)).unwrap();
        packet.normalize().unwrap();
        let two_steps =
            packet.evolve(&cfg, 0.7).unwrap().evolve(&cfg, 1.3).unwrap();
        let one_step = packet.evolve(&cfg, 2.0).unwrap();
        for component in [Component::Excited, Component::Ground] {
            let a = two_steps.spectral(component);
            let b = one_step.spectral(component);
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).norm() <= 1e-12, "{x} vs {y}");
            }
        }
        assert_eq!(two_steps.time(), one_step.time());
    }

    #[test]
    fn zero_duration_is_identity() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        packet.normalize().unwrap();
        let same = packet.evolve(&cfg, 0.0).unwrap();
        assert_eq!(same, packet);
    }

    #[test]
    fn negative_duration_is_rejected() {
        let cfg = small_config();
        let packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        assert!(matches!(
            packet.evolve(&cfg, -1.0),
            Err(RabiError::NegativeDuration { .. })
        ));
    }

    #[test]
    fn dressed_components_accumulate_split_phases() {
        // With κ constant and ϑ per-offset constant, each (q, h) evolves
        // with known closed-form phases: (e ± g)/√2 pick up
        // exp(i(ϑ_q ∓ g√(l−1)κ)t) exactly.
        let cfg = TubeConfig {
            chains: 2,
            coupling: 0.9,
            photon_sector: 5,
            theta: ThetaProfile::PerOffset { values: vec![0.4, 0.1] },
            kappa: KappaProfile::Constant { value: 0.8 },
            grid: SpectralGrid::new(16, 2.0).unwrap(),
        };
        let mut packet = PacketState::from_component_envelopes(
            &cfg,
            |_, h| C64::new((-h * h).exp(), 0.0),
            |_, h| C64::new(0.3 * (-h * h).exp(), 0.1),
        )
        .unwrap();
        packet.normalize().unwrap();
        let t = 1.234;
        let evolved = packet.evolve(&cfg, t).unwrap();

        let prefactor = cfg.coupling * 2.0; // sqrt(5 - 1)
        for q in 0..2 {
            // Ω_q of the theta profile: 0.4 + (±1)·0.1.
            let theta_q = 0.4 + if q == 0 { 0.1 } else { -0.1 };
            let plus_phase = C64::from_polar(1.0, (theta_q - prefactor * 0.8) * t);
            let minus_phase = C64::from_polar(1.0, (theta_q + prefactor * 0.8) * t);
            for m in 0..cfg.grid.points {
                let e0 = packet.spectral(Component::Excited)[(q, m)];
                let g0 = packet.spectral(Component::Ground)[(q, m)];
                let e1 = evolved.spectral(Component::Excited)[(q, m)];
                let g1 = evolved.spectral(Component::Ground)[(q, m)];
                let plus_expected = (e0 + g0) / 2.0_f64.sqrt() * plus_phase;
                let minus_expected = (e0 - g0) / 2.0_f64.sqrt() * minus_phase;
                let plus_got = (e1 + g1) / 2.0_f64.sqrt();
                let minus_got = (e1 - g1) / 2.0_f64.sqrt();
                assert!((plus_got - plus_expected).norm() <= 1e-13);
                assert!((minus_got - minus_expected).norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn linear_theta_translates_the_packet() {
        // ϑ₀(h) = slope·h multiplies Θ(h) by e^{i·slope·t·h}, which is a
        // rigid translation: ψ(x, t) = ψ(x + slope·t, 0). Pick slope·t an
        // exact multiple of dx so the translated samples line up with a
        // cyclic roll of the original array.
        let cfg = TubeConfig {
            chains: 1,
            coupling: 0.0,
            photon_sector: 1,
            theta: ThetaProfile::Linear { slope: 1.0 },
            kappa: KappaProfile::Zero,
            grid: SpectralGrid::new(256, 8.0).unwrap(),
        };
        let mut packet = build_initial_packet(&cfg, |_, h| {
            C64::new((-0.5 * h * h).exp(), 0.0)
        })
        .unwrap();
        packet.normalize().unwrap();

        let cells = 10usize;
        let t = cells as f64 * cfg.grid.dx(); // slope = 1
        let evolved = packet.evolve(&cfg, t).unwrap();

        let original = packet.spatial(Component::Excited);
        let moved = evolved.spatial(Component::Excited);
        let n = cfg.grid.points;
        for m in 0..n {
            // ψ_new[m] = ψ_old[(m + cells) mod n].
            let expected = original[(0, (m + cells) % n)];
            let got = moved[(0, m)];
            assert!(
                (got - expected).norm() <= 1e-10,
                "cell {m}: got {got}, want {expected}"
            );
        }
    }

    #[test]
    fn non_hermitian_offsets_fail_the_reality_check() {
        let cfg = TubeConfig {
            chains: 3,
            coupling: 1.0,
            photon_sector: 2,
            // Offset 1 and offset 2 (= n−1) differ: not a hermitian ring.
            theta: ThetaProfile::PerOffset { values: vec![0.0, 1.0, 0.0] },
            kappa: KappaProfile::Constant { value: 1.0 },
            grid: SpectralGrid::new(16, 2.0).unwrap(),
        };
        let err = evolution_operator(&cfg, 1.0).unwrap_err();
        match err {
            RabiError::ModelConsistency { max_imag, tolerance } => {
                assert!(max_imag > tolerance);
                // sin(2π/3) is the expected imaginary part.
                assert!((max_imag - (TAU / 3.0).sin()).abs() <= 1e-12);
            }
            other => panic!("expected model-consistency failure, got {other:?}"),
        }
    }

    #[test]
    fn mirrored_offsets_pass_the_reality_check() {
        let cfg = TubeConfig {
            chains: 4,
            coupling: 1.0,
            photon_sector: 2,
            theta: ThetaProfile::PerOffset { values: vec![0.5, 0.2, -0.3, 0.2] },
            kappa: KappaProfile::PerOffset { values: vec![1.0, 0.1, 0.0, 0.1] },
            grid: SpectralGrid::new(16, 2.0).unwrap(),
        };
        assert!(evolution_operator(&cfg, 1.0).is_ok());
    }

    #[test]
    fn relabeling_preserves_observables_for_uniform_envelopes() {
        let cfg = small_config();
        let mut packet =
            build_initial_packet(&cfg, |_, h| C64::new((-0.5 * h * h).exp(), 0.0)).unwrap();
        packet.normalize().unwrap();
        let relabeled = packet.relabel_chains(1);
        assert!((relabeled.total_norm() - 1.0).abs() <= 1e-12);
        assert_eq!(packet.inversion().unwrap(), relabeled.inversion().unwrap());
        // Moduli of every amplitude are untouched.
        let a = packet.amplitudes(Component::Excited);
        let b = relabeled.amplitudes(Component::Excited);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x.norm() - y.norm()).abs() <= 1e-15);
        }
    }

    #[test]
    fn relabeling_commutes_with_evolution() {
        let cfg = small_config();
        let mut packet = build_initial_packet(&cfg, gaussian_envelope(1)).unwrap();
        packet.normalize().unwrap();
        let t = 2.3;
        let a = packet.relabel_chains(2).evolve(&cfg, t).unwrap();
        let b = packet.evolve(&cfg, t).unwrap().relabel_chains(2);
        for component in [Component::Excited, Component::Ground] {
            for (x, y) in a.spectral(component).iter().zip(b.spectral(component).iter()) {
                assert!((x - y).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn full_ring_relabel_is_identity() {
        let cfg = small_config();
        let packet = build_initial_packet(&cfg, gaussian_envelope(0)).unwrap();
        let back = packet.relabel_chains(cfg.chains);
        for (x, y) in packet
            .spectral(Component::Excited)
            .iter()
            .zip(back.spectral(Component::Excited).iter())
        {
            assert!((x - y).norm() <= 1e-15);
        }
    }
}
