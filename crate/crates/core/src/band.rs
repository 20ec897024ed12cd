//! Band structure of a dimerized tight-binding chain in the reduced zone.
//!
//! A chain of N sites with alternating bond lengths (dimerization coordinate
//! u) has the gapped spectrum
//!
//! ```text
//! ε_k = 2 t₀ cos(k a)        bare dispersion
//! Δ_k = 4 α u sin(k a)       gap function
//! E_k = sqrt(ε_k² + Δ_k²)    quasiparticle energy scale
//! ```
//!
//! on the reduced zone |k| ≤ π/(2a). Diagonalizing the mean-field
//! Hamiltonian leaves a sign choice in the Bogoliubov rotation, and the two
//! choices are *physically distinct* quasiparticle branches, not gauge
//! copies:
//!
//! * [`Branch::LowerSsh`]: the conventional choice; conduction energy E_k.
//! * [`Branch::Upper`]: the alternative choice; conduction energy
//!   (Δ_k² − ε_k²)/E_k, which dips below zero wherever |ε_k| > |Δ_k|.
//!
//! Both branches satisfy the diagonal-form identity
//! `ε_k (α_k² − β_k²) + 2 α_k β_k |Δ_k| = conduction energy` with the
//! principal (non-negative) roots for the rotation coefficients; the sign of
//! Δ_k is carried by that identity's |Δ_k| because the coefficient pair
//! (α_k, β_k) is defined per branch from ε_k/E_k alone.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Default sampling density for zone-wide scans.
pub const DEFAULT_K_GRID_POINTS: usize = 2048;

/// E_k below this fraction of the bandwidth scale 2t₀ counts as degenerate.
/// Far below any energy an off-degeneracy grid point can reach, yet far
/// above the rounding floor of evaluating cos near π/2.
pub const DEGENERACY_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BandError {
    #[error("wavenumber {k} 1/Å lies outside the reduced zone |k| ≤ {zone_boundary} 1/Å")]
    OutOfZone { k: f64, zone_boundary: f64 },
    #[error("degenerate point at k = {k} 1/Å: ε_k and Δ_k vanish together, E_k = 0")]
    DegeneratePoint { k: f64 },
    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),
}

/// Physical parameters of one dimerized chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    /// Hopping energy t₀ (eV); positive.
    pub t0: f64,
    /// Electron-phonon coupling α (eV/Å); positive.
    pub alpha: f64,
    /// Elastic spring constant K (eV/Å²); positive.
    pub spring_k: f64,
    /// Lattice constant a (Å); positive.
    pub a: f64,
    /// Number of lattice sites N; at least 2.
    pub n_sites: u32,
    /// Dimerization coordinate u (Å); either sign, |u| < t₀/(2α) keeps the
    /// gap below the bandwidth.
    pub u: f64,
}

impl ChainParams {
    pub fn new(
        t0: f64,
        alpha: f64,
        spring_k: f64,
        a: f64,
        n_sites: u32,
        u: f64,
    ) -> Result<Self, BandError> {
        let params = Self { t0, alpha, spring_k, a, n_sites, u };
        params.validate()?;
        Ok(params)
    }

    /// Demonstration parameter set: conventional trans-polyacetylene
    /// literature values (t₀ = 2.5 eV, α = 4.1 eV/Å, K = 21 eV/Å²,
    /// a = 1.22 Å), N = 100 sites, u = 0.05 Å.
    pub fn sample() -> Self {
        Self { t0: 2.5, alpha: 4.1, spring_k: 21.0, a: 1.22, n_sites: 100, u: 0.05 }
    }

    pub fn validate(&self) -> Result<(), BandError> {
        fn positive(name: &str, value: f64) -> Result<(), BandError> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(BandError::InvalidParams(format!("{name} must be positive, got {value}")))
            }
        }
        positive("t0", self.t0)?;
        positive("alpha", self.alpha)?;
        positive("spring_k", self.spring_k)?;
        positive("a", self.a)?;
        if self.n_sites < 2 {
            return Err(BandError::InvalidParams(format!(
                "n_sites must be at least 2, got {}",
                self.n_sites
            )));
        }
        if !self.u.is_finite() {
            return Err(BandError::InvalidParams(format!("u must be finite, got {}", self.u)));
        }
        Ok(())
    }

    /// Reduced-zone boundary π/(2a) in 1/Å.
    pub fn zone_boundary(&self) -> f64 {
        PI / (2.0 * self.a)
    }

    fn check_in_zone(&self, k: f64) -> Result<(), BandError> {
        let boundary = self.zone_boundary();
        // Tiny relative slack so grids built from the same expression for the
        // boundary are never rejected by the last-bit rounding of ±π/(2a).
        if !k.is_finite() || k.abs() > boundary * (1.0 + 4.0 * f64::EPSILON) {
            return Err(BandError::OutOfZone { k, zone_boundary: boundary });
        }
        Ok(())
    }
}

/// The two quasiparticle branches produced by the Bogoliubov sign choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Alternative sign choice; conduction energy (Δ² − ε²)/E.
    Upper,
    /// Conventional choice; conduction energy E.
    LowerSsh,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::Upper, Branch::LowerSsh];

    pub fn label(self) -> &'static str {
        match self {
            Branch::Upper => "upper",
            Branch::LowerSsh => "lower-ssh",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Occupations (n_c, n_v) of the conduction and valence states at one k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupationState {
    /// Conduction occupation in [0, 1].
    pub n_c: f64,
    /// Valence occupation in [0, 1].
    pub n_v: f64,
}

impl OccupationState {
    pub fn new(n_c: f64, n_v: f64) -> Result<Self, BandError> {
        for (name, value) in [("n_c", n_c), ("n_v", n_v)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(BandError::InvalidParams(format!(
                    "occupation {name} must lie in [0, 1], got {value}"
                )));
            }
        }
        Ok(Self { n_c, n_v })
    }

    /// Ground-state filling: empty conduction, full valence.
    pub fn equilibrium() -> Self {
        Self { n_c: 0.0, n_v: 1.0 }
    }

    /// Fully inverted filling: full conduction, empty valence.
    pub fn inverted() -> Self {
        Self { n_c: 1.0, n_v: 0.0 }
    }

    /// Sign of the population difference n_c − n_v: −1, 0, or +1.
    pub fn population_sign(&self) -> i8 {
        match self.n_c.partial_cmp(&self.n_v) {
            Some(std::cmp::Ordering::Less) => -1,
            Some(std::cmp::Ordering::Greater) => 1,
            _ => 0,
        }
    }
}

/// All single-k band quantities for one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandSample {
    /// Wavenumber (1/Å).
    pub k: f64,
    /// Bare dispersion ε_k (eV).
    pub eps: f64,
    /// Gap function Δ_k (eV); odd in u.
    pub gap: f64,
    /// Energy scale E_k = sqrt(ε_k² + Δ_k²) (eV); positive by construction.
    pub e: f64,
    /// Bogoliubov coefficient α_k ≥ 0.
    pub alpha: f64,
    /// Bogoliubov coefficient β_k ≥ 0; α_k² + β_k² = 1.
    pub beta: f64,
    pub branch: Branch,
}

impl BandSample {
    /// Conduction-state energy (eV): (Δ² − ε²)/E on [`Branch::Upper`],
    /// E on [`Branch::LowerSsh`].
    pub fn conduction_energy(&self) -> f64 {
        match self.branch {
            Branch::Upper => (self.gap * self.gap - self.eps * self.eps) / self.e,
            Branch::LowerSsh => self.e,
        }
    }

    /// Valence-state energy (eV): exactly the negated conduction energy.
    pub fn valence_energy(&self) -> f64 {
        -self.conduction_energy()
    }
}

/// Bare dispersion ε_k = 2 t₀ cos(k a) in eV.
pub fn dispersion(params: &ChainParams, k: f64) -> Result<f64, BandError> {
    params.validate()?;
    params.check_in_zone(k)?;
    Ok(2.0 * params.t0 * (k * params.a).cos())
}

/// Gap function Δ_k = 4 α u sin(k a) in eV.
pub fn gap_function(params: &ChainParams, k: f64) -> Result<f64, BandError> {
    params.validate()?;
    params.check_in_zone(k)?;
    Ok(4.0 * params.alpha * params.u * (k * params.a).sin())
}

/// Evaluates ε, Δ, E and the branch's Bogoliubov coefficients at one k.
///
/// The coefficients are the principal roots
/// `sqrt((1 ∓ ε/E)/2)`, with the upper sign for [`Branch::Upper`] and the
/// lower for [`Branch::LowerSsh`]; both are non-negative and square-sum to 1.
/// Fails with [`BandError::DegeneratePoint`] where E_k = 0 (u = 0 at the
/// zone boundary), since the rotation is undefined there.
pub fn band_sample(params: &ChainParams, k: f64, branch: Branch) -> Result<BandSample, BandError> {
    params.validate()?;
    params.check_in_zone(k)?;

    let eps = 2.0 * params.t0 * (k * params.a).cos();
    let gap = 4.0 * params.alpha * params.u * (k * params.a).sin();
    let e = eps.hypot(gap);
    // cos(k·a) at the zone boundary lands within a few ulps of zero, not on
    // it, so the degeneracy test is relative to the bandwidth scale 2t₀.
    if e <= 2.0 * params.t0 * DEGENERACY_TOLERANCE {
        return Err(BandError::DegeneratePoint { k });
    }

    let ratio = (eps / e).clamp(-1.0, 1.0);
    let minus = (0.5 * (1.0 - ratio)).max(0.0).sqrt();
    let plus = (0.5 * (1.0 + ratio)).max(0.0).sqrt();
    let (alpha, beta) = match branch {
        Branch::Upper => (minus, plus),
        Branch::LowerSsh => (plus, minus),
    };

    Ok(BandSample { k, eps, gap, e, alpha, beta, branch })
}

/// Conduction-state energy (eV) of the requested branch at one k.
///
/// The valence energy is exactly its negative; see
/// [`BandSample::valence_energy`].
pub fn quasiparticle_energy(params: &ChainParams, k: f64, branch: Branch) -> Result<f64, BandError> {
    Ok(band_sample(params, k, branch)?.conduction_energy())
}

/// Uniform inclusive grid of `points` wavenumbers spanning the reduced zone
/// [−π/(2a), π/(2a)]. `points` must be at least 2.
pub fn k_grid(params: &ChainParams, points: usize) -> Vec<f64> {
    assert!(points >= 2, "a zone grid needs at least 2 points, got {points}");
    let boundary = params.zone_boundary();
    let step = 2.0 * boundary / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                boundary // exact endpoint, immune to accumulated rounding
            } else {
                -boundary + step * i as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn two_ev_chain(u: f64) -> ChainParams {
        ChainParams { t0: 2.0, alpha: 4.1, spring_k: 21.0, a: 1.22, n_sites: 100, u }
    }

    #[test]
    fn dispersion_at_zone_center_and_boundary() {
        let p = two_ev_chain(0.03);
        assert_relative_eq!(dispersion(&p, 0.0).unwrap(), 4.0, max_relative = 1e-15);
        let kb = p.zone_boundary();
        assert!(dispersion(&p, kb).unwrap().abs() <= 1e-14);
        // Midpoint: 2 t₀ cos(π/4) = t₀ √2.
        assert_relative_eq!(
            dispersion(&p, kb / 2.0).unwrap(),
            2.0 * 2.0 * std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn gap_vanishes_at_zone_center_and_peaks_at_boundary() {
        let p = two_ev_chain(0.05);
        assert_eq!(gap_function(&p, 0.0).unwrap(), 0.0);
        let kb = p.zone_boundary();
        assert_relative_eq!(
            gap_function(&p, kb).unwrap(),
            4.0 * p.alpha * p.u,
            max_relative = 1e-14
        );
    }

    #[test]
    fn out_of_zone_is_rejected() {
        let p = ChainParams::sample();
        let kb = p.zone_boundary();
        for k in [1.01 * kb, -1.5 * kb, f64::NAN] {
            assert!(matches!(dispersion(&p, k), Err(BandError::OutOfZone { .. })), "k = {k}");
            assert!(matches!(band_sample(&p, k, Branch::Upper), Err(BandError::OutOfZone { .. })));
        }
        // The boundary itself is inside.
        assert!(dispersion(&p, kb).is_ok());
        assert!(dispersion(&p, -kb).is_ok());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = ChainParams::sample();
        p.t0 = 0.0;
        assert!(matches!(p.validate(), Err(BandError::InvalidParams(_))));
        let mut p = ChainParams::sample();
        p.n_sites = 1;
        assert!(p.validate().is_err());
        let mut p = ChainParams::sample();
        p.u = f64::NAN;
        assert!(p.validate().is_err());
        assert!(ChainParams::sample().validate().is_ok());
    }

    #[test]
    fn degenerate_point_requires_undimerized_zone_boundary() {
        let mut p = ChainParams::sample();
        p.u = 0.0;
        let kb = p.zone_boundary();
        assert!(matches!(
            band_sample(&p, kb, Branch::LowerSsh),
            Err(BandError::DegeneratePoint { .. })
        ));
        // Any dimerization at all lifts the degeneracy.
        p.u = 1e-9;
        assert!(band_sample(&p, kb, Branch::LowerSsh).is_ok());
    }

    #[test]
    fn coefficients_at_gapless_boundary_are_balanced() {
        // At k = π/(2a): ε = 0, so α = β = 1/√2 on both branches.
        let p = ChainParams::sample();
        for branch in Branch::ALL {
            let s = band_sample(&p, p.zone_boundary(), branch).unwrap();
            assert_relative_eq!(s.alpha, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-12);
            assert_relative_eq!(s.beta, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-12);
        }
    }

    #[test]
    fn coefficients_at_zone_center_are_saturated() {
        // At k = 0: ε/E = 1, so Upper has (α, β) = (0, 1) and LowerSsh (1, 0).
        let p = ChainParams::sample();
        let up = band_sample(&p, 0.0, Branch::Upper).unwrap();
        assert_eq!((up.alpha, up.beta), (0.0, 1.0));
        let lo = band_sample(&p, 0.0, Branch::LowerSsh).unwrap();
        assert_eq!((lo.alpha, lo.beta), (1.0, 0.0));
    }

    #[test]
    fn conduction_energies_at_zone_center() {
        // ε = 2t₀, Δ = 0 there: Upper gives −2t₀, LowerSsh +2t₀.
        let p = ChainParams::sample();
        assert_relative_eq!(
            quasiparticle_energy(&p, 0.0, Branch::Upper).unwrap(),
            -2.0 * p.t0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            quasiparticle_energy(&p, 0.0, Branch::LowerSsh).unwrap(),
            2.0 * p.t0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn upper_conduction_energy_vanishes_where_gap_equals_dispersion() {
        // Choose u so that 4αu = 2t₀; then |Δ| = |ε| at k a = π/4.
        let mut p = ChainParams::sample();
        p.u = p.t0 / (2.0 * p.alpha);
        let k = PI / (4.0 * p.a);
        let e = quasiparticle_energy(&p, k, Branch::Upper).unwrap();
        assert!(e.abs() <= 1e-13, "got {e}");
    }

    #[test]
    fn particle_hole_symmetry_is_exact() {
        let p = ChainParams::sample();
        for k in k_grid(&p, 257) {
            for branch in Branch::ALL {
                let s = band_sample(&p, k, branch).unwrap();
                assert_eq!(s.conduction_energy(), -s.valence_energy());
            }
        }
    }

    /// The diagonal-form identity: rotating the Hamiltonian with the
    /// branch's coefficients must reproduce the branch conduction energy as
    /// ε(α² − β²) + 2αβ|Δ| at every k, not only where the algebra is easy.
    #[test]
    fn diagonal_form_identity_holds_on_dense_grid() {
        for u in [0.05, -0.08, 0.13] {
            let p = ChainParams { u, ..ChainParams::sample() };
            for k in k_grid(&p, DEFAULT_K_GRID_POINTS) {
                for branch in Branch::ALL {
                    let s = band_sample(&p, k, branch).unwrap();
                    let diag = s.eps * (s.alpha * s.alpha - s.beta * s.beta)
                        + 2.0 * s.alpha * s.beta * s.gap.abs();
                    assert!(
                        (diag - s.conduction_energy()).abs() <= 1e-12,
                        "branch {branch}, k = {k}, u = {u}: diag {diag} vs {}",
                        s.conduction_energy()
                    );
                }
            }
        }
    }

    #[test]
    fn grid_spans_zone_inclusively() {
        let p = ChainParams::sample();
        let g = k_grid(&p, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], -p.zone_boundary());
        assert_eq!(g[100], p.zone_boundary());
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(g[50].abs() <= 1e-15);
        // Every grid point must be accepted by the zone check.
        for k in g {
            assert!(dispersion(&p, k).is_ok());
        }
    }

    proptest! {
        #[test]
        fn coefficients_are_normalized(
            t0 in 0.5_f64..8.0,
            alpha in 0.5_f64..8.0,
            u in -0.3_f64..0.3,
            a in 0.6_f64..2.5,
            frac in -1.0_f64..1.0,
        ) {
            let p = ChainParams { t0, alpha, spring_k: 21.0, a, n_sites: 100, u };
            let k = frac * p.zone_boundary();
            for branch in Branch::ALL {
                if let Ok(s) = band_sample(&p, k, branch) {
                    prop_assert!((s.alpha * s.alpha + s.beta * s.beta - 1.0).abs() <= 1e-14);
                    prop_assert!(s.alpha >= 0.0 && s.beta >= 0.0);
                    prop_assert!((s.e - s.eps.hypot(s.gap)).abs() <= 1e-14 * s.e.max(1.0));
                }
            }
        }

        #[test]
        fn energy_scale_even_and_gap_odd_in_u(
            u in 1e-6_f64..0.3,
            frac in -1.0_f64..1.0,
        ) {
            let plus = ChainParams { u, ..ChainParams::sample() };
            let minus = ChainParams { u: -u, ..ChainParams::sample() };
            let k = frac * plus.zone_boundary();
            prop_assert_eq!(gap_function(&plus, k).unwrap(), -gap_function(&minus, k).unwrap());
            if let (Ok(sp), Ok(sm)) = (
                band_sample(&plus, k, Branch::LowerSsh),
                band_sample(&minus, k, Branch::LowerSsh),
            ) {
                prop_assert_eq!(sp.e, sm.e);
            }
        }

        #[test]
        fn upper_energy_never_exceeds_lower(
            u in -0.3_f64..0.3,
            frac in -1.0_f64..1.0,
        ) {
            let p = ChainParams { u, ..ChainParams::sample() };
            let k = frac * p.zone_boundary();
            if let (Ok(upper), Ok(lower)) = (
                quasiparticle_energy(&p, k, Branch::Upper),
                quasiparticle_energy(&p, k, Branch::LowerSsh),
            ) {
                // (Δ² − ε²)/E ≤ E always, equal exactly where ε = 0.
                prop_assert!(upper <= lower + 1e-12);
            }
        }
    }
}
