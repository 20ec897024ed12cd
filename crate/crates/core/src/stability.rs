//! Pointwise stability of a quasiparticle population against single-mode
//! perturbations.
//!
//! Three independent inequalities decide whether a branch carrying a given
//! occupation (n_c, n_v) at wavenumber k is stable. All are strict: a point
//! sitting exactly on a boundary is reported unstable.
//!
//! * First condition, branch-dependent and gated by the sign of n_c − n_v:
//!   for population sign −1 require ε(1 ∓ ε/E) < Δ²/E, for +1 require >,
//!   with the −/+ inside the parenthesis on the lower-SSH/upper branch.
//! * Second condition, population-independent curvature bound:
//!   (ε²/E − 2Δ²/E)² − E² + (3/4)Δ² > 0.
//! * Third condition, spectral-weight sign: (3Δ²/E ± 4ε²/E)(n_c − n_v) > 0,
//!   with + on the lower-SSH branch and − on the upper branch.
//!
//! The third condition is what removes the conventional branch from
//! consideration at equilibrium: with n_c < n_v its prefactor
//! 3Δ²/E + 4ε²/E is strictly positive wherever E > 0, so the product is
//! negative at every k and the scan reports a 100% exclusion.

use crate::band::{band_sample, BandError, BandSample, Branch, ChainParams, OccupationState};
use serde::Serialize;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("population difference n_c − n_v is zero; stability is indeterminate")]
    IndeterminatePopulation,
    #[error("degenerate point at k = {k} 1/Å: E_k = 0")]
    DegeneratePoint { k: f64 },
}

fn require_gapped(sample: &BandSample) -> Result<(), StabilityError> {
    if sample.e > 0.0 {
        Ok(())
    } else {
        Err(StabilityError::DegeneratePoint { k: sample.k })
    }
}

fn require_signed(occ: &OccupationState) -> Result<f64, StabilityError> {
    match occ.population_sign() {
        0 => Err(StabilityError::IndeterminatePopulation),
        s => Ok(s as f64),
    }
}

/// First stability condition at one point. Strict inequality; the comparison
/// direction follows the sign of n_c − n_v.
pub fn condition_first(
    sample: &BandSample,
    occ: &OccupationState,
) -> Result<bool, StabilityError> {
    require_gapped(sample)?;
    let sign = require_signed(occ)?;
    let ratio = sample.eps / sample.e;
    let lhs = match sample.branch {
        Branch::LowerSsh => sample.eps * (1.0 - ratio),
        Branch::Upper => sample.eps * (1.0 + ratio),
    };
    let rhs = sample.gap * sample.gap / sample.e;
    Ok(if sign < 0.0 { lhs < rhs } else { lhs > rhs })
}

/// Second stability condition at one point (population-independent).
pub fn condition_second(sample: &BandSample) -> Result<bool, StabilityError> {
    require_gapped(sample)?;
    let eps_sq = sample.eps * sample.eps;
    let gap_sq = sample.gap * sample.gap;
    let t = (eps_sq - 2.0 * gap_sq) / sample.e;
    Ok(t * t - sample.e * sample.e + 0.75 * gap_sq > 0.0)
}

/// Third stability condition at one point: sign of the branch prefactor
/// against the population difference.
pub fn condition_third(
    sample: &BandSample,
    occ: &OccupationState,
) -> Result<bool, StabilityError> {
    require_gapped(sample)?;
    let sign = require_signed(occ)?;
    let eps_sq = sample.eps * sample.eps;
    let gap_sq = sample.gap * sample.gap;
    let prefactor = match sample.branch {
        Branch::LowerSsh => (3.0 * gap_sq + 4.0 * eps_sq) / sample.e,
        Branch::Upper => (3.0 * gap_sq - 4.0 * eps_sq) / sample.e,
    };
    Ok(prefactor * sign > 0.0)
}

/// All three conditions evaluated at one k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionReport {
    pub k: f64,
    pub branch: Branch,
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub all_satisfied: bool,
    /// Sign of n_c − n_v at this k: −1 or +1 (0 never reaches a report).
    pub population_sign: i8,
}

/// One grid point of a stability scan: either a full report or the reason
/// the point could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanEntry {
    Report(ConditionReport),
    Flagged { k: f64, branch: Branch, reason: String },
}

/// Zone-wide stability scan with per-point results and aggregates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub branch: Branch,
    pub entries: Vec<ScanEntry>,
    /// Points where all three conditions held.
    pub satisfied_points: usize,
    /// Points that produced a report (flagged points excluded).
    pub evaluated_points: usize,
    /// True when every grid point produced a report and every report has
    /// `all_satisfied`.
    pub all_k_satisfied: bool,
}

/// Evaluates the three conditions for one branch at every k in `grid`.
///
/// `occupation_of_k` supplies the population per wavenumber, so pumped or
/// partially inverted profiles can be scanned with the same driver.
/// Per-point failures (degenerate band point, indeterminate population,
/// out-of-zone k) become [`ScanEntry::Flagged`] entries instead of aborting
/// the scan.
pub fn stability_scan(
    params: &ChainParams,
    occupation_of_k: impl Fn(f64) -> OccupationState,
    branch: Branch,
    grid: &[f64],
) -> ScanResult {
    let mut entries = Vec::with_capacity(grid.len());
    let mut satisfied = 0usize;
    let mut evaluated = 0usize;

    for &k in grid {
        let entry = match evaluate_point(params, &occupation_of_k, branch, k) {
            Ok(report) => {
                evaluated += 1;
                if report.all_satisfied {
                    satisfied += 1;
                }
                ScanEntry::Report(report)
            }
            Err(reason) => ScanEntry::Flagged { k, branch, reason },
        };
        entries.push(entry);
    }

    ScanResult {
        branch,
        all_k_satisfied: evaluated == grid.len() && satisfied == evaluated && !grid.is_empty(),
        entries,
        satisfied_points: satisfied,
        evaluated_points: evaluated,
    }
}

fn evaluate_point(
    params: &ChainParams,
    occupation_of_k: &impl Fn(f64) -> OccupationState,
    branch: Branch,
    k: f64,
) -> Result<ConditionReport, String> {
    let sample = band_sample(params, k, branch).map_err(|e: BandError| e.to_string())?;
    let occ = occupation_of_k(k);
    // Reject occupations outside [0, 1] before inspecting their sign.
    OccupationState::new(occ.n_c, occ.n_v).map_err(|e| e.to_string())?;
    let cond1 = condition_first(&sample, &occ).map_err(|e| e.to_string())?;
    let cond2 = condition_second(&sample).map_err(|e| e.to_string())?;
    let cond3 = condition_third(&sample, &occ).map_err(|e| e.to_string())?;
    Ok(ConditionReport {
        k,
        branch,
        cond1,
        cond2,
        cond3,
        all_satisfied: cond1 && cond2 && cond3,
        population_sign: occ.population_sign(),
    })
}

/// Writes a scan as CSV with the fixed column set
/// `k_inv_angstrom,branch,cond1,cond2,cond3,all_satisfied`.
/// Flagged points keep their k and branch and leave the flag cells empty.
pub fn write_scan_csv<W: Write>(mut out: W, scan: &ScanResult) -> io::Result<()> {
    writeln!(out, "k_inv_angstrom,branch,cond1,cond2,cond3,all_satisfied")?;
    for entry in &scan.entries {
        match entry {
            ScanEntry::Report(r) => writeln!(
                out,
                "{:.12e},{},{},{},{},{}",
                r.k, r.branch, r.cond1, r.cond2, r.cond3, r.all_satisfied
            )?,
            ScanEntry::Flagged { k, branch, .. } => {
                writeln!(out, "{:.12e},{},,,,", k, branch)?
            }
        }
    }
    Ok(())
}
