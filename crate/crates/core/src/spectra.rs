//! Raman peak-table fixtures and the quantitative regularities read off
//! them: line shifts between samples, intensity-position ratios, satellite
//! splittings around a main line, spectral-window membership, and the
//! coherence-length estimate that motivates the window bounds.
//!
//! Absolute line positions are measurement inputs here, never predictions;
//! everything this module checks is a relation *between* measured lines.

use serde::Serialize;
use thiserror::Error;

/// Bundled measurement tables (cm⁻¹). Parsed by [`bundled_tables`]; the
/// test suite pins the bytes, so edits to the fixture fail loudly.
pub const BUNDLED_FIXTURES: &str = include_str!("../fixtures/raman_peaks.txt");

/// Sample identifiers used by the bundled tables.
pub mod sample_ids {
    pub const CU_IMPLANTED: &str = "Cu-implanted-side";
    pub const CU_UNIMPLANTED: &str = "Cu-unimplanted-side";
    pub const B_IMPLANTED: &str = "B-implanted-side";
}

/// RS-active window (cm⁻¹) for the polaron-lattice AFR mode.
pub const RS_AFR_WINDOW_INV_CM: (f64, f64) = (402.5, 673.7);

/// IR window (cm⁻¹) for polaron-lattice lines in trans-polyacetylene.
pub const IR_POLARON_WINDOW_INV_CM: (f64, f64) = (386.7, 603.0);

/// Known IR mode (cm⁻¹) whose membership in the IR window supports its
/// reinterpretation as a polaron-lattice line.
pub const IR_CANDIDATE_MODE_INV_CM: f64 = 540.0;

/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR_J_S: f64 = 1.054_571_817e-34;

/// One electronvolt in joules, CODATA 2018 (exact).
pub const EV_J: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no sample table named '{id}'")]
    MissingSample { id: String },
    #[error("peak index {index} out of range for '{id}' ({len} peaks)")]
    PairingIndex { id: String, index: usize, len: usize },
    #[error("denominator peak at index {index} has position zero")]
    ZeroDenominator { index: usize },
    #[error("{0}")]
    DomainError(String),
}

/// One narrow line: position and one-sigma uncertainty in cm⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakRecord {
    pub position: f64,
    pub uncertainty: f64,
    pub label: Option<String>,
}

/// One broad band: center and full width, each with an uncertainty (cm⁻¹).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BroadBand {
    pub center: f64,
    pub center_uncertainty: f64,
    pub width: f64,
    pub width_uncertainty: f64,
}

/// All lines reported for one sample. Narrow peaks are kept sorted by
/// position (the parser enforces strict increase), so indices are stable
/// references.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleTable {
    pub id: String,
    pub peaks: Vec<PeakRecord>,
    pub broad: Vec<BroadBand>,
}

/// Parses peak tables from the fixture format: `sample <id>`,
/// `peak <pos> <unc> [label]`, `broad <center> <unc> <width> <unc>`,
/// with `#` comments and blank lines ignored.
pub fn parse_peak_tables(text: &str) -> Result<Vec<SampleTable>, SpectraError> {
    let mut tables: Vec<SampleTable> = Vec::new();

    let parse_num = |token: &str, line: usize, what: &str| -> Result<f64, SpectraError> {
        token.parse::<f64>().map_err(|_| SpectraError::Parse {
            line,
            message: format!("{what} is not a number: '{token}'"),
        })
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let directive = fields.next().expect("non-empty line has a first token");
        let rest: Vec<&str> = fields.collect();

        match directive {
            "sample" => {
                let [id] = rest.as_slice() else {
                    return Err(SpectraError::Parse {
                        line,
                        message: "expected: sample <id>".into(),
                    });
                };
                if tables.iter().any(|t| t.id == *id) {
                    return Err(SpectraError::Parse {
                        line,
                        message: format!("duplicate sample id '{id}'"),
                    });
                }
                tables.push(SampleTable {
                    id: (*id).to_owned(),
                    peaks: Vec::new(),
                    broad: Vec::new(),
                });
            }
            "peak" => {
                let (pos_tok, unc_tok, label) = match rest.as_slice() {
                    [p, u] => (*p, *u, None),
                    [p, u, l] => (*p, *u, Some((*l).to_owned())),
                    _ => {
                        return Err(SpectraError::Parse {
                            line,
                            message: "expected: peak <pos> <unc> [label]".into(),
                        })
                    }
                };
                let position = parse_num(pos_tok, line, "peak position")?;
                let uncertainty = parse_num(unc_tok, line, "peak uncertainty")?;
                if !(position.is_finite() && position > 0.0) {
                    return Err(SpectraError::Parse {
                        line,
                        message: format!("peak position must be positive, got {position}"),
                    });
                }
                if !(uncertainty.is_finite() && uncertainty > 0.0) {
                    return Err(SpectraError::Parse {
                        line,
                        message: format!("peak uncertainty must be positive, got {uncertainty}"),
                    });
                }
                let table = tables.last_mut().ok_or_else(|| SpectraError::Parse {
                    line,
                    message: "peak before any sample directive".into(),
                })?;
                if let Some(last) = table.peaks.last() {
                    if position <= last.position {
                        return Err(SpectraError::Parse {
                            line,
                            message: format!(
                                "peak positions must strictly increase: {position} after {}",
                                last.position
                            ),
                        });
                    }
                }
                table.peaks.push(PeakRecord { position, uncertainty, label });
            }
            "broad" => {
                let [c, cu, w, wu] = rest.as_slice() else {
                    return Err(SpectraError::Parse {
                        line,
                        message: "expected: broad <center> <unc> <width> <unc>".into(),
                    });
                };
                let center = parse_num(c, line, "band center")?;
                let center_uncertainty = parse_num(cu, line, "center uncertainty")?;
                let width = parse_num(w, line, "band width")?;
                let width_uncertainty = parse_num(wu, line, "width uncertainty")?;
                for (value, what) in [
                    (center, "band center"),
                    (center_uncertainty, "center uncertainty"),
                    (width, "band width"),
                    (width_uncertainty, "width uncertainty"),
                ] {
                    if !(value.is_finite() && value > 0.0) {
                        return Err(SpectraError::Parse {
                            line,
                            message: format!("{what} must be positive, got {value}"),
                        });
                    }
                }
                let table = tables.last_mut().ok_or_else(|| SpectraError::Parse {
                    line,
                    message: "broad band before any sample directive".into(),
                })?;
                table.broad.push(BroadBand {
                    center,
                    center_uncertainty,
                    width,
                    width_uncertainty,
                });
            }
            other => {
                return Err(SpectraError::Parse {
                    line,
                    message: format!("unknown directive '{other}'"),
                });
            }
        }
    }
    Ok(tables)
}

/// The bundled tables; infallible because the fixture is covered by tests.
pub fn bundled_tables() -> Vec<SampleTable> {
    parse_peak_tables(BUNDLED_FIXTURES).expect("bundled fixture parses")
}

fn peak_at<'t>(
    table: &'t SampleTable,
    index: usize,
) -> Result<&'t PeakRecord, SpectraError> {
    table.peaks.get(index).ok_or_else(|| SpectraError::PairingIndex {
        id: table.id.clone(),
        index,
        len: table.peaks.len(),
    })
}

/// Difference of two paired lines with its root-sum-square uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftEntry {
    pub minuend_index: usize,
    pub subtrahend_index: usize,
    pub shift: f64,
    pub uncertainty: f64,
}

/// Shifts a[i] − b[j] (cm⁻¹) for each pair (i, j), with RSS uncertainties.
pub fn peak_shifts(
    a: &SampleTable,
    b: &SampleTable,
    pairing: &[(usize, usize)],
) -> Result<Vec<ShiftEntry>, SpectraError> {
    pairing
        .iter()
        .map(|&(i, j)| {
            let pa = peak_at(a, i)?;
            let pb = peak_at(b, j)?;
            Ok(ShiftEntry {
                minuend_index: i,
                subtrahend_index: j,
                shift: pa.position - pb.position,
                uncertainty: pa.uncertainty.hypot(pb.uncertainty),
            })
        })
        .collect()
}

/// Ratio of two paired lines with its first-order propagated uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEntry {
    pub numerator_index: usize,
    pub denominator_index: usize,
    pub ratio: f64,
    pub uncertainty: f64,
}

/// Ratios a[i] / b[j] for each pair (i, j); uncertainty is
/// r·sqrt((σa/a)² + (σb/b)²).
pub fn peak_ratios(
    a: &SampleTable,
    b: &SampleTable,
    pairing: &[(usize, usize)],
) -> Result<Vec<RatioEntry>, SpectraError> {
    pairing
        .iter()
        .map(|&(i, j)| {
            let pa = peak_at(a, i)?;
            let pb = peak_at(b, j)?;
            if pb.position == 0.0 {
                return Err(SpectraError::ZeroDenominator { index: j });
            }
            let ratio = pa.position / pb.position;
            let uncertainty = ratio
                * (pa.uncertainty / pa.position).hypot(pb.uncertainty / pb.position);
            Ok(RatioEntry { numerator_index: i, denominator_index: j, ratio, uncertainty })
        })
        .collect()
}

/// Satellite splittings |pos[sat] − pos[main]| around one main line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AfeswrSplittings {
    pub main_index: usize,
    pub satellite_indices: Vec<usize>,
    /// One offset per satellite, in the order given (cm⁻¹).
    pub offsets: Vec<f64>,
    /// RSS uncertainty per offset.
    pub uncertainties: Vec<f64>,
    /// Arithmetic mean of the offsets.
    pub mean_offset: f64,
}

/// Computes the splittings of the given satellites around the main line.
/// Satellites must be distinct from the main index and non-empty.
pub fn afeswr_splittings(
    table: &SampleTable,
    main_index: usize,
    satellite_indices: &[usize],
) -> Result<AfeswrSplittings, SpectraError> {
    if satellite_indices.is_empty() {
        return Err(SpectraError::DomainError(
            "at least one satellite index is required".into(),
        ));
    }
    let main = peak_at(table, main_index)?;
    let mut offsets = Vec::with_capacity(satellite_indices.len());
    let mut uncertainties = Vec::with_capacity(satellite_indices.len());
    for &s in satellite_indices {
        if s == main_index {
            return Err(SpectraError::DomainError(format!(
                "satellite index {s} coincides with the main line"
            )));
        }
        let sat = peak_at(table, s)?;
        offsets.push((sat.position - main.position).abs());
        uncertainties.push(sat.uncertainty.hypot(main.uncertainty));
    }
    let mean_offset = offsets.iter().sum::<f64>() / offsets.len() as f64;
    Ok(AfeswrSplittings {
        main_index,
        satellite_indices: satellite_indices.to_vec(),
        offsets,
        uncertainties,
        mean_offset,
    })
}

/// Closed-interval membership: lo ≤ value ≤ hi. Panics if the window is
/// not an ordered pair of finite numbers.
pub fn window_check(value: f64, lo: f64, hi: f64) -> bool {
    assert!(
        lo.is_finite() && hi.is_finite() && lo < hi,
        "window bounds must be finite with lo < hi, got ({lo}, {hi})"
    );
    lo <= value && value <= hi
}

/// Inputs for the coherence-length estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceInput {
    /// Fermi velocity (m/s).
    pub fermi_velocity: f64,
    /// Zero-temperature gap (eV).
    pub gap: f64,
}

/// Coherence length ξ = ħ·v_F / Δ₀ in ångströms.
pub fn coherence_length(input: &CoherenceInput) -> Result<f64, SpectraError> {
    if !(input.fermi_velocity.is_finite() && input.fermi_velocity > 0.0) {
        return Err(SpectraError::DomainError(format!(
            "Fermi velocity must be positive, got {}",
            input.fermi_velocity
        )));
    }
    if !(input.gap.is_finite() && input.gap > 0.0) {
        return Err(SpectraError::DomainError(format!(
            "gap must be positive, got {}",
            input.gap
        )));
    }
    let meters = HBAR_J_S * input.fermi_velocity / (input.gap * EV_J);
    Ok(meters * 1e10)
}

/// One named consistency check of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityCheck {
    pub name: String,
    /// Human-readable statement of what the computed value is held against.
    pub expected: String,
    pub computed: f64,
    /// Numeric acceptance half-width, when the check is of that form.
    pub tolerance: Option<f64>,
    pub pass: bool,
}

fn find_table<'t>(
    tables: &'t [SampleTable],
    id: &str,
) -> Result<&'t SampleTable, SpectraError> {
    tables
        .iter()
        .find(|t| t.id == id)
        .ok_or_else(|| SpectraError::MissingSample { id: id.to_owned() })
}

fn tolerance_check(name: &str, expected: f64, computed: f64, tolerance: f64) -> RegularityCheck {
    RegularityCheck {
        name: name.to_owned(),
        expected: format!("{expected} ± {tolerance:.4}"),
        computed,
        tolerance: Some(tolerance),
        pass: (computed - expected).abs() <= tolerance,
    }
}

/// Runs every quantitative regularity over the given tables (normally
/// [`bundled_tables`]) and reports each as a named pass/fail entry:
///
/// * the three implantation shifts against their reported values, within
///   combined line uncertainties;
/// * monotonicity of those shifts with frequency;
/// * the two revival-line ratios against their reported values, ±0.003;
/// * the two satellite splittings and their mean, at the reported precision;
/// * window membership of the RS AFR line and the known IR mode;
/// * the splitting mean against the nominal 300 cm⁻¹ (informational).
pub fn regularity_report(
    tables: &[SampleTable],
) -> Result<Vec<RegularityCheck>, SpectraError> {
    let cu_implanted = find_table(tables, sample_ids::CU_IMPLANTED)?;
    let cu_unimplanted = find_table(tables, sample_ids::CU_UNIMPLANTED)?;
    let b_implanted = find_table(tables, sample_ids::B_IMPLANTED)?;

    let mut checks = Vec::new();

    // Reported shifts of the three high-frequency lines between the two
    // implanted samples, low to high frequency.
    let shifts = peak_shifts(cu_implanted, b_implanted, &[(1, 0), (2, 2), (3, 3)])?;
    let reported_shifts = [2.8, 7.0, 11.3];
    for (entry, reported) in shifts.iter().zip(reported_shifts) {
        checks.push(tolerance_check(
            &format!("shift-{}", cu_implanted.peaks[entry.minuend_index].position),
            reported,
            entry.shift,
            entry.uncertainty,
        ));
    }

    // The shifts grow with frequency; the smallest successive difference
    // being positive is the numeric form of "monotonically increasing".
    let min_diff = shifts
        .windows(2)
        .map(|w| w[1].shift - w[0].shift)
        .fold(f64::INFINITY, f64::min);
    checks.push(RegularityCheck {
        name: "shift-monotonic".into(),
        expected: "all successive shift differences > 0".into(),
        computed: min_diff,
        tolerance: None,
        pass: min_diff > 0.0,
    });

    // Revival-line frequency ratios, implanted over unimplanted.
    let ratios = peak_ratios(cu_implanted, cu_unimplanted, &[(3, 6), (2, 5)])?;
    let reported_ratios = [1.151, 1.134];
    for (entry, reported) in ratios.iter().zip(reported_ratios) {
        let num = cu_implanted.peaks[entry.numerator_index].position;
        let den = cu_unimplanted.peaks[entry.denominator_index].position;
        checks.push(tolerance_check(
            &format!("ratio-{num}-over-{den}"),
            reported,
            entry.ratio,
            0.003,
        ));
    }

    // Satellite splittings around the main unimplanted-side line. The
    // reported values carry one decimal digit; 0.05 is half an ulp of that
    // precision, and the 1e-9 absorbs binary representation error.
    let splittings = afeswr_splittings(cu_unimplanted, 1, &[0, 2])?;
    let reported_offsets = [287.2, 335.3];
    for ((&offset, &sat), reported) in splittings
        .offsets
        .iter()
        .zip(&splittings.satellite_indices)
        .zip(reported_offsets)
    {
        checks.push(tolerance_check(
            &format!("splitting-{}", cu_unimplanted.peaks[sat].position),
            reported,
            offset,
            0.05 + 1e-9,
        ));
    }
    checks.push(tolerance_check(
        "splitting-mean",
        311.3,
        splittings.mean_offset,
        0.05 + 1e-9,
    ));

    // Window memberships.
    let afr = cu_implanted.peaks[0].position;
    let (rs_lo, rs_hi) = RS_AFR_WINDOW_INV_CM;
    checks.push(RegularityCheck {
        name: "window-afr-rs".into(),
        expected: format!("inside [{rs_lo}, {rs_hi}] cm^-1"),
        computed: afr,
        tolerance: None,
        pass: window_check(afr, rs_lo, rs_hi),
    });
    let (ir_lo, ir_hi) = IR_POLARON_WINDOW_INV_CM;
    checks.push(RegularityCheck {
        name: "window-ir-candidate".into(),
        expected: format!("inside [{ir_lo}, {ir_hi}] cm^-1"),
        computed: IR_CANDIDATE_MODE_INV_CM,
        tolerance: None,
        pass: window_check(IR_CANDIDATE_MODE_INV_CM, ir_lo, ir_hi),
    });

    // The mean splitting sits near the nominal 300 cm⁻¹ scale; reported as
    // context only, so this entry always passes.
    checks.push(RegularityCheck {
        name: "splitting-mean-vs-300-informational".into(),
        expected: "close to the nominal 300 cm^-1 (informational, always passes)".into(),
        computed: (splittings.mean_offset - 300.0).abs(),
        tolerance: None,
        pass: true,
    });

    Ok(checks)
}

/// True when every check in the report passed.
pub fn report_all_pass(checks: &[RegularityCheck]) -> bool {
    checks.iter().all(|c| c.pass)
}
