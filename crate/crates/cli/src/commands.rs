//! One run function per subcommand. Each loads its schema, computes through
//! the core crate, writes artifacts atomically, and prints a one-line JSON
//! summary on standard output.

use crate::config::{
    self, BandConfig, GroundStateConfig, RabiConfig, SpectraConfig, StabilityConfig,
};
use crate::output::{self, Table};
use crate::{CliError, RunArgs};
use czsnt_core::band::{band_sample, k_grid, Branch, OccupationState};
use czsnt_core::ground_state::{minimize_dimerization, well_profile, GroundStateResult};
use czsnt_core::rabi::{build_initial_packet, revival_spectrum, simulate_inversion, SpectralPeak};
use czsnt_core::spectra::{bundled_tables, parse_peak_tables, regularity_report, RegularityCheck};
use czsnt_core::stability::{stability_scan, write_scan_csv, ScanResult};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::fs;
use std::path::PathBuf;

fn artifact_strings(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn require_grid_points(points: usize) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::config(format!("grid_points must be at least 2, got {points}")));
    }
    Ok(())
}

pub fn run_band(args: &RunArgs) -> Result<(), CliError> {
    if args.print_config {
        print!("{}", config::BAND_TEMPLATE);
        return Ok(());
    }
    let cfg: BandConfig = config::load(args.params.as_deref())?;
    require_grid_points(cfg.grid_points)?;
    let params = cfg.chain.to_params()?;

    let grid = k_grid(&params, cfg.grid_points);
    let mut table = Table::new(vec![
        ("k".into(), "1/angstrom".into()),
        ("eps".into(), "eV".into()),
        ("gap".into(), "eV".into()),
        ("e".into(), "eV".into()),
        ("conduction_upper".into(), "eV".into()),
        ("conduction_lower_ssh".into(), "eV".into()),
    ]);
    for &k in &grid {
        let upper = band_sample(&params, k, Branch::Upper)?;
        let lower = band_sample(&params, k, Branch::LowerSsh)?;
        table.push(vec![
            k,
            upper.eps,
            upper.gap,
            upper.e,
            upper.conduction_energy(),
            lower.conduction_energy(),
        ]);
    }

    let path = output::write_table(&args.out, "band", args.format, &table)?;
    output::note_artifact(args.verbose, &path, table.len());

    #[derive(Serialize)]
    struct Summary {
        command: &'static str,
        status: &'static str,
        points: usize,
        zone_boundary_inv_angstrom: f64,
        artifacts: Vec<String>,
    }
    output::print_summary(&Summary {
        command: "band",
        status: "ok",
        points: table.len(),
        zone_boundary_inv_angstrom: params.zone_boundary(),
        artifacts: artifact_strings(&[path]),
    });
    Ok(())
}

#[derive(Serialize)]
struct BranchSummary {
    evaluated: usize,
    satisfied: usize,
    flagged: usize,
    all_k_satisfied: bool,
}

impl BranchSummary {
    fn of(scan: &ScanResult) -> Self {
        Self {
            evaluated: scan.evaluated_points,
            satisfied: scan.satisfied_points,
            flagged: scan.entries.len() - scan.evaluated_points,
            all_k_satisfied: scan.all_k_satisfied,
        }
    }
}

pub fn run_stability(args: &RunArgs) -> Result<(), CliError> {
    if args.print_config {
        print!("{}", config::STABILITY_TEMPLATE);
        return Ok(());
    }
    let cfg: StabilityConfig = config::load(args.params.as_deref())?;
    require_grid_points(cfg.grid_points)?;
    let params = cfg.chain.to_params()?;
    let occupation = OccupationState::new(cfg.n_c, cfg.n_v)?;

    let grid = k_grid(&params, cfg.grid_points);
    let mut paths = Vec::new();
    let mut summaries = Vec::new();
    for (branch, stem) in [(Branch::Upper, "stability_upper"), (Branch::LowerSsh, "stability_lower_ssh")]
    {
        let scan = stability_scan(&params, |_| occupation, branch, &grid);
        let path = match args.format {
            crate::output::Format::Csv => {
                let mut rendered = Vec::new();
                write_scan_csv(&mut rendered, &scan)
                    .map_err(|e| CliError::io(format!("cannot render {stem}: {e}")))?;
                output::write_atomic(&args.out, &format!("{stem}.csv"), &rendered)?
            }
            crate::output::Format::Json => {
                #[derive(Serialize)]
                struct ScanDocument<'a> {
                    units: [[&'static str; 2]; 1],
                    scan: &'a ScanResult,
                }
                output::write_json_document(
                    &args.out,
                    &format!("{stem}.json"),
                    &ScanDocument { units: [["k", "1/angstrom"]], scan: &scan },
                )?
            }
        };
        output::note_artifact(args.verbose, &path, scan.entries.len());
        paths.push(path);
        summaries.push(BranchSummary::of(&scan));
    }

    #[derive(Serialize)]
    struct Summary {
        command: &'static str,
        status: &'static str,
        grid_points: usize,
        upper: BranchSummary,
        lower_ssh: BranchSummary,
        artifacts: Vec<String>,
    }
    let lower_ssh = summaries.pop().expect("two branches scanned");
    let upper = summaries.pop().expect("two branches scanned");
    output::print_summary(&Summary {
        command: "stability",
        status: "ok",
        grid_points: grid.len(),
        upper,
        lower_ssh,
        artifacts: artifact_strings(&paths),
    });
    Ok(())
}

pub fn run_ground_state(args: &RunArgs) -> Result<(), CliError> {
    if args.print_config {
        print!("{}", config::GROUND_STATE_TEMPLATE);
        return Ok(());
    }
    let cfg: GroundStateConfig = config::load(args.params.as_deref())?;
    if !(cfg.method_tolerance > 0.0 && cfg.method_tolerance < 1.0) {
        return Err(CliError::config(format!(
            "method_tolerance must lie in (0, 1), got {}",
            cfg.method_tolerance
        )));
    }
    if cfg.profile_points < 2 {
        return Err(CliError::config(format!(
            "profile_points must be at least 2, got {}",
            cfg.profile_points
        )));
    }
    if !(cfg.profile_span.is_finite() && cfg.profile_span > 0.0) {
        return Err(CliError::config(format!(
            "profile_span must be positive, got {}",
            cfg.profile_span
        )));
    }
    let params = cfg.chain.to_params()?;

    let result = minimize_dimerization(&params, cfg.method_tolerance)?;

    let (u_lo, u_hi) = if result.dimerized {
        (-cfg.profile_span * result.u0, cfg.profile_span * result.u0)
    } else {
        // No well to frame; show the energy rise around u = 0 across a
        // fixed fraction of the validity bound instead.
        let half = 0.405 * params.t0 / (2.0 * params.alpha);
        (-half, half)
    };
    let profile = well_profile(&params, u_lo, u_hi, cfg.profile_points)
        .map_err(|e| CliError::from(e).with_context("well profile"))?;

    let mut table =
        Table::new(vec![("u".into(), "angstrom".into()), ("energy".into(), "eV".into())]);
    for (u, energy) in profile {
        table.push(vec![u, energy]);
    }

    #[derive(Serialize)]
    struct ResultDocument<'a> {
        units: [[&'static str; 2]; 5],
        result: &'a GroundStateResult,
    }
    let document = ResultDocument {
        units: [
            ["u0", "angstrom"],
            ["e_min", "eV"],
            ["e_at_zero", "eV"],
            ["z0", "dimensionless"],
            ["well_depth", "eV"],
        ],
        result: &result,
    };
    let result_path = output::write_json_document(&args.out, "ground_state.json", &document)?;
    output::note_artifact(args.verbose, &result_path, 1);
    let profile_path = output::write_table(&args.out, "well_profile", args.format, &table)?;
    output::note_artifact(args.verbose, &profile_path, table.len());

    #[derive(Serialize)]
    struct Summary<'a> {
        command: &'static str,
        status: &'static str,
        result: &'a GroundStateResult,
        artifacts: Vec<String>,
    }
    output::print_summary(&Summary {
        command: "ground-state",
        status: "ok",
        result: &result,
        artifacts: artifact_strings(&[result_path, profile_path]),
    });
    Ok(())
}

pub fn run_rabi(args: &RunArgs) -> Result<(), CliError> {
    if args.print_config {
        print!("{}", config::RABI_TEMPLATE);
        return Ok(());
    }
    let cfg: RabiConfig = config::load(args.params.as_deref())?;
    if !(cfg.envelope_width.is_finite() && cfg.envelope_width > 0.0) {
        return Err(CliError::config(format!(
            "envelope_width must be positive, got {}",
            cfg.envelope_width
        )));
    }
    if !cfg.envelope_center.is_finite() {
        return Err(CliError::config(format!(
            "envelope_center must be finite, got {}",
            cfg.envelope_center
        )));
    }
    let tube = cfg.to_tube_config()?;

    let center = cfg.envelope_center;
    let width = cfg.envelope_width;
    let mut packet = build_initial_packet(&tube, |_q, h| {
        let arg = (h - center) / width;
        C64::new((-0.5 * arg * arg).exp(), 0.0)
    })?;
    packet.normalize()?;

    let history = simulate_inversion(&tube, &packet, cfg.duration, cfg.sample_rate_hz)?;

    let mut columns = vec![("t".into(), "s".into())];
    for q in 0..history.chains() {
        columns.push((format!("inversion_chain_{q}"), String::new()));
    }
    let mut trajectory = Table::new(columns);
    for (i, &t) in history.times().iter().enumerate() {
        let mut row = Vec::with_capacity(1 + history.chains());
        row.push(t);
        for q in 0..history.chains() {
            row.push(history.chain(q)[i]);
        }
        trajectory.push(row);
    }

    // The spectrum of chain 0; all chains share one spectrum whenever the
    // initial envelope does not distinguish them.
    let spectrum = revival_spectrum(history.chain(0), history.sample_rate_hz())?;
    let mut spectrum_table = Table::new(vec![
        ("frequency".into(), "Hz".into()),
        ("amplitude".into(), String::new()),
    ]);
    for (&f, &a) in spectrum.frequencies_hz().iter().zip(spectrum.amplitudes()) {
        spectrum_table.push(vec![f, a]);
    }

    let trajectory_path = output::write_table(&args.out, "inversion", args.format, &trajectory)?;
    output::note_artifact(args.verbose, &trajectory_path, trajectory.len());
    let spectrum_path = output::write_table(&args.out, "spectrum", args.format, &spectrum_table)?;
    output::note_artifact(args.verbose, &spectrum_path, spectrum_table.len());

    #[derive(Serialize)]
    struct Summary {
        command: &'static str,
        status: &'static str,
        chains: usize,
        samples: usize,
        resolution_hz: f64,
        dominant_peak: Option<SpectralPeak>,
        artifacts: Vec<String>,
    }
    output::print_summary(&Summary {
        command: "rabi",
        status: "ok",
        chains: history.chains(),
        samples: history.len(),
        resolution_hz: spectrum.resolution_hz(),
        dominant_peak: spectrum.dominant_nonzero_peak(),
        artifacts: artifact_strings(&[trajectory_path, spectrum_path]),
    });
    Ok(())
}

pub fn run_spectra_check(args: &RunArgs) -> Result<(), CliError> {
    if args.print_config {
        print!("{}", config::SPECTRA_TEMPLATE);
        return Ok(());
    }
    let cfg: SpectraConfig = config::load(args.params.as_deref())?;
    let tables = match &cfg.fixture {
        None => bundled_tables(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            parse_peak_tables(&text)
                .map_err(|e| CliError::from(e).with_context(&path.display().to_string()))?
        }
    };
    let checks = regularity_report(&tables)?;
    let passed = checks.iter().filter(|c| c.pass).count();
    let all_pass = passed == checks.len();

    #[derive(Serialize)]
    struct ReportDocument<'a> {
        units: [[&'static str; 2]; 2],
        all_pass: bool,
        passed: usize,
        total: usize,
        checks: &'a [RegularityCheck],
    }
    let document = ReportDocument {
        units: [
            ["positions, shifts, splittings", "1/cm"],
            ["ratios", "dimensionless"],
        ],
        all_pass,
        passed,
        total: checks.len(),
        checks: &checks,
    };
    let path = output::write_json_document(&args.out, "spectra_report.json", &document)?;
    output::note_artifact(args.verbose, &path, checks.len());

    #[derive(Serialize)]
    struct Summary {
        command: &'static str,
        status: &'static str,
        all_pass: bool,
        passed: usize,
        total: usize,
        artifacts: Vec<String>,
    }
    output::print_summary(&Summary {
        command: "spectra-check",
        status: "ok",
        all_pass,
        passed,
        total: checks.len(),
        artifacts: artifact_strings(&[path]),
    });
    Ok(())
}
