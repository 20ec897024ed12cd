//! Parameter-file schemas, one per subcommand, plus the commented default
//! templates printed by `--print-config`.
//!
//! Every schema rejects unknown keys and fills missing ones from the built-in
//! defaults, so an empty file and no file at all mean the same run. The
//! templates are the documentation of record for units; a unit test checks
//! each one parses back to the corresponding `Default`.

use crate::CliError;
use czsnt_core::band::{BandError, ChainParams, DEFAULT_K_GRID_POINTS};
use czsnt_core::ground_state::DEFAULT_SEARCH_TOLERANCE;
use czsnt_core::rabi::{KappaProfile, SpectralGrid, ThetaProfile, TubeConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

/// Reads a TOML parameter file, or returns the schema's defaults when no
/// path was given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        // The rendered TOML error spans several lines (source excerpt with
        // carets); diagnostics here are one line, so keep its position line
        // and the cause only.
        let rendered = e.to_string();
        let position = rendered.lines().next().unwrap_or("TOML parse error");
        CliError::config(format!("{}: {position}: {}", path.display(), e.message()))
    })
}

/// Chain parameters shared by the band, stability, and ground-state runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainSection {
    pub t0: f64,
    pub alpha: f64,
    pub spring_k: f64,
    pub a: f64,
    pub n_sites: u32,
    pub u: f64,
}

impl Default for ChainSection {
    fn default() -> Self {
        let p = ChainParams::sample();
        Self { t0: p.t0, alpha: p.alpha, spring_k: p.spring_k, a: p.a, n_sites: p.n_sites, u: p.u }
    }
}

impl ChainSection {
    pub fn to_params(self) -> Result<ChainParams, BandError> {
        ChainParams::new(self.t0, self.alpha, self.spring_k, self.a, self.n_sites, self.u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandConfig {
    pub grid_points: usize,
    pub chain: ChainSection,
}

impl Default for BandConfig {
    fn default() -> Self {
        Self { grid_points: DEFAULT_K_GRID_POINTS, chain: ChainSection::default() }
    }
}

pub const BAND_TEMPLATE: &str = "\
# band: dispersion and quasiparticle-energy table over the reduced zone.

# Uniform k samples across [-pi/2a, pi/2a], endpoints included; at least 2.
grid_points = 2048

# Chain parameters (conventional trans-polyacetylene literature values).
[chain]
t0 = 2.5        # hopping integral (eV)
alpha = 4.1     # electron-phonon coupling (eV/angstrom)
spring_k = 21.0 # lattice spring constant (eV/angstrom^2)
a = 1.22        # lattice constant (angstrom)
n_sites = 100   # site count N
u = 0.05        # dimerization coordinate (angstrom)
";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilityConfig {
    pub grid_points: usize,
    pub n_c: f64,
    pub n_v: f64,
    pub chain: ChainSection,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_K_GRID_POINTS,
            n_c: 0.0,
            n_v: 1.0,
            chain: ChainSection::default(),
        }
    }
}

pub const STABILITY_TEMPLATE: &str = "\
# stability: three-condition scan over the reduced zone, both branches.

# Uniform k samples across [-pi/2a, pi/2a], endpoints included; at least 2.
grid_points = 2048

# Occupation numbers, applied uniformly over k, each in [0, 1].
# Equal values are indeterminate and rejected; n_c = 0, n_v = 1 is the
# equilibrium filling, n_c = 1, n_v = 0 full inversion.
n_c = 0.0 # conduction-band occupation (dimensionless)
n_v = 1.0 # valence-band occupation (dimensionless)

[chain]
t0 = 2.5        # hopping integral (eV)
alpha = 4.1     # electron-phonon coupling (eV/angstrom)
spring_k = 21.0 # lattice spring constant (eV/angstrom^2)
a = 1.22        # lattice constant (angstrom)
n_sites = 100   # site count N
u = 0.05        # dimerization coordinate (angstrom)
";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GroundStateConfig {
    pub method_tolerance: f64,
    pub profile_points: usize,
    pub profile_span: f64,
    pub chain: ChainSection,
}

impl Default for GroundStateConfig {
    fn default() -> Self {
        Self {
            method_tolerance: DEFAULT_SEARCH_TOLERANCE,
            profile_points: 201,
            profile_span: 1.4,
            chain: ChainSection::default(),
        }
    }
}

pub const GROUND_STATE_TEMPLATE: &str = "\
# ground-state: double-well minimum search plus an energy profile table.

# Line-search tolerance as a fraction of the search bracket, in (0, 1).
method_tolerance = 1e-10
# Profile samples over [-span*u0, span*u0] (over a fixed fraction of the
# validity bound instead when the chain does not dimerize).
profile_points = 201
profile_span = 1.4

[chain]
t0 = 2.5        # hopping integral (eV)
alpha = 4.1     # electron-phonon coupling (eV/angstrom)
spring_k = 21.0 # lattice spring constant (eV/angstrom^2)
a = 1.22        # lattice constant (angstrom)
n_sites = 100   # site count N
u = 0.05        # dimerization coordinate (angstrom, ignored by the search)
";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RabiConfig {
    pub chains: usize,
    pub coupling: f64,
    pub photon_sector: u32,
    pub grid_points: usize,
    pub h_max: f64,
    pub envelope_center: f64,
    pub envelope_width: f64,
    pub duration: f64,
    pub sample_rate_hz: f64,
    pub theta: ThetaProfile,
    pub kappa: KappaProfile,
}

impl Default for RabiConfig {
    fn default() -> Self {
        Self {
            chains: 4,
            coupling: 1.0,
            photon_sector: 2,
            grid_points: 1024,
            h_max: 6.0,
            envelope_center: 0.0,
            envelope_width: 1.0,
            duration: 64.0,
            sample_rate_hz: 8.0,
            theta: ThetaProfile::Cosine { amplitude: 1.0, period: 1.0, interchain: 0.2 },
            kappa: KappaProfile::Constant { value: 1.0 },
        }
    }
}

impl RabiConfig {
    /// Assembles and validates the model configuration; envelope and timing
    /// keys are checked by the run itself.
    pub fn to_tube_config(&self) -> Result<TubeConfig, CliError> {
        let grid = SpectralGrid::new(self.grid_points, self.h_max)?;
        let cfg = TubeConfig {
            chains: self.chains,
            coupling: self.coupling,
            photon_sector: self.photon_sector,
            theta: self.theta.clone(),
            kappa: self.kappa.clone(),
            grid,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub const RABI_TEMPLATE: &str = "\
# rabi: inversion trajectory of a wave packet and its amplitude spectrum.

chains = 4            # chains n on the ring
coupling = 1.0        # coupling rate g (rad/s), 0 decouples field and matter
photon_sector = 2     # photon sector l >= 1; the Rabi prefactor is g*sqrt(l-1)
grid_points = 1024    # spectral grid size
h_max = 6.0           # grid half-extent in h (grid spans [-h_max, h_max))
envelope_center = 0.0 # Gaussian envelope center in h
envelope_width = 1.0  # Gaussian envelope width in h; positive
duration = 64.0       # simulated time (s)
sample_rate_hz = 8.0  # inversion sampling rate (Hz); must clear the
                      # fastest Rabi line or the run aborts as undersampled

# Common-phase profile by ring offset. Kinds: zero; cosine (amplitude,
# period, interchain); linear (slope); per-offset (values, length n,
# mirror-symmetric in the offset for a consistent model).
[theta]
kind = \"cosine\"
amplitude = 1.0 # intrachain dispersion amplitude (rad/s)
period = 1.0    # dispersion period in h
interchain = 0.2 # nearest-neighbour chain coupling (rad/s)

# Rabi-shape profile by ring offset. Kinds: zero; constant (value);
# cosine (base, modulation, period); per-offset (values, length n).
[kappa]
kind = \"constant\"
value = 1.0 # uniform shape (dimensionless)
";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectraConfig {
    pub fixture: Option<PathBuf>,
}

pub const SPECTRA_TEMPLATE: &str = "\
# spectra-check: regularity report over the bundled peak tables.

# Optional path to a peak-table file in the fixture format; when omitted
# the bundled tables are used. Positions and uncertainties in 1/cm.
# fixture = \"path/to/peaks.txt\"
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_parse_back_to_the_defaults() {
        assert_eq!(toml::from_str::<BandConfig>(BAND_TEMPLATE).unwrap(), BandConfig::default());
        assert_eq!(
            toml::from_str::<StabilityConfig>(STABILITY_TEMPLATE).unwrap(),
            StabilityConfig::default()
        );
        assert_eq!(
            toml::from_str::<GroundStateConfig>(GROUND_STATE_TEMPLATE).unwrap(),
            GroundStateConfig::default()
        );
        assert_eq!(toml::from_str::<RabiConfig>(RABI_TEMPLATE).unwrap(), RabiConfig::default());
        assert_eq!(
            toml::from_str::<SpectraConfig>(SPECTRA_TEMPLATE).unwrap(),
            SpectraConfig::default()
        );
    }

    #[test]
    fn defaults_produce_valid_model_inputs() {
        ChainSection::default().to_params().unwrap();
        RabiConfig::default().to_tube_config().unwrap();
    }

    #[test]
    fn empty_file_means_defaults() {
        assert_eq!(toml::from_str::<BandConfig>("").unwrap(), BandConfig::default());
        assert_eq!(toml::from_str::<RabiConfig>("").unwrap(), RabiConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<BandConfig>("grid_pointz = 7").is_err());
        assert!(toml::from_str::<StabilityConfig>("[chain]\nt_zero = 1.0").is_err());
        assert!(toml::from_str::<RabiConfig>("amplitude = 1.0").is_err());
    }

    #[test]
    fn profile_selection_round_trips_through_toml() {
        let parsed: RabiConfig = toml::from_str(
            "[theta]\nkind = \"per-offset\"\nvalues = [0.5, 0.1, 0.0, 0.1]\n\
             [kappa]\nkind = \"cosine\"\nbase = 1.0\nmodulation = 0.2\nperiod = 0.7\n",
        )
        .unwrap();
        assert_eq!(
            parsed.theta,
            ThetaProfile::PerOffset { values: vec![0.5, 0.1, 0.0, 0.1] }
        );
        assert_eq!(
            parsed.kappa,
            KappaProfile::Cosine { base: 1.0, modulation: 0.2, period: 0.7 }
        );
    }
}
