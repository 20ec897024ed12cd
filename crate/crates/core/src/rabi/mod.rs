//! Rabi wave packets on a cyclic bundle of n coupled chains.
//!
//! The bundle couples identical chains on a ring, so every coupling matrix
//! is circulant and is diagonalized once and for all by the discrete Fourier
//! modes of the shift generator ([`circulant`]). A packet is carried by a
//! pair of two-level components (excited/ground) per hypercomplex component
//! q, each a spectral function Θ_q(h) on a uniform grid ([`grid`]).
//!
//! Evolution is diagonal in (q, h): the excited/ground pair at each point is
//! rotated at the Rabi rate g·sqrt(l−1)·κ_q(h), where l is the photon sector
//! and κ_q the circulant eigenvalue of the coupling shape, on top of a common
//! phase at the eigenfrequency ϑ_q(h) ([`packet`]). The per-chain population
//! inversion oscillates at twice the Rabi rate, and its spectrum exposes the
//! revival structure ([`spectrum`]).

pub mod circulant;
pub mod grid;
pub mod packet;
pub mod spectrum;

pub use circulant::{circulant_modes, CirculantShift};
pub use grid::SpectralGrid;
pub use packet::{
    build_initial_packet, evolution_operator, Component, EvolutionOperator, KappaProfile,
    PacketState, ThetaProfile, TubeConfig, REALITY_TOLERANCE,
};
pub use spectrum::{
    revival_spectrum, simulate_inversion, InversionHistory, SpectralPeak, Spectrum,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RabiError {
    #[error("invalid tube configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("state does not match configuration: {0}")]
    DimensionMismatch(String),
    #[error(
        "per-component dispersion is not real: max |Im| = {max_imag:e} exceeds {tolerance:e}; \
         the offset profiles do not describe a hermitian ring coupling"
    )]
    ModelConsistency { max_imag: f64, tolerance: f64 },
    #[error("packet norm is {norm}, not 1 within {tolerance}; normalize first")]
    Unnormalized { norm: f64, tolerance: f64 },
    #[error("evolution duration must be non-negative and finite, got {t}")]
    NegativeDuration { t: f64 },
    #[error(
        "sample rate {sample_rate_hz} Hz cannot resolve inversion content up to {required_hz} Hz; \
         raise the rate above twice that frequency or weaken the coupling"
    )]
    Aliasing { required_hz: f64, sample_rate_hz: f64 },
}
