//! Numerical core for dimerized-chain electronic structure and coupled-chain
//! wave-packet dynamics:
//!
//! * [`band`]: reduced-zone dispersion, gap, and quasiparticle coefficients
//!   for both sign branches of the diagonalization.
//! * [`stability`]: the three sufficient conditions deciding which branch
//!   minimizes the energy for a given band occupation.
//! * [`ground_state`]: total ground-state energy via adaptive quadrature,
//!   its elliptic-integral closed form, the small-dimerization expansion,
//!   and the double-well minimization over the dimerization coordinate.
//! * [`rabi`]: rings of coupled chains; circulant structure, spectral wave
//!   packets, exact diagonal evolution, inversion trajectories, and their
//!   frequency content.
//! * [`spectra`]: measured Raman peak tables and the quantitative
//!   regularities between them (shifts, ratios, splittings, windows).
//! * [`numerics`]: the shared kernels (AGM elliptic integrals, adaptive
//!   Gauss-Kronrod quadrature, Brent minimization).

pub mod band;
pub mod ground_state;
pub mod numerics;
pub mod rabi;
pub mod spectra;
pub mod stability;
