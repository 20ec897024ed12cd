//! Scalar numerical kernels shared by the physics modules: complete elliptic
//! integrals, adaptive Gauss-Kronrod quadrature, and a derivative-free
//! one-dimensional minimizer.

pub mod brent;
pub mod elliptic;
pub mod quadrature;
