//! The cyclic shift generator of an n-chain ring and its spectral
//! decomposition.
//!
//! The generator has ones on the superdiagonal and in the bottom-left
//! corner; applying it maps component p to component p+1 (mod n). Its
//! eigenvalues are the n-th roots of unity and its eigenvectors the discrete
//! Fourier modes, which is what makes every circulant coupling on the ring
//! diagonal in the same basis.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::TAU;

/// Eigenvalues e^{2πiα/n} (α = 0..n−1) of the shift generator, in mode
/// order: the n-th roots of unity.
pub fn circulant_modes(n: usize) -> Vec<C64> {
    assert!(n >= 1, "a ring needs at least one chain");
    (0..n).map(|alpha| C64::from_polar(1.0, TAU * alpha as f64 / n as f64)).collect()
}

/// The n×n cyclic shift generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CirculantShift {
    n: usize,
}

impl CirculantShift {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a ring needs at least one chain");
        Self { n }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// The explicit matrix: row i carries a 1 in column (i+1) mod n.
    pub fn matrix(&self) -> Array2<C64> {
        let mut m = Array2::zeros((self.n, self.n));
        for i in 0..self.n {
            m[(i, (i + 1) % self.n)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// The j-th power reconstructed from the spectral decomposition:
    /// entry (r, c) = (1/n) Σ_α λ_α^j e^{2πiα(r−c)/n}.
    ///
    /// Mathematically this is the permutation matrix shifting by j; it is
    /// computed through the modes on purpose, as an independent route to be
    /// checked against repeated application of [`Self::matrix`].
    pub fn power_from_modes(&self, j: usize) -> Array2<C64> {
        let n = self.n;
        let modes = circulant_modes(n);
        let mut m = Array2::zeros((n, n));
        for r in 0..n {
            for c in 0..n {
                let mut sum = C64::new(0.0, 0.0);
                for (alpha, lambda) in modes.iter().enumerate() {
                    let vector_phase =
                        C64::from_polar(1.0, TAU * (alpha * ((n + r) - c) % n) as f64 / n as f64);
                    sum += lambda.powu(j as u32) * vector_phase;
                }
                m[(r, c)] = sum / n as f64;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn identity(n: usize) -> Array2<C64> {
        Array2::from_shape_fn((n, n), |(r, c)| {
            if r == c {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn single_chain_has_unit_mode() {
        assert_eq!(circulant_modes(1), vec![C64::new(1.0, 0.0)]);
    }

    #[test]
    fn four_chain_modes_are_quarter_turns() {
        let modes = circulant_modes(4);
        let expected = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ];
        for (got, want) in modes.iter().zip(expected) {
            assert!((got - want).norm() <= 1e-15, "got {got}, want {want}");
        }
    }

    #[test]
    fn modes_sum_to_zero_for_more_than_one_chain() {
        for n in 2..=9 {
            let sum: C64 = circulant_modes(n).into_iter().sum();
            assert!(sum.norm() <= 1e-13, "n = {n}: {sum}");
        }
    }

    #[test]
    fn modes_lie_on_unit_circle() {
        for n in 1..=9 {
            for lambda in circulant_modes(n) {
                assert!((lambda.norm() - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn matrix_shifts_components() {
        let shift = CirculantShift::new(3).matrix();
        // Row structure from the definition: (0 1 0 / 0 0 1 / 1 0 0).
        assert_eq!(shift[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(shift[(1, 2)], C64::new(1.0, 0.0));
        assert_eq!(shift[(2, 0)], C64::new(1.0, 0.0));
        assert_eq!(shift.iter().map(|z| z.norm()).sum::<f64>(), 3.0);
    }

    #[test]
    fn modes_are_matrix_eigenvalues() {
        // Apply the explicit matrix to each Fourier vector and compare with
        // the advertised eigenvalue.
        for n in 1..=8 {
            let m = CirculantShift::new(n).matrix();
            for (alpha, lambda) in circulant_modes(n).into_iter().enumerate() {
                let v: Vec<C64> = (0..n)
                    .map(|p| C64::from_polar(1.0, TAU * (alpha * p) as f64 / n as f64))
                    .collect();
                for r in 0..n {
                    let applied: C64 = (0..n).map(|c| m[(r, c)] * v[c]).sum();
                    let expected = lambda * v[r];
                    assert!(
                        (applied - expected).norm() <= 1e-13,
                        "n = {n}, mode {alpha}, row {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn nth_power_from_modes_is_identity() {
        for n in [2usize, 3, 5, 8] {
            let shift = CirculantShift::new(n);
            let diff = max_abs_diff(&shift.power_from_modes(n), &identity(n));
            assert!(diff <= 1e-13, "n = {n}: deviation {diff:e}");
        }
    }

    #[test]
    fn spectral_powers_match_repeated_matrix_products() {
        for n in [2usize, 3, 5, 8] {
            let shift = CirculantShift::new(n);
            let m = shift.matrix();
            let mut product = identity(n);
            for j in 0..=n {
                let diff = max_abs_diff(&shift.power_from_modes(j), &product);
                assert!(diff <= 1e-13, "n = {n}, power {j}: deviation {diff:e}");
                product = product.dot(&m);
            }
        }
    }
}
