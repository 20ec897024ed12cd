//! Brent's derivative-free minimizer for a scalar function on an interval.
//!
//! Combines golden-section steps with parabolic interpolation; convergence is
//! superlinear on smooth unimodal functions and the golden-section fallback
//! guarantees progress otherwise.

/// Location and value of the minimum found by [`minimize`].
#[derive(Debug, Clone, Copy)]
pub struct MinimizeResult {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_2; // (3 - sqrt(5)) / 2

/// Minimizes `f` on [lo, hi] to an absolute x-tolerance of roughly `x_tol`.
///
/// The interval must be ordered (`lo < hi`) and `x_tol` positive; the
/// function is assumed unimodal on the interval (otherwise some local
/// minimum is returned). `max_iter` caps the number of refinement steps;
/// the best point seen so far is returned if the cap is reached.
pub fn minimize<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> MinimizeResult {
    assert!(lo < hi, "interval must satisfy lo < hi, got [{lo}, {hi}]");
    assert!(x_tol > 0.0, "x tolerance must be positive, got {x_tol}");

    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    // Step taken two iterations ago; gates the parabolic attempt.
    let mut e = 0.0_f64;
    let mut d = 0.0_f64;

    for iteration in 0..max_iter {
        let mid = 0.5 * (a + b);
        let tol1 = f64::EPSILON.sqrt() * x.abs() + x_tol;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return MinimizeResult { x, value: fx, iterations: iteration };
        }

        let mut use_golden = true;
        if e.abs() > tol1 {
            // Try a parabola through (x, fx), (w, fw), (v, fv).
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            // Accept only if the step stays inside (a, b) and shrinks faster
            // than the step two iterations ago.
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if mid > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < mid { b - x } else { a - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 { x + d } else { x + if d > 0.0 { tol1 } else { -tol1 } };
        let fu = f(u);

        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }

    MinimizeResult { x, value: fx, iterations: max_iter }
}
