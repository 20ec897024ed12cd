//! Globally adaptive quadrature built on the 15-point Gauss-Kronrod rule.
//!
//! The driver repeatedly bisects the interval with the largest local error
//! estimate until the summed error bound satisfies the requested tolerance,
//! in the style of QUADPACK's QAG. The local error estimator is QUADPACK's:
//! the difference between the embedded 7-point Gauss result and the 15-point
//! Kronrod result, rescaled against the integral of |f - mean| so that the
//! bound stays honest on rough integrands.

use thiserror::Error;

/// Converged integral value together with its error bound.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    /// Rigorous-in-practice bound on the absolute error.
    pub error_bound: f64,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

/// The subdivision budget ran out before the tolerance was met. The best
/// available estimate and its bound are carried so callers can report them.
#[derive(Debug, Clone, Error, PartialEq)]
#[error(
    "quadrature failed to converge: estimate {estimate:e} with error bound {error_bound:e} \
     after {subdivisions} subdivisions"
)]
pub struct QuadratureFailure {
    pub estimate: f64,
    pub error_bound: f64,
    pub subdivisions: usize,
}

/// Abscissae of the 15-point Kronrod rule on [-1, 1]; odd-indexed entries are
/// the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// QUADPACK's empirical rescaling of the raw Gauss-Kronrod discrepancy.
fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if result_asc != 0.0 && scaled != 0.0 {
        scaled = result_asc * 1.0_f64.min((200.0 * scaled / result_asc).powf(1.5));
    }
    let floor = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if result_abs > floor {
        scaled = scaled.max(50.0 * f64::EPSILON * result_abs);
    }
    scaled
}

/// One application of the G7K15 pair on [a, b]: returns the Kronrod value and
/// the rescaled error estimate.
fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut result_abs = result_kronrod.abs();

    let mut lows = [0.0_f64; 7];
    let mut highs = [0.0_f64; 7];
    for j in 0..7 {
        let offset = half * XGK[j];
        lows[j] = f(center - offset);
        highs[j] = f(center + offset);
        let pair = lows[j] + highs[j];
        result_kronrod += WGK[j] * pair;
        result_abs += WGK[j] * (lows[j].abs() + highs[j].abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * pair;
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((lows[j] - mean).abs() + (highs[j] - mean).abs());
    }

    let err = ((result_kronrod - result_gauss) * half).abs();
    (
        result_kronrod * half,
        rescale_error(err, result_abs * half.abs(), result_asc * half.abs()),
    )
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrates `f` over [a, b] until `Σ error ≤ max(abs_tol, rel_tol · |Σ value|)`.
///
/// `max_subdivisions` bounds the number of bisections; exhausting it yields a
/// [`QuadratureFailure`] carrying the best estimate and its error bound.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadratureResult, QuadratureFailure> {
    assert!(a.is_finite() && b.is_finite(), "integration bounds must be finite");
    assert!(rel_tol >= 0.0 && abs_tol >= 0.0, "tolerances must be non-negative");

    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_bound: 0.0, subdivisions: 0 });
    }

    let (value, error) = gauss_kronrod_15(&mut f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];

    for subdivisions in 0..=max_subdivisions {
        let total_value: f64 = segments.iter().map(|s| s.value).sum();
        let total_error: f64 = segments.iter().map(|s| s.error).sum();
        if total_error <= abs_tol.max(rel_tol * total_value.abs()) {
            return Ok(QuadratureResult { value: total_value, error_bound: total_error, subdivisions });
        }
        if subdivisions == max_subdivisions {
            return Err(QuadratureFailure {
                estimate: total_value,
                error_bound: total_error,
                subdivisions,
            });
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(_, s), (_, t)| s.error.total_cmp(&t.error))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let Segment { a, b, .. } = segments.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, error) = gauss_kronrod_15(&mut f, lo, hi);
            segments.push(Segment { a: lo, b: hi, value, error });
        }
    }
    unreachable!("loop returns on the final iteration");
}
