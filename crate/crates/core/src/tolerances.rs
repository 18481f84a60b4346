//! Numerical thresholds shared by the library, the verification suites and
//! the acceptance tests. Everything is double precision.

/// Default target for certified truncation error of a majorant sum.
pub const TRUNCATION_TARGET: f64 = 1e-12;

/// Hard cap on the truncation order.
pub const MAX_ORDER: usize = 20_000;

/// Target for series errors inside the radius equations (tol / 10).
pub const RADIUS_SERIES_TARGET: f64 = 1e-14;

/// Default bracket width for the radius solvers.
pub const RADIUS_TOL: f64 = 1e-12;

/// Maximum admissible residual of a returned radius.
pub const RADIUS_RESIDUAL: f64 = 1e-10;

/// Absolute target of the adaptive quadrature.
pub const QUAD_TARGET: f64 = 1e-10;

/// Evaluation budget of the adaptive quadrature.
pub const QUAD_MAX_EVALS: usize = 1_000_000;

/// Leading coefficients below this magnitude count as zero for the
/// Bernardi operator with m > 0.
pub const LEADING_ZERO: f64 = 1e-14;

/// Slack multiplier applied to certified errors in every inequality test.
pub const SLACK_FACTOR: f64 = 10.0;

/// Remainders must exceed this multiple of their error to enter a slope fit.
pub const REMAINDER_SIGNAL_FACTOR: f64 = 100.0;

/// Lemma-1 samples whose `1 - |a_0|^2` falls below this are skipped.
pub const LEMMA1_DENOMINATOR_FLOOR: f64 = 1e-8;

/// Zeros of sampled Blaschke products are drawn from the disk of this radius.
pub const SAMPLE_ZERO_RADIUS: f64 = 0.95;

/// Default maximum Blaschke degree of a sample.
pub const DEFAULT_MAX_DEGREE: usize = 16;

/// Below this radius `log_bound` switches to its Taylor branch.
pub const LOG_BOUND_SERIES_CUTOFF: f64 = 1e-4;

/// Floating-point rounding allowance for a sum of `terms` nonnegative terms of
/// total size `magnitude`.
pub fn rounding_allowance(terms: usize, magnitude: f64) -> f64 {
    4.0 * (terms as f64 + 1.0) * f64::EPSILON * magnitude.abs()
}
