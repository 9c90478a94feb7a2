//! Standard normal distribution helpers.

use std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF, `Φ(x) = erfc(-x/√2)/2`.
///
/// `erfc` (not `1 + erf`) keeps full relative precision in the lower tail.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `P(|Z| <= x) = 2Φ(x) - 1 = erf(x/√2)` for `x >= 0`.
pub fn central_mass(x: f64) -> f64 {
    libm::erf(x * FRAC_1_SQRT_2)
}
