//! Optimal noise for `(0, δ)`-differential privacy on a single real query.
//!
//! Among symmetric noise distributions whose mass does not grow away from the
//! origin, the cheapest way to meet `(0, δ)`-DP for any symmetric,
//! nondecreasing cost is a uniform distribution with a probability atom at
//! the origin ([`PAlphaDist`]). This crate builds and samples that family,
//! finds the optimal atom (closed form for `|x|^n`, numerically otherwise),
//! audits the leakage of arbitrary noise samplers, and compares the result
//! against a Gaussian mechanism calibrated to `σ = Δ/(2δ)`.
//!
//! ```
//! use zerodp::{optimal_ln, seeded_rng};
//!
//! let best = optimal_ln(0.9, 1.0, 2.0).unwrap();
//! assert!((best.alpha_star - 0.7).abs() < 1e-12);
//! let mut rng = seeded_rng(7, 0);
//! let noise = best.dist.sample(&mut rng);
//! assert!(noise.abs() <= best.dist.half_width());
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod cli;
pub mod curve;
pub mod dist;
mod error;
pub mod fmt;
pub mod gaussian;
pub mod normal;
pub mod optimal;
pub mod quad;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use audit::{
    analytic_delta_gaussian, analytic_delta_palpha, check_dp, empirical_delta, symmetrize, AuditMethod,
    AuditReport, Histogram,
};
pub use curve::{compare, Comparison, CurveRow, CurveTable};
pub use dist::{expected_cost_generic, expected_cost_ln, CostSpec, Draw, PAlphaDist};
pub use error::{DomainError, Error, Result};
pub use gaussian::{calibrate_gaussian, gaussian_cost, sample_gaussian, Convention, GaussianBaseline};
pub use optimal::{min_cost_ln, optimal_alpha_generic, optimal_alpha_ln, optimal_ln, Method, OptimalResult};

/// The random stream type used throughout.
pub type NoiseRng = ChaCha8Rng;

/// Deterministic random stream for `(seed, stream)`. Distinct stream indices
/// under one seed are independent, which is what parallel sampling should use.
pub fn seeded_rng(seed: u64, stream: u64) -> NoiseRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
