//! Optimal atom size and minimum expected cost.
//!
//! For `|x|^n` costs the optimum is available in closed form: the atom stays
//! at zero up to `delta = n/(n+1)` and grows as `(n+1)delta - n` beyond it.
//! Other costs go through a grid scan over `alpha` refined by golden-section
//! search.

use serde::Serialize;

use crate::dist::{expected_cost_generic, CostSpec, PAlphaDist};
use crate::error::{check_delta, check_exponent, check_sensitivity, DomainError, Result};

/// Fraction of `delta` the numeric scan stops short of. The support, and
/// with it the cost of any increasing loss, diverges as `alpha -> delta`.
pub const SCAN_CAP: f64 = 1e-9;

/// Quadrature tolerance used inside the numeric optimizer, relative to the
/// cost at `alpha = 0`. Tighter than the public default so that quadrature
/// noise does not move the located minimum.
const OPTIMIZER_REL_QUAD_TOL: f64 = 1e-13;

/// Costs within this relative distance of the incumbent count as ties, so
/// rounding noise cannot pull the answer away from the smallest `alpha`.
const TIE_REL: f64 = 1e-14;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    NumericScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalResult {
    pub alpha_star: f64,
    pub min_cost: f64,
    pub dist: PAlphaDist,
    pub method: Method,
}

/// Delta at which the optimal atom for `|x|^n` starts to grow.
pub fn onset_delta(n: f64) -> f64 {
    n / (n + 1.0)
}

/// Optimal atom for the `|x|^n` cost. The boundary `delta = n/(n+1)` belongs
/// to the `alpha* = 0` branch.
pub fn optimal_alpha_ln(delta: f64, n: f64) -> Result<f64, DomainError> {
    check_delta(delta)?;
    check_exponent(n)?;
    if delta <= onset_delta(n) {
        Ok(0.0)
    } else {
        Ok(((n + 1.0) * delta - n).max(0.0))
    }
}

/// Minimum of `E|X|^n` over the family.
pub fn min_cost_ln(delta: f64, sensitivity: f64, n: f64) -> Result<f64, DomainError> {
    check_delta(delta)?;
    check_sensitivity(sensitivity)?;
    check_exponent(n)?;
    let scale = sensitivity.powf(n) / 2f64.powf(n);
    if delta <= onset_delta(n) {
        Ok(scale / ((n + 1.0) * delta.powf(n)))
    } else {
        Ok(scale * ((n + 1.0) / n).powf(n) * (1.0 - delta))
    }
}

/// Closed-form optimum for `|x|^n`, packaged with its distribution.
pub fn optimal_ln(delta: f64, sensitivity: f64, n: f64) -> Result<OptimalResult, DomainError> {
    let alpha_star = optimal_alpha_ln(delta, n)?;
    let min_cost = min_cost_ln(delta, sensitivity, n)?;
    let dist = PAlphaDist::new(delta, sensitivity, alpha_star)?;
    Ok(OptimalResult { alpha_star, min_cost, dist, method: Method::ClosedForm })
}

/// Numeric optimum over `alpha` for any symmetric nondecreasing cost.
///
/// Scans `grid_points` equally spaced values of `alpha` on
/// `[0, delta (1 - 1e-9)]`, then runs golden-section search on the two grid
/// cells around the best point until the bracket is shorter than
/// `refine_tol`. Among equal costs the smallest `alpha` wins.
pub fn optimal_alpha_generic(
    delta: f64,
    sensitivity: f64,
    cost: &CostSpec,
    grid_points: usize,
    refine_tol: f64,
) -> Result<OptimalResult> {
    let base = PAlphaDist::new(delta, sensitivity, 0.0)?;
    if grid_points < 16 {
        return Err(DomainError::invalid(format!("grid_points must be >= 16, got {grid_points}")).into());
    }
    if !(refine_tol > 0.0) {
        return Err(DomainError::invalid(format!("refine_tol must be positive, got {refine_tol}")).into());
    }
    cost.validate_on(base.half_width())?;

    let cost0 = expected_cost_generic(&base, cost, crate::dist::DEFAULT_QUAD_TOL)?;
    let quad_tol = (OPTIMIZER_REL_QUAD_TOL * cost0).max(1e-15);
    let eval = |alpha: f64| -> Result<f64> {
        let d = PAlphaDist::new(delta, sensitivity, alpha)?;
        expected_cost_generic(&d, cost, quad_tol)
    };

    let upper = delta * (1.0 - SCAN_CAP);
    let step = upper / (grid_points - 1) as f64;
    let grid: Vec<f64> = (0..grid_points)
        .map(|i| if i + 1 == grid_points { upper } else { step * i as f64 })
        .collect();
    let values = grid.iter().map(|&a| eval(a)).collect::<Result<Vec<_>>>()?;

    let improves = |candidate: f64, incumbent: f64| candidate < incumbent - TIE_REL * incumbent.abs();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if improves(*v, values[best]) {
            best = i;
        }
    }
    let (mut best_alpha, mut best_cost) = (grid[best], values[best]);

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid_points - 1)];
    let (alpha, value) = golden_section(eval, lo, hi, refine_tol)?;
    if improves(value, best_cost) {
        best_alpha = alpha;
        best_cost = value;
    }

    Ok(OptimalResult {
        alpha_star: best_alpha,
        min_cost: best_cost,
        dist: PAlphaDist::new(delta, sensitivity, best_alpha)?,
        method: Method::NumericScan,
    })
}

/// Golden-section search for a local minimum of `f` on `[lo, hi]`; returns
/// the best point evaluated once the bracket is below `tol`.
fn golden_section<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = if f2 < f1 { (x2, f2) } else { (x1, f1) };
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
            if f1 < best.1 || (f1 == best.1 && x1 < best.0) {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    Ok(best)
}
