//! Adaptive Simpson quadrature on a bounded interval.

use crate::error::{Error, Result};

/// Maximum number of accepted subintervals before giving up.
pub const MAX_SUBINTERVALS: usize = 1 << 20;

/// Panels the interval is split into before adaptation starts, so that a
/// single coarse Simpson estimate cannot accept a badly resolved integrand.
const INITIAL_PANELS: usize = 8;

/// Relative floor on the local tolerance; below it the Simpson difference is
/// rounding noise and further splitting cannot help.
const ROUNDOFF: f64 = 4.0 * f64::EPSILON;

struct Segment {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to an absolute error of roughly `tol`.
///
/// Each subinterval is accepted once the two-half Simpson estimate agrees
/// with the whole-interval estimate to `15 * tol_local`, and the Richardson
/// correction is added. The local tolerance is halved at each split.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_budget(f, a, b, tol, MAX_SUBINTERVALS)
}

pub fn integrate_with_budget<F>(f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let mut stack = Vec::with_capacity(64);
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut left = a;
    let mut f_left = f(a);
    for i in 0..INITIAL_PANELS {
        let right = if i + 1 == INITIAL_PANELS { b } else { a + h * (i + 1) as f64 };
        let mid = 0.5 * (left + right);
        let (fm, fr) = (f(mid), f(right));
        stack.push(Segment {
            a: left,
            b: right,
            fa: f_left,
            fm,
            fb: fr,
            whole: simpson(left, right, f_left, fm, fr),
            tol: tol / INITIAL_PANELS as f64,
        });
        left = right;
        f_left = fr;
    }

    let mut total = 0.0;
    let mut accepted = 0usize;
    let mut estimate = stack.iter().map(|s| s.whole).sum::<f64>();
    while let Some(seg) = stack.pop() {
        let m = 0.5 * (seg.a + seg.b);
        let lm = 0.5 * (seg.a + m);
        let rm = 0.5 * (m + seg.b);
        let (flm, frm) = (f(lm), f(rm));
        let lhs = simpson(seg.a, m, seg.fa, flm, seg.fm);
        let rhs = simpson(m, seg.b, seg.fm, frm, seg.fb);
        let diff = lhs + rhs - seg.whole;
        estimate += diff;
        // stop splitting once the midpoints no longer separate
        let unsplittable = !(seg.a < lm && lm < m && m < rm && rm < seg.b);
        let local_tol = seg.tol.max(ROUNDOFF * (lhs.abs() + rhs.abs()));
        if diff.abs() <= 15.0 * local_tol || unsplittable {
            if unsplittable && diff.abs() > 15.0 * local_tol {
                return Err(Error::Quadrature { tol, budget, estimate });
            }
            total += lhs + rhs + diff / 15.0;
            accepted += 1;
            continue;
        }
        if accepted + stack.len() + 2 > budget {
            return Err(Error::Quadrature { tol, budget, estimate });
        }
        let half = 0.5 * seg.tol;
        stack.push(Segment { a: m, b: seg.b, fa: seg.fm, fm: frm, fb: seg.fb, whole: rhs, tol: half });
        stack.push(Segment { a: seg.a, b: m, fa: seg.fa, fm: flm, fb: seg.fm, whole: lhs, tol: half });
    }
    if !total.is_finite() {
        return Err(Error::Quadrature { tol, budget, estimate: total });
    }
    Ok(total)
}
