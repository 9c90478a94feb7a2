//! The uniform-with-atom noise family.
//!
//! A [`PAlphaDist`] places probability `alpha` on the origin and spreads the
//! remaining `1 - alpha` uniformly over `[-W, W]` with
//! `W = (1 - alpha) / (delta - alpha) * sensitivity / 2` and density
//! `(delta - alpha) / sensitivity`. For every `alpha` in `[0, delta)` the
//! interval `[-sensitivity/2, sensitivity/2]` carries exactly `delta`, which
//! is what makes the mechanism `(0, delta)`-differentially private.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_delta, check_exponent, check_sensitivity, DomainError, Error, Result};
use crate::quad;

/// Default absolute tolerance for [`expected_cost_generic`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// Number of points (per sign) used to spot-check a generic cost.
const VALIDATION_POINTS_PER_SIDE: usize = 32;

/// Serialized form: derived fields are recomputed on load.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PAlphaParams {
    delta: f64,
    sensitivity: f64,
    alpha: f64,
}

/// Uniform noise with a probability atom at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PAlphaParams", into = "PAlphaParams")]
pub struct PAlphaDist {
    delta: f64,
    sensitivity: f64,
    alpha: f64,
    half_width: f64,
    density: f64,
}

impl TryFrom<PAlphaParams> for PAlphaDist {
    type Error = DomainError;

    fn try_from(p: PAlphaParams) -> Result<Self, DomainError> {
        PAlphaDist::new(p.delta, p.sensitivity, p.alpha)
    }
}

impl From<PAlphaDist> for PAlphaParams {
    fn from(d: PAlphaDist) -> Self {
        PAlphaParams { delta: d.delta, sensitivity: d.sensitivity, alpha: d.alpha }
    }
}

/// One draw of the sampler, tagged with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Draw {
    /// The Bernoulli branch selected the atom; the value is exactly zero.
    Atom,
    Continuous(f64),
}

impl Draw {
    pub fn value(self) -> f64 {
        match self {
            Draw::Atom => 0.0,
            Draw::Continuous(x) => x,
        }
    }

    pub fn is_atom(self) -> bool {
        matches!(self, Draw::Atom)
    }
}

impl PAlphaDist {
    pub fn new(delta: f64, sensitivity: f64, alpha: f64) -> Result<Self, DomainError> {
        check_delta(delta)?;
        check_sensitivity(sensitivity)?;
        if !(alpha >= 0.0 && alpha < delta) {
            return Err(DomainError::AlphaOutOfRange { alpha, delta });
        }
        let gap = delta - alpha;
        Ok(PAlphaDist {
            delta,
            sensitivity,
            alpha,
            half_width: (1.0 - alpha) / gap * (sensitivity / 2.0),
            density: gap / sensitivity,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    /// Probability mass of the atom at the origin.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Half-width `W` of the uniform support `[-W, W]`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Density of the continuous part on `[-W, W]`.
    pub fn density(&self) -> f64 {
        self.density
    }

    /// Density of the continuous part; the atom is not included.
    pub fn pdf(&self, x: f64) -> f64 {
        if x.abs() <= self.half_width {
            self.density
        } else {
            0.0
        }
    }

    /// Right-continuous CDF, with a jump of `alpha` at zero.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < -self.half_width {
            0.0
        } else if x >= self.half_width {
            1.0
        } else {
            let continuous = self.density * (x + self.half_width);
            if x >= 0.0 {
                continuous + self.alpha
            } else {
                continuous
            }
        }
    }

    /// Probability of the closed interval `[a, b]`.
    pub fn interval_prob(&self, a: f64, b: f64) -> Result<f64, DomainError> {
        if !(a <= b) {
            return Err(DomainError::invalid(format!("interval bounds out of order: [{a}, {b}]")));
        }
        let lo = a.max(-self.half_width);
        let hi = b.min(self.half_width);
        let continuous = if hi > lo { self.density * (hi - lo) } else { 0.0 };
        let atom = if a <= 0.0 && 0.0 <= b { self.alpha } else { 0.0 };
        Ok((continuous + atom).min(1.0))
    }

    /// Draws `B * U` with `Pr[B = 0] = alpha` and `U ~ Uniform[-W, W]`.
    ///
    /// Both variates are always drawn, so every sample advances the stream
    /// by the same amount regardless of the branch taken.
    pub fn sample_tagged<R: Rng + ?Sized>(&self, rng: &mut R) -> Draw {
        let b: f64 = rng.random();
        let u: f64 = rng.random();
        if b < self.alpha {
            Draw::Atom
        } else {
            Draw::Continuous(self.half_width * (2.0 * u - 1.0))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_tagged(rng).value()
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.sample(rng)).collect()
    }

    /// Closed-form `E|X|^n`.
    pub fn expected_cost_ln(&self, n: f64) -> Result<f64, DomainError> {
        check_exponent(n)?;
        let scale = self.sensitivity.powf(n) / ((n + 1.0) * 2f64.powf(n));
        Ok(scale * (1.0 - self.alpha).powf(n + 1.0) / (self.delta - self.alpha).powf(n))
    }
}

impl fmt::Display for PAlphaDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P_alpha(delta={}, sensitivity={}, alpha={}; support=[-{w}, {w}], density={})",
            self.delta,
            self.sensitivity,
            self.alpha,
            self.density,
            w = self.half_width
        )
    }
}

/// `E|X|^n` of `d`; see [`PAlphaDist::expected_cost_ln`].
pub fn expected_cost_ln(d: &PAlphaDist, n: f64) -> Result<f64, DomainError> {
    d.expected_cost_ln(n)
}

/// A cost on the noise value: symmetric, and nondecreasing in `|x|`.
#[derive(Clone)]
pub enum CostSpec {
    /// `|x|^n` with `n >= 1`.
    LnMoment(f64),
    Generic(GenericCost),
}

/// Caller-supplied cost function.
#[derive(Clone)]
pub struct GenericCost {
    name: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl GenericCost {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostSpec::LnMoment(n) => write!(f, "LnMoment({n})"),
            CostSpec::Generic(g) => write!(f, "Generic({})", g.name),
        }
    }
}

impl CostSpec {
    pub fn ln(n: f64) -> Result<Self, DomainError> {
        check_exponent(n)?;
        Ok(CostSpec::LnMoment(n))
    }

    /// Wraps a caller-supplied cost. The function is spot-checked against the
    /// symmetry and monotonicity requirements whenever it is evaluated against
    /// a concrete support (see [`CostSpec::validate_on`]).
    pub fn generic<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CostSpec::Generic(GenericCost { name: name.into(), eval: Arc::new(eval) })
    }

    /// Like [`CostSpec::generic`], validated immediately on `[-extent, extent]`.
    pub fn generic_checked<F>(name: impl Into<String>, eval: F, extent: f64) -> Result<Self, DomainError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let cost = Self::generic(name, eval);
        cost.validate_on(extent)?;
        Ok(cost)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CostSpec::LnMoment(n) => x.abs().powf(*n),
            CostSpec::Generic(g) => (g.eval)(x),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CostSpec::LnMoment(n) => format!("|x|^{n}"),
            CostSpec::Generic(g) => g.name.clone(),
        }
    }

    /// The exponent when this is an `|x|^n` cost.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            CostSpec::LnMoment(n) => Some(*n),
            CostSpec::Generic(_) => None,
        }
    }

    /// Checks symmetry, monotonicity on `[0, extent]` and nonnegativity on a
    /// 64-point grid symmetric about the origin.
    pub fn validate_on(&self, extent: f64) -> Result<(), DomainError> {
        let n = match self {
            CostSpec::LnMoment(n) => return check_exponent(*n),
            CostSpec::Generic(_) => VALIDATION_POINTS_PER_SIDE,
        };
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(DomainError::invalid(format!("validation extent must be positive, got {extent}")));
        }
        let at_zero = self.eval(0.0);
        if !(at_zero.is_finite() && at_zero >= 0.0) {
            return Err(DomainError::CostProperty { x: 0.0, reason: "cost must be finite and nonnegative" });
        }
        let mut prev = at_zero;
        for j in 1..=n {
            let x = extent * j as f64 / n as f64;
            let (pos, neg) = (self.eval(x), self.eval(-x));
            if !(pos.is_finite() && pos >= 0.0 && neg.is_finite() && neg >= 0.0) {
                return Err(DomainError::CostProperty { x, reason: "cost must be finite and nonnegative" });
            }
            let slack = 1e-12 * pos.abs().max(1.0);
            if (pos - neg).abs() > slack {
                return Err(DomainError::CostProperty { x, reason: "cost is not symmetric" });
            }
            if pos < prev - slack {
                return Err(DomainError::CostProperty { x, reason: "cost decreases away from the origin" });
            }
            prev = pos;
        }
        Ok(())
    }
}

/// `alpha * cost(0) + 2 * density * ∫_0^W cost(x) dx` by adaptive quadrature.
///
/// `quad_tol` bounds the absolute error of the returned expectation.
pub fn expected_cost_generic(d: &PAlphaDist, cost: &CostSpec, quad_tol: f64) -> Result<f64> {
    if !(quad_tol > 0.0) {
        return Err(DomainError::invalid(format!("quadrature tolerance must be positive, got {quad_tol}")).into());
    }
    cost.validate_on(d.half_width)?;
    let weight = 2.0 * d.density;
    let integral = quad::integrate(|x| cost.eval(x), 0.0, d.half_width, quad_tol / weight)?;
    let value = d.alpha * cost.eval(0.0) + weight * integral;
    if !value.is_finite() {
        return Err(Error::Quadrature { tol: quad_tol, budget: quad::MAX_SUBINTERVALS, estimate: value });
    }
    Ok(value.max(0.0))
}
