//! Gaussian baseline calibrated to `sigma = sensitivity / (2 delta)`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_delta, check_exponent, check_sensitivity, DomainError};

/// How the `|x|^n` cost of the Gaussian baseline is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `sigma^n`: the calibration parameter taken as the noise amplitude.
    #[default]
    #[value(name = "sigma")]
    PaperSigma,
    /// The true absolute moment `E|X|^n` of `Normal(0, sigma^2)`.
    #[value(name = "exact")]
    ExactMoment,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianBaseline {
    sigma: f64,
    sensitivity: f64,
    /// Target delta when built by [`calibrate_gaussian`].
    delta: Option<f64>,
}

/// `sigma = sensitivity / (2 delta)`.
pub fn calibrate_gaussian(delta: f64, sensitivity: f64) -> Result<GaussianBaseline, DomainError> {
    check_delta(delta)?;
    check_sensitivity(sensitivity)?;
    Ok(GaussianBaseline { sigma: sensitivity / (2.0 * delta), sensitivity, delta: Some(delta) })
}

impl GaussianBaseline {
    /// A baseline with an explicit `sigma`, not tied to a target delta.
    pub fn with_sigma(sigma: f64, sensitivity: f64) -> Result<Self, DomainError> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(DomainError::invalid(format!("sigma must be positive and finite, got {sigma}")));
        }
        check_sensitivity(sensitivity)?;
        Ok(GaussianBaseline { sigma, sensitivity, delta: None })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Expected `|x|^n` cost under `convention`.
    ///
    /// `ExactMoment` is only available where the moment has a closed form:
    /// `n = 1` and even integers `n`.
    pub fn cost(&self, n: f64, convention: Convention) -> Result<f64, DomainError> {
        check_exponent(n)?;
        let s = self.sigma;
        match convention {
            Convention::PaperSigma => Ok(s.powf(n)),
            Convention::ExactMoment if n == 1.0 => Ok(s * (2.0 / PI).sqrt()),
            Convention::ExactMoment if n.fract() == 0.0 && n % 2.0 == 0.0 => {
                // (n-1)!! for even n
                let k = n as u64;
                let double_factorial = (1..k).step_by(2).fold(1.0, |acc, j| acc * j as f64);
                Ok(s.powf(n) * double_factorial)
            }
            Convention::ExactMoment => Err(DomainError::invalid(format!(
                "exact Gaussian moment is only available for n = 1 or even integer n, got {n}"
            ))),
        }
    }

    /// One `Normal(0, sigma^2)` draw via Box–Muller (cosine branch only).
    /// Consumes exactly two uniforms per call.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u1 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random();
        self.sigma * (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

pub fn gaussian_cost(g: &GaussianBaseline, n: f64, convention: Convention) -> Result<f64, DomainError> {
    g.cost(n, convention)
}

pub fn sample_gaussian<R: Rng + ?Sized>(g: &GaussianBaseline, rng: &mut R) -> f64 {
    g.sample(rng)
}
