//! Privacy-leakage audits for additive noise.
//!
//! The quantity audited is the one-sided shift distance
//! `δ̂(d) = sup_S P(S) - P(S + d)` maximized over shifts `0 < d <= Δ`.
//! For symmetric distributions whose mass does not increase away from the
//! origin this equals `P([-d/2, d/2))`, so analytic answers exist for the
//! uniform-with-atom family and for the Gaussian. For anything else the
//! empirical estimator works on a histogram of samples: it restricts `S` to
//! unions of bins and `d` to a finite grid, so it reports a lower bound on
//! the true supremum up to sampling noise.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::dist::{Draw, PAlphaDist};
use crate::error::{check_sensitivity, DomainError};
use crate::fmt::fmt_num;
use crate::normal;

/// Default bin count for [`empirical_delta`].
pub const DEFAULT_BINS: usize = 500;
/// Default number of shifts on `(0, Δ]`.
pub const DEFAULT_SHIFT_GRID: usize = 64;

const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditMethod {
    AnalyticPAlpha,
    AnalyticGaussian,
    EmpiricalHistogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Estimated worst-case additive privacy distance, in `[0, 1]`.
    pub delta_hat: f64,
    /// Shift at which `delta_hat` was attained.
    pub worst_shift: f64,
    pub method: AuditMethod,
    /// Number of samples behind the estimate; zero for analytic audits.
    pub sample_count: usize,
}

/// Uniformly binned probability masses with an explicit atom at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    lo: f64,
    hi: f64,
    bin_width: f64,
    masses: Vec<f64>,
    atom_at_zero: f64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, masses: Vec<f64>, atom_at_zero: f64) -> Result<Self, DomainError> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(DomainError::invalid(format!("histogram range must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        if masses.is_empty() {
            return Err(DomainError::invalid("histogram needs at least one bin"));
        }
        if masses.iter().chain([&atom_at_zero]).any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(DomainError::invalid("histogram masses must be finite and nonnegative"));
        }
        let total = masses.iter().sum::<f64>() + atom_at_zero;
        if (total - 1.0).abs() > MASS_TOL {
            return Err(DomainError::invalid(format!("histogram masses sum to {total}, expected 1")));
        }
        if atom_at_zero > 0.0 && !(lo <= 0.0 && 0.0 < hi) {
            return Err(DomainError::invalid("histogram range must contain the origin when an atom is present"));
        }
        let bin_width = (hi - lo) / masses.len() as f64;
        Ok(Histogram { lo, hi, bin_width, masses, atom_at_zero })
    }

    /// Bins `samples` into `bins` equal bins over `[lo, hi]`. Samples exactly
    /// equal to zero are counted in the origin atom.
    pub fn from_samples(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self, DomainError> {
        Self::from_tagged(samples.iter().map(|&x| (x, x == 0.0)), samples.len(), lo, hi, bins)
    }

    /// Like [`Histogram::from_samples`], with atom membership taken from the
    /// sampler's branch rather than from the value.
    pub fn from_draws(draws: &[Draw], lo: f64, hi: f64, bins: usize) -> Result<Self, DomainError> {
        Self::from_tagged(draws.iter().map(|d| (d.value(), d.is_atom())), draws.len(), lo, hi, bins)
    }

    fn from_tagged<I>(items: I, count: usize, lo: f64, hi: f64, bins: usize) -> Result<Self, DomainError>
    where
        I: Iterator<Item = (f64, bool)>,
    {
        if count == 0 {
            return Err(DomainError::invalid("no samples"));
        }
        if bins == 0 || !(lo < hi) {
            return Err(DomainError::invalid(format!("invalid binning: {bins} bins over [{lo}, {hi}]")));
        }
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0u64; bins];
        let mut atoms = 0u64;
        for (x, is_atom) in items {
            if is_atom {
                atoms += 1;
                continue;
            }
            if !(x >= lo && x <= hi) {
                return Err(DomainError::invalid(format!("sample {x} outside histogram range [{lo}, {hi}]")));
            }
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        let n = count as f64;
        let masses = counts.into_iter().map(|c| c as f64 / n).collect();
        Self::new(lo, hi, masses, atoms as f64 / n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atom_at_zero
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    /// Index of the half-open bin `[lo + i w, lo + (i+1) w)` holding `x`;
    /// `hi` itself belongs to the last bin.
    pub fn bin_index(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        Some((((x - self.lo) / self.bin_width) as usize).min(self.bins() - 1))
    }

    /// Per-bin masses with the atom folded into the bin containing zero.
    pub fn combined_masses(&self) -> Vec<f64> {
        let mut p = self.masses.clone();
        if self.atom_at_zero > 0.0 {
            if let Some(z) = self.bin_index(0.0) {
                p[z] += self.atom_at_zero;
            }
        }
        p
    }

    /// `Σ_i max(0, p_i - p_{i+k})`: the largest `P(S) - P(S + k w)` over
    /// unions of bins `S`. Bins beyond the range carry no mass.
    pub fn shift_distance(&self, k: usize) -> f64 {
        shift_distance(&self.combined_masses(), k)
    }

    /// `(d, δ̂(d))` for `shift_grid` shifts equally spaced on
    /// `(0, sensitivity]`, each snapped to a whole number of bins (at least
    /// one, since a zero-bin shift compares the histogram with itself).
    pub fn shift_profile(&self, sensitivity: f64, shift_grid: usize) -> Result<Vec<(f64, f64)>, DomainError> {
        check_sensitivity(sensitivity)?;
        if shift_grid == 0 {
            return Err(DomainError::invalid("shift grid must be nonempty"));
        }
        let p = self.combined_masses();
        let mut cache: Vec<Option<f64>> = Vec::new();
        Ok((1..=shift_grid)
            .map(|j| {
                let d = sensitivity * j as f64 / shift_grid as f64;
                let k = ((d / self.bin_width).round() as usize).max(1);
                if cache.len() <= k {
                    cache.resize(k + 1, None);
                }
                (d, *cache[k].get_or_insert_with(|| shift_distance(&p, k)))
            })
            .collect())
    }

    /// Maximum of [`Histogram::shift_profile`]. Ties go to the larger shift.
    pub fn audit(&self, sensitivity: f64, shift_grid: usize, sample_count: usize) -> Result<AuditReport, DomainError> {
        let mut best = (0.0f64, 0.0f64);
        for (d, value) in self.shift_profile(sensitivity, shift_grid)? {
            if value >= best.1 {
                best = (d, value);
            }
        }
        Ok(AuditReport {
            delta_hat: best.1.clamp(0.0, 1.0),
            worst_shift: best.0,
            method: AuditMethod::EmpiricalHistogram,
            sample_count,
        })
    }

    /// Averages each bin with its mirror image about the origin. The atom is
    /// left in place and total mass is preserved.
    pub fn symmetrize(&self) -> Result<Histogram, DomainError> {
        let scale = self.lo.abs().max(self.hi.abs());
        if (self.lo + self.hi).abs() > 1e-12 * scale {
            return Err(DomainError::invalid(format!(
                "symmetrization needs a range symmetric about the origin, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        let m = &self.masses;
        let n = m.len();
        let masses = (0..n).map(|i| 0.5 * (m[i] + m[n - 1 - i])).collect();
        Ok(Histogram { masses, ..self.clone() })
    }

    /// Writes `bin_lo,bin_hi,mass` rows followed by a single `atom,0,mass` row.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["bin_lo", "bin_hi", "mass"])?;
        for (i, m) in self.masses.iter().enumerate() {
            let a = self.lo + self.bin_width * i as f64;
            let b = if i + 1 == self.bins() { self.hi } else { a + self.bin_width };
            out.write_record([fmt_num(a), fmt_num(b), fmt_num(*m)])?;
        }
        out.write_record(["atom".to_string(), "0".to_string(), fmt_num(self.atom_at_zero)])?;
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Histogram, DomainError> {
        let mut reader = csv::Reader::from_reader(r);
        let headers = reader.headers().map_err(|e| DomainError::invalid(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["bin_lo", "bin_hi", "mass"] {
            return Err(DomainError::invalid("histogram CSV header must be bin_lo,bin_hi,mass"));
        }
        let mut edges = Vec::new();
        let mut masses = Vec::new();
        let mut atom = None;
        for (row, rec) in reader.records().enumerate() {
            let line = row + 2;
            let rec = rec.map_err(|e| DomainError::invalid(format!("line {line}: {e}")))?;
            let num = |i: usize| -> Result<f64, DomainError> {
                rec.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| DomainError::invalid(format!("line {line}: bad number in column {}", i + 1)))
            };
            if rec.get(0).map(str::trim) == Some("atom") {
                if atom.replace(num(2)?).is_some() {
                    return Err(DomainError::invalid(format!("line {line}: duplicate atom row")));
                }
            } else {
                edges.push((num(0)?, num(1)?));
                masses.push(num(2)?);
            }
        }
        let (Some(first), Some(last)) = (edges.first(), edges.last()) else {
            return Err(DomainError::invalid("histogram CSV has no bins"));
        };
        let (lo, hi) = (first.0, last.1);
        let width = (hi - lo) / edges.len() as f64;
        for (i, (a, b)) in edges.iter().enumerate() {
            let expect = lo + width * i as f64;
            if (a - expect).abs() > 1e-9 * width.max(expect.abs()) || ((b - a) - width).abs() > 1e-9 * width.max(b.abs()) {
                return Err(DomainError::invalid(format!("line {}: bins are not uniform and contiguous", i + 2)));
            }
        }
        Histogram::new(lo, hi, masses, atom.unwrap_or(0.0))
    }
}

fn shift_distance(p: &[f64], k: usize) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &pi)| (pi - p.get(i + k).copied().unwrap_or(0.0)).max(0.0))
        .sum()
}

/// Exact leakage of a uniform-with-atom distribution: the mass of
/// `[-Δ/2, Δ/2]`, attained at shift `Δ`.
pub fn analytic_delta_palpha(d: &PAlphaDist) -> AuditReport {
    let half = d.sensitivity() / 2.0;
    let delta_hat = d.interval_prob(-half, half).unwrap_or(1.0);
    AuditReport {
        delta_hat: delta_hat.clamp(0.0, 1.0),
        worst_shift: d.sensitivity(),
        method: AuditMethod::AnalyticPAlpha,
        sample_count: 0,
    }
}

/// Exact leakage of `Normal(0, sigma^2)` noise: `2Φ(Δ/(2σ)) - 1`.
pub fn analytic_delta_gaussian(sigma: f64, sensitivity: f64) -> Result<AuditReport, DomainError> {
    if !(sigma > 0.0) {
        return Err(DomainError::invalid(format!("sigma must be positive, got {sigma}")));
    }
    check_sensitivity(sensitivity)?;
    Ok(AuditReport {
        delta_hat: normal::central_mass(sensitivity / (2.0 * sigma)).clamp(0.0, 1.0),
        worst_shift: sensitivity,
        method: AuditMethod::AnalyticGaussian,
        sample_count: 0,
    })
}

/// Smallest odd bin count `>= bins`, so that a range symmetric about the
/// origin has a bin centred on it.
fn odd_bins(bins: usize) -> usize {
    bins | 1
}

/// Histogram used by [`empirical_delta`]: symmetric range
/// `[-(max|x| + Δ), max|x| + Δ]` with an odd bin count.
pub fn audit_histogram(samples: &[f64], sensitivity: f64, bins: usize) -> Result<Histogram, DomainError> {
    let reach = audit_reach(samples.iter().copied(), sensitivity)?;
    Histogram::from_samples(samples, -reach, reach, odd_bins(bins))
}

fn audit_reach<I: Iterator<Item = f64>>(values: I, sensitivity: f64) -> Result<f64, DomainError> {
    check_sensitivity(sensitivity)?;
    let mut support = 0.0f64;
    for x in values {
        if !x.is_finite() {
            return Err(DomainError::invalid(format!("non-finite sample {x}")));
        }
        support = support.max(x.abs());
    }
    Ok(support + sensitivity)
}

fn check_audit_params(len: usize, bins: usize, shift_grid: usize) -> Result<(), DomainError> {
    if len == 0 {
        return Err(DomainError::invalid("samples must be nonempty"));
    }
    if bins < 100 {
        return Err(DomainError::invalid(format!("bins must be >= 100, got {bins}")));
    }
    if shift_grid < 10 {
        return Err(DomainError::invalid(format!("shift grid must be >= 10, got {shift_grid}")));
    }
    Ok(())
}

/// Histogram estimate of the worst shift distance of the law behind
/// `samples`. Exactly-zero samples form the origin atom.
///
/// An even `bins` is rounded up to the next odd count.
pub fn empirical_delta(samples: &[f64], sensitivity: f64, bins: usize, shift_grid: usize) -> Result<AuditReport, DomainError> {
    check_audit_params(samples.len(), bins, shift_grid)?;
    let h = audit_histogram(samples, sensitivity, bins)?;
    h.audit(sensitivity, shift_grid, samples.len())
}

/// [`empirical_delta`] for tagged draws of the uniform-with-atom sampler.
pub fn empirical_delta_draws(draws: &[Draw], sensitivity: f64, bins: usize, shift_grid: usize) -> Result<AuditReport, DomainError> {
    check_audit_params(draws.len(), bins, shift_grid)?;
    let reach = audit_reach(draws.iter().map(|d| d.value()), sensitivity)?;
    let h = Histogram::from_draws(draws, -reach, reach, odd_bins(bins))?;
    h.audit(sensitivity, shift_grid, draws.len())
}

/// `true` iff `d` meets `(0, target_delta)`-DP, i.e. the mass of
/// `[-Δ/2, Δ/2]` is at most the target.
pub fn check_dp(d: &PAlphaDist, target_delta: f64) -> bool {
    analytic_delta_palpha(d).delta_hat <= target_delta + 1e-12
}

pub fn symmetrize(h: &Histogram) -> Result<Histogram, DomainError> {
    h.symmetrize()
}
