//! Estimate the leakage of black-box samplers from their output alone.

use zerodp::audit::{audit_histogram, DEFAULT_BINS, DEFAULT_SHIFT_GRID};
use zerodp::{
    analytic_delta_gaussian, analytic_delta_palpha, empirical_delta, seeded_rng, symmetrize, GaussianBaseline,
    PAlphaDist,
};

fn main() -> Result<(), zerodp::DomainError> {
    let sensitivity = 1.0;
    let n = 1_000_000;
    let mut rng = seeded_rng(11, 0);

    let d = PAlphaDist::new(0.6, sensitivity, 0.3)?;
    let xs = d.sample_n(&mut rng, n);
    let r = empirical_delta(&xs, sensitivity, DEFAULT_BINS, DEFAULT_SHIFT_GRID)?;
    println!("P_alpha: empirical {:.4} at shift {:.4}, exact {:.4}", r.delta_hat, r.worst_shift, analytic_delta_palpha(&d).delta_hat);

    let g = GaussianBaseline::with_sigma(2.0, sensitivity)?;
    let xs = g.sample_n(&mut rng, n);
    let r = empirical_delta(&xs, sensitivity, DEFAULT_BINS, DEFAULT_SHIFT_GRID)?;
    let exact = analytic_delta_gaussian(2.0, sensitivity)?;
    println!("Gaussian: empirical {:.4}, exact {:.4}", r.delta_hat, exact.delta_hat);

    // a lopsided sampler: symmetrizing it can only lower the leakage
    let skewed: Vec<f64> = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            if u < 0.7 { 1.5 * u - 0.3 } else { -1.2 * (u - 0.7) }
        })
        .collect();
    let h = audit_histogram(&skewed, sensitivity, DEFAULT_BINS)?;
    let before = h.audit(sensitivity, DEFAULT_SHIFT_GRID, n)?;
    let after = symmetrize(&h)?.audit(sensitivity, DEFAULT_SHIFT_GRID, n)?;
    println!("skewed: {:.4} -> {:.4} after symmetrizing", before.delta_hat, after.delta_hat);

    let mut csv = Vec::new();
    h.write_csv(&mut csv).expect("in-memory write");
    println!("histogram CSV: {} rows", String::from_utf8_lossy(&csv).lines().count() - 1);
    Ok(())
}
