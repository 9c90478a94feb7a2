//! Numeric optimum for a cost without a closed form.

use zerodp::{expected_cost_generic, optimal_alpha_generic, optimal_ln, CostSpec, PAlphaDist};

fn main() -> zerodp::Result<()> {
    // errors beyond ~1 hurt about as much as errors of 1
    let saturating = CostSpec::generic("1 - exp(-x^2)", |x: f64| 1.0 - (-x * x).exp());
    let huber = CostSpec::generic("huber(0.5)", |x: f64| {
        let a = x.abs();
        if a <= 0.5 { 0.5 * a * a } else { 0.5 * (a - 0.25) }
    });

    for delta in [0.2, 0.5, 0.8, 0.95] {
        println!("delta = {delta}");
        for cost in [&saturating, &huber] {
            let r = optimal_alpha_generic(delta, 1.0, cost, 256, 1e-8)?;
            let plain = expected_cost_generic(&PAlphaDist::new(delta, 1.0, 0.0)?, cost, 1e-10)?;
            println!(
                "  {:<14} alpha* = {:.6}  cost = {:.6e}  (alpha = 0: {:.6e})",
                cost.name(),
                r.alpha_star,
                r.min_cost,
                plain
            );
        }
        // sanity: the numeric path reproduces the closed form for |x|^2
        let numeric = optimal_alpha_generic(delta, 1.0, &CostSpec::ln(2.0)?, 256, 1e-8)?;
        let closed = optimal_ln(delta, 1.0, 2.0)?;
        println!("  |x|^2 numeric {:.8} vs closed {:.8}", numeric.alpha_star, closed.alpha_star);
    }

    // non-monotone costs are rejected
    let bad = CostSpec::generic("cos", |x: f64| x.cos());
    match optimal_alpha_generic(0.5, 1.0, &bad, 256, 1e-8) {
        Err(e) => println!("rejected: {e}"),
        Ok(r) => println!("unexpectedly accepted: {}", r.alpha_star),
    }
    Ok(())
}
