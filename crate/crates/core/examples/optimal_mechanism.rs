//! Optimal atom and cost for `|x|^n` across privacy levels.

use zerodp::optimal::onset_delta;
use zerodp::{optimal_ln, Method};

fn main() -> Result<(), zerodp::DomainError> {
    let sensitivity = 1.0;
    for n in [1.0, 2.0, 3.0] {
        println!("n = {n}: atom appears once delta > {:.4}", onset_delta(n));
        println!("  {:>6} {:>10} {:>10} {:>12}", "delta", "alpha*", "W", "min cost");
        for delta in [0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
            let r = optimal_ln(delta, sensitivity, n)?;
            assert_eq!(r.method, Method::ClosedForm);
            println!(
                "  {delta:>6} {:>10.6} {:>10.6} {:>12.6e}",
                r.alpha_star,
                r.dist.half_width(),
                r.min_cost
            );
        }
    }
    Ok(())
}
