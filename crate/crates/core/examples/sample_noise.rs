//! Draw noise from the optimal mechanism and privatize a query answer.

use zerodp::{optimal_ln, seeded_rng, Draw};

fn main() -> Result<(), zerodp::DomainError> {
    // counting query: sensitivity 1, mean-squared error objective
    let true_count = 1234.0;
    let best = optimal_ln(0.9, 1.0, 2.0)?;
    println!("mechanism: {}", best.dist);

    let mut rng = seeded_rng(42, 0);
    for _ in 0..5 {
        println!("released: {:.4}", true_count + best.dist.sample(&mut rng));
    }

    // tagged draws tell the atom apart from the continuous part
    let n = 100_000;
    let draws: Vec<Draw> = (0..n).map(|_| best.dist.sample_tagged(&mut rng)).collect();
    let atoms = draws.iter().filter(|d| d.is_atom()).count();
    let mse = draws.iter().map(|d| d.value().powi(2)).sum::<f64>() / n as f64;
    println!("atom fraction {:.4} (alpha* = {})", atoms as f64 / n as f64, best.alpha_star);
    println!("empirical MSE {mse:.5} (optimal {:.5})", best.min_cost);

    // independent streams for parallel workers
    let worker_a = best.dist.sample_n(&mut seeded_rng(42, 1), 3);
    let worker_b = best.dist.sample_n(&mut seeded_rng(42, 2), 3);
    println!("stream 1: {worker_a:?}\nstream 2: {worker_b:?}");
    Ok(())
}
