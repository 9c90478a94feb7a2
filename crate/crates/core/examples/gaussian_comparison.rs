//! Cost of the optimal mechanism relative to a calibrated Gaussian.

use zerodp::{calibrate_gaussian, compare, Convention, CurveTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [1.0, 2.0] {
        println!("n = {n}");
        println!("  {:>6} {:>12} {:>12} {:>8}", "delta", "gaussian", "optimal", "ratio");
        for delta in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let c = compare(delta, 1.0, n, Convention::PaperSigma)?;
            println!("  {delta:>6} {:>12.6} {:>12.6} {:>8.4}", c.gaussian_cost, c.optimal_cost, c.ratio);
        }
    }

    // the same sigma measured with the true Gaussian moment
    let g = calibrate_gaussian(0.25, 1.0)?;
    println!(
        "sigma = {}: E|X| = {:.6}, sigma^1 = {:.6}",
        g.sigma(),
        g.cost(1.0, Convention::ExactMoment)?,
        g.cost(1.0, Convention::PaperSigma)?
    );

    let table = CurveTable::build(2.0, 1.0, 0.05, 0.95, 0.05, Convention::PaperSigma)?;
    let mut out = Vec::new();
    table.write_csv(&mut out)?;
    print!("{}", String::from_utf8(out)?);
    Ok(())
}
