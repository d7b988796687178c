//! Training time each method needs to reach the generalization error of the
//! exact minimizer, as a function of `n` (order estimates, unit constants).
//!
//! ```text
//! cargo run --release --example sufficient_training
//! ```

use rerm::bounds::{excess_risk_order, sufficient_training, Regime, ORDER_ESTIMATE_LABEL};
use rerm::optim::Algorithm;

fn main() -> rerm::Result<()> {
    let d = 100.0;
    println!("convex, kappa = sqrt(n), d = {d} ({ORDER_ESTIMATE_LABEL})");
    println!("{:>10} {:>14} {:>14} {:>14}", "n", "svrg", "gd", "sgd");
    for n in [16.0, 1e2, 1e3, 1e4, 1e5, 1e6] {
        let t = |a| sufficient_training(a, Regime::Convex, f64::sqrt(n), n, d, None, 1.0).map(|s| s.time_units);
        println!("{n:>10.0e} {:>14.4e} {:>14.4e} {:>14.4e}", t(Algorithm::Svrg)?, t(Algorithm::Gd)?, t(Algorithm::Sgd)?);
    }

    println!("\nnonconvex, epsilon0 = 1/n");
    println!("{:>10} {:>12} {:>12}", "n", "gd/svrg", "sgd/svrg");
    for n in [1e3, 1e6] {
        let t = |a| sufficient_training(a, Regime::Nonconvex, 1.0, n, d, Some(1.0 / n), 1.0).map(|s| s.time_units);
        let svrg = t(Algorithm::Svrg)?;
        println!("{n:>10.0e} {:>12.4e} {:>12.4e}", t(Algorithm::Gd)? / svrg, t(Algorithm::Sgd)? / svrg);
    }

    println!("\nhigh-probability bound order after T iterations (n = 1e4, kappa = 10, delta = 0.05)");
    for t in [1e1, 1e2, 1e3, 1e4, 1e5] {
        println!(
            "T = {t:>7.0e}  gd {:.4e}  sgd {:.4e}",
            excess_risk_order(Algorithm::Gd, 10.0, 1e4, t, 0.05)?,
            excess_risk_order(Algorithm::Sgd, 10.0, 1e4, t, 0.05)?
        );
    }
    Ok(())
}
