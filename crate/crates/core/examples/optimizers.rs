//! SPSA and Nelder-Mead on a noisy and a clean quadratic bowl.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use vqeforge::optimize::{minimize, Evaluation, Optimizer, OptimizerConfig};

fn main() -> vqeforge::Result<()> {
    let target = [0.7, -1.2, 0.3, 2.0];
    let bowl = |x: &[f64]| x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    let noise = RefCell::new(ChaCha8Rng::seed_from_u64(3));
    let noisy = |x: &[f64]| Evaluation {
        cost: bowl(x) + 0.05 * (noise.borrow_mut().random::<f64>() - 0.5),
        std_error: 0.05 / 12f64.sqrt(),
    };
    let config = OptimizerConfig {
        max_iterations: 400,
        seed: 11,
        ..Default::default()
    };
    let x0 = [0.0; 4];
    for (name, opt) in [("spsa", Optimizer::Spsa), ("nelder-mead", Optimizer::NelderMead)] {
        let clean = minimize(opt, |x: &[f64]| bowl(x), &x0, &config)?;
        let rough = minimize(opt, noisy, &x0, &config)?;
        println!(
            "{name:>11}: clean best {:.2e} after {} evals; noisy final distance {:.3}",
            clean.best_cost,
            clean.evaluations(),
            bowl(&rough.best_theta).sqrt()
        );
    }
    Ok(())
}
