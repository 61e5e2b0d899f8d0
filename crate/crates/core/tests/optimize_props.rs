use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::cell::RefCell;
use vqeforge::optimize::{minimize, nelder_mead_minimize, spsa_minimize, EvalKind, Optimizer, OptimizerConfig};

fn bowl(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn config(iters: usize, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        max_iterations: iters,
        seed,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spsa_perturbs_all_coordinates_at_once(dim in 1usize..8, iters in 1usize..60, seed in any::<u64>()) {
        let x0 = vec![0.5; dim];
        let trace = spsa_minimize(bowl, &x0, &config(iters, seed)).unwrap();
        let plus: Vec<_> = trace.points.iter().filter(|p| p.kind == EvalKind::Plus).collect();
        let minus: Vec<_> = trace.points.iter().filter(|p| p.kind == EvalKind::Minus).collect();
        prop_assert_eq!(plus.len(), iters);
        prop_assert_eq!(minus.len(), iters);
        for (p, m) in plus.iter().zip(&minus) {
            prop_assert_eq!(p.iteration, m.iteration);
            let half: Vec<f64> = p.theta.iter().zip(&m.theta).map(|(a, b)| (a - b) / 2.0).collect();
            let ck = half[0].abs();
            prop_assert!(ck > 0.0);
            for h in &half {
                prop_assert!((h.abs() - ck).abs() < 1e-12 * ck.max(1.0));
            }
        }
        let other = trace.points.len() - 2 * iters;
        prop_assert!(other <= 6, "{} extra evaluations", other);
    }

    #[test]
    fn optimizers_are_deterministic(seed in any::<u64>(), nm in any::<bool>()) {
        let opt = if nm { Optimizer::NelderMead } else { Optimizer::Spsa };
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + x[0].sin();
        let a = minimize(opt, f, &[0.2, 0.3], &config(50, seed)).unwrap();
        let b = minimize(opt, f, &[0.2, 0.3], &config(50, seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn best_cost_never_increases(seed in any::<u64>(), nm in any::<bool>()) {
        let opt = if nm { Optimizer::NelderMead } else { Optimizer::Spsa };
        let f = |x: &[f64]| (x[0] * 2.0).cos() + 0.1 * x[1] * x[1] + x[2].abs();
        let trace = minimize(opt, f, &[1.0, -2.0, 0.5], &config(80, seed)).unwrap();
        for w in trace.points.windows(2) {
            prop_assert!(w[1].best_so_far <= w[0].best_so_far);
        }
        let min = trace.points.iter().map(|p| p.cost).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(trace.best_cost, min);
    }
}

#[test]
fn spsa_on_clean_quadratic() {
    let trace = spsa_minimize(bowl, &[1.0, 1.0], &config(200, 0)).unwrap();
    assert!(trace.best_cost < 1e-2, "{}", trace.best_cost);
}

#[test]
fn spsa_on_noisy_quadratic_median_over_seeds() {
    let normal = Normal::new(0.0, 0.05).unwrap();
    let mut finals: Vec<f64> = (0..10u64)
        .map(|seed| {
            let rng = RefCell::new(ChaCha8Rng::seed_from_u64(1000 + seed));
            let f = |x: &[f64]| bowl(x) + normal.sample(&mut *rng.borrow_mut());
            let trace = spsa_minimize(f, &[1.0, 1.0], &config(200, seed)).unwrap();
            bowl(&trace.best_theta)
        })
        .collect();
    finals.sort_by(f64::total_cmp);
    let median = (finals[4] + finals[5]) / 2.0;
    assert!(median < 0.1, "median true cost {median}");
}

#[test]
fn nelder_mead_benchmarks() {
    let t = nelder_mead_minimize(|x: &[f64]| (x[0] - 3.0).powi(2), &[0.0], &config(500, 0)).unwrap();
    assert!((t.best_theta[0] - 3.0).abs() < 1e-4);
    let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
    let t = nelder_mead_minimize(rosen, &[-1.2, 1.0], &config(500, 0)).unwrap();
    assert!(t.best_cost < 1e-3, "{}", t.best_cost);
    let t = nelder_mead_minimize(|_: &[f64]| 4.0, &[0.3, 0.7], &config(40, 0)).unwrap();
    assert_eq!(t.best_theta, vec![0.3, 0.7]);
}

#[test]
fn non_finite_cost_aborts() {
    for opt in [Optimizer::Spsa, Optimizer::NelderMead] {
        let err = minimize(
            opt,
            |x: &[f64]| if x[0] > 0.6 { f64::NAN } else { x[0] },
            &[0.5],
            &config(50, 0),
        );
        assert!(err.is_err());
    }
}

#[test]
fn trace_csv_header_and_rows() {
    let trace = spsa_minimize(bowl, &[1.0], &config(5, 0)).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("iteration,cost,std_error"));
    assert_eq!(lines.count(), trace.evaluations());
}
