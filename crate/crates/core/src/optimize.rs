//! Derivative-free outer-loop optimizers: SPSA and Nelder-Mead.

use std::io::Write;
use std::str::FromStr;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::estimator::EnergyEstimate;
use crate::rng;

/// A single cost-function value with its statistical uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub cost: f64,
    pub std_error: f64,
}

/// Anything a cost function may return.
pub trait CostValue {
    fn into_evaluation(self) -> Result<Evaluation>;
}

impl CostValue for f64 {
    fn into_evaluation(self) -> Result<Evaluation> {
        Ok(Evaluation {
            cost: self,
            std_error: 0.0,
        })
    }
}

impl CostValue for Evaluation {
    fn into_evaluation(self) -> Result<Evaluation> {
        Ok(self)
    }
}

impl CostValue for EnergyEstimate {
    fn into_evaluation(self) -> Result<Evaluation> {
        Ok(Evaluation {
            cost: self.value,
            std_error: self.std_error,
        })
    }
}

impl<T: CostValue> CostValue for Result<T> {
    fn into_evaluation(self) -> Result<Evaluation> {
        self?.into_evaluation()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimizer {
    Spsa,
    NelderMead,
}

impl FromStr for Optimizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spsa" => Ok(Optimizer::Spsa),
            "nelder-mead" | "nelder_mead" | "nm" => Ok(Optimizer::NelderMead),
            other => Err(Error::invalid("optimizer", format!("unknown optimizer {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpsaConfig {
    /// Step-size numerator; `None` calibrates it from a gradient probe.
    pub a: Option<f64>,
    pub c: f64,
    /// Stability constant; `None` means `max_iterations / 10`.
    pub big_a: Option<f64>,
    pub alpha: f64,
    pub gamma: f64,
    /// Desired size of the first parameter update when `a` is calibrated.
    pub target_step: f64,
    /// Report the mean of the last `w` iterates as θ* instead of the best
    /// evaluated point.
    pub smoothing_window: Option<usize>,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        SpsaConfig {
            a: None,
            c: 0.2,
            big_a: None,
            alpha: 0.602,
            gamma: 0.101,
            target_step: 0.1,
            smoothing_window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    pub initial_scale: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once every vertex lies within this ∞-norm distance of the best.
    pub tolerance: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            initial_scale: 0.5,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    pub seed: u64,
    pub spsa: SpsaConfig,
    pub nelder_mead: NelderMeadConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 200,
            seed: 0,
            spsa: SpsaConfig::default(),
            nelder_mead: NelderMeadConfig::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.spsa;
        for (name, v) in [("spsa alpha", s.alpha), ("spsa gamma", s.gamma)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, format!("{v} is outside (0, 1]")));
            }
        }
        if let Some(a) = s.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::invalid("spsa a", format!("{a} must be positive")));
            }
        }
        if !(s.c > 0.0 && s.c.is_finite()) {
            return Err(Error::invalid("spsa c", format!("{} must be positive", s.c)));
        }
        if !(s.target_step > 0.0) {
            return Err(Error::invalid("spsa target step", "must be positive"));
        }
        if s.big_a.is_some_and(|a| !(a >= 0.0)) {
            return Err(Error::invalid("spsa A", "must be non-negative"));
        }
        if s.smoothing_window == Some(0) {
            return Err(Error::invalid("smoothing window", "must be at least 1"));
        }
        let nm = &self.nelder_mead;
        if !(nm.initial_scale > 0.0) || !(nm.tolerance >= 0.0) {
            return Err(Error::invalid(
                "nelder-mead",
                "scale must be positive and tolerance non-negative",
            ));
        }
        if !(nm.reflection > 0.0 && nm.expansion > 1.0 && nm.contraction > 0.0 && nm.contraction < 1.0)
            || !(nm.shrink > 0.0 && nm.shrink < 1.0)
        {
            return Err(Error::invalid("nelder-mead", "coefficients out of range"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalKind {
    /// Gradient-magnitude probe used to pick the SPSA step size.
    Calibration,
    /// SPSA `θ + c_k Δ_k`.
    Plus,
    /// SPSA `θ − c_k Δ_k`.
    Minus,
    /// Nelder-Mead vertex or trial point.
    Simplex,
    /// Evaluation at the reported θ*.
    Final,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub kind: EvalKind,
    pub theta: Vec<f64>,
    pub cost: f64,
    pub std_error: f64,
    /// Lowest cost recorded up to and including this point.
    pub best_so_far: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    pub points: Vec<TracePoint>,
    pub best_theta: Vec<f64>,
    pub best_cost: f64,
    pub best_std_error: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl OptimizationTrace {
    pub fn evaluations(&self) -> usize {
        self.points.len()
    }

    /// One row per evaluation: `iteration,cost,std_error`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let wrap = |e: csv::Error| Error::Numeric(format!("writing trace: {e}"));
        w.write_record(["iteration", "cost", "std_error"]).map_err(wrap)?;
        for p in &self.points {
            w.write_record([p.iteration.to_string(), p.cost.to_string(), p.std_error.to_string()])
                .map_err(wrap)?;
        }
        w.flush().map_err(|e| Error::Numeric(format!("writing trace: {e}")))?;
        Ok(())
    }
}

/// Evaluates the cost function and records every call.
struct Recorder<F> {
    f: F,
    points: Vec<TracePoint>,
    best: Option<usize>,
}

impl<F, C> Recorder<F>
where
    F: FnMut(&[f64]) -> C,
    C: CostValue,
{
    fn new(f: F) -> Self {
        Recorder {
            f,
            points: Vec::new(),
            best: None,
        }
    }

    fn eval(&mut self, theta: &[f64], iteration: usize, kind: EvalKind) -> Result<f64> {
        let e = (self.f)(theta).into_evaluation()?;
        if !e.cost.is_finite() {
            return Err(Error::Numeric(format!(
                "cost is {} at iteration {iteration}, θ = {theta:?}",
                e.cost
            )));
        }
        let improved = self.best.is_none_or(|b| e.cost < self.points[b].cost);
        if improved {
            self.best = Some(self.points.len());
        }
        let best_so_far = if improved {
            e.cost
        } else {
            self.points[self.best.unwrap()].cost
        };
        self.points.push(TracePoint {
            iteration,
            kind,
            theta: theta.to_vec(),
            cost: e.cost,
            std_error: e.std_error,
            best_so_far,
        });
        Ok(e.cost)
    }

    fn best_trace(self, iterations: usize, converged: bool) -> OptimizationTrace {
        let b = &self.points[self.best.expect("at least one evaluation")];
        OptimizationTrace {
            best_theta: b.theta.clone(),
            best_cost: b.cost,
            best_std_error: b.std_error,
            points: self.points,
            iterations,
            converged,
        }
    }
}

fn check_start(theta0: &[f64], config: &OptimizerConfig) -> Result<()> {
    config.validate()?;
    if theta0.is_empty() {
        return Err(Error::invalid("initial parameters", "need at least one parameter"));
    }
    if theta0.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("initial parameters", "must be finite"));
    }
    Ok(())
}

pub fn minimize<F, C>(optimizer: Optimizer, f: F, theta0: &[f64], config: &OptimizerConfig) -> Result<OptimizationTrace>
where
    F: FnMut(&[f64]) -> C,
    C: CostValue,
{
    match optimizer {
        Optimizer::Spsa => spsa_minimize(f, theta0, config),
        Optimizer::NelderMead => nelder_mead_minimize(f, theta0, config),
    }
}

fn rademacher(rng: &mut rng::Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

/// Simultaneous-perturbation stochastic approximation.
///
/// Iteration `k` draws one Rademacher vector `Δ_k` and spends exactly two
/// evaluations, `f(θ_k ± c_k Δ_k)`, with `a_k = a/(k+1+A)^α` and
/// `c_k = c/(k+1)^γ`. When `a` is not given, five evaluations before the
/// first iteration (`f(θ₀)` and four one-sided probes) estimate the gradient
/// magnitude `g` and set `a = target_step·(A+1)^α / g`.
pub fn spsa_minimize<F, C>(f: F, theta0: &[f64], config: &OptimizerConfig) -> Result<OptimizationTrace>
where
    F: FnMut(&[f64]) -> C,
    C: CostValue,
{
    check_start(theta0, config)?;
    let cfg = config.spsa;
    let n = theta0.len();
    let big_a = cfg.big_a.unwrap_or(config.max_iterations as f64 / 10.0);
    let mut rng = rng::seeded(config.seed);
    let mut rec = Recorder::new(f);

    let a = match cfg.a {
        Some(a) => a,
        None => {
            let f0 = rec.eval(theta0, 0, EvalKind::Calibration)?;
            let mut total = 0.0;
            for _ in 0..4 {
                let delta = rademacher(&mut rng, n);
                let probe: Vec<f64> = theta0.iter().zip(&delta).map(|(t, d)| t + cfg.c * d).collect();
                total += (rec.eval(&probe, 0, EvalKind::Calibration)? - f0).abs() / cfg.c;
            }
            let g = total / 4.0;
            let scale = cfg.target_step * (big_a + 1.0).powf(cfg.alpha);
            if g > 0.0 {
                scale / g
            } else {
                scale
            }
        }
    };

    let mut theta = theta0.to_vec();
    let mut iterates = Vec::with_capacity(config.max_iterations);
    for k in 0..config.max_iterations {
        let kf = (k + 1) as f64;
        let ak = a / (kf + big_a).powf(cfg.alpha);
        let ck = cfg.c / kf.powf(cfg.gamma);
        let delta = rademacher(&mut rng, n);
        let plus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + ck * d).collect();
        let minus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t - ck * d).collect();
        let yp = rec.eval(&plus, k + 1, EvalKind::Plus)?;
        let ym = rec.eval(&minus, k + 1, EvalKind::Minus)?;
        let diff = (yp - ym) / (2.0 * ck);
        for (t, d) in theta.iter_mut().zip(&delta) {
            *t -= ak * diff / d;
        }
        iterates.push(theta.clone());
    }

    let final_theta = match cfg.smoothing_window {
        Some(w) if !iterates.is_empty() => {
            let tail = &iterates[iterates.len().saturating_sub(w)..];
            (0..n)
                .map(|i| tail.iter().map(|t| t[i]).sum::<f64>() / tail.len() as f64)
                .collect()
        }
        _ => theta,
    };
    rec.eval(&final_theta, config.max_iterations + 1, EvalKind::Final)?;
    if cfg.smoothing_window.is_some() {
        let p = rec.points.last().expect("final evaluation").clone();
        let mut trace = rec.best_trace(config.max_iterations, false);
        trace.best_theta = p.theta;
        trace.best_cost = p.cost;
        trace.best_std_error = p.std_error;
        return Ok(trace);
    }
    Ok(rec.best_trace(config.max_iterations, false))
}

/// Downhill simplex. Each iteration performs one reflect, expand, contract or
/// shrink step; ties in cost keep the earlier vertex, so a flat function
/// returns θ₀.
pub fn nelder_mead_minimize<F, C>(f: F, theta0: &[f64], config: &OptimizerConfig) -> Result<OptimizationTrace>
where
    F: FnMut(&[f64]) -> C,
    C: CostValue,
{
    check_start(theta0, config)?;
    let cfg = config.nelder_mead;
    let n = theta0.len();
    let mut rec = Recorder::new(f);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((theta0.to_vec(), rec.eval(theta0, 0, EvalKind::Simplex)?));
    for i in 0..n {
        let mut v = theta0.to_vec();
        v[i] += cfg.initial_scale;
        let fv = rec.eval(&v, 0, EvalKind::Simplex)?;
        simplex.push((v, fv));
    }

    let point = |base: &[f64], dir: &[f64], t: f64| -> Vec<f64> {
        base.iter().zip(dir).map(|(b, d)| b + t * (d - b)).collect()
    };

    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < cfg.tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        let it = iterations;

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(v, _)| v[i]).sum::<f64>() / n as f64)
            .collect();
        let (worst, f_worst) = simplex[n].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[n - 1].1;

        let xr = point(&centroid, &worst, -cfg.reflection);
        let fr = rec.eval(&xr, it, EvalKind::Simplex)?;
        if fr < f_best {
            let xe = point(&centroid, &worst, -cfg.reflection * cfg.expansion);
            let fe = rec.eval(&xe, it, EvalKind::Simplex)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[n] = (xr, fr);
            continue;
        }
        // outside contraction towards the reflected point, else inside
        let toward = if fr < f_worst { &xr } else { &worst };
        let xc = point(&centroid, toward, cfg.contraction);
        let fc = rec.eval(&xc, it, EvalKind::Simplex)?;
        if fc < fr.min(f_worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let v = point(&best, &vertex.0, cfg.shrink);
            let fv = rec.eval(&v, it, EvalKind::Simplex)?;
            *vertex = (v, fv);
        }
    }
    Ok(rec.best_trace(iterations, converged))
}
