//! BFGS with an Armijo backtracking line search.

use crate::error::Result;

/// Curvature `y.s` at or below which the inverse-Hessian update is skipped.
pub const CURVATURE_GUARD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearch {
    /// Sufficient-decrease constant, in (0, 1).
    pub c1: f64,
    /// Step shrink factor per backtrack, in (0, 1).
    pub backtrack: f64,
    pub max_backtracks: usize,
}

impl Default for LineSearch {
    fn default() -> Self {
        LineSearch { c1: 1e-4, backtrack: 0.5, max_backtracks: 40 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub step_tolerance: f64,
    pub line_search: LineSearch,
}

impl OptimizerConfig {
    pub fn with_iterations(max_iterations: usize) -> OptimizerConfig {
        OptimizerConfig { max_iterations, ..OptimizerConfig::default() }
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 100,
            gradient_tolerance: 1e-10,
            step_tolerance: 1e-14,
            line_search: LineSearch::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    StepTolerance,
    MaxIterations,
    LineSearchFailure,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::GradientTolerance => "gradient_tol",
            Termination::StepTolerance => "step_tol",
            Termination::MaxIterations => "max_iter",
            Termination::LineSearchFailure => "line_search_failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IteratePoint {
    pub theta: Vec<f64>,
    pub objective: f64,
    pub gradient_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerResult {
    pub theta: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Starting point followed by one entry per accepted step.
    pub trace: Vec<IteratePoint>,
    pub termination: Termination,
    /// Final inverse-Hessian approximation, row-major.
    pub inverse_hessian: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scaled_identity(n: usize, gradient_norm: f64) -> Vec<f64> {
    let scale = if gradient_norm > 0.0 { (1.0 / gradient_norm).clamp(1e-3, 1e3) } else { 1e3 };
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = scale;
    }
    h
}

/// `H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], rho: f64) {
    let n = s.len();
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

/// Minimizes `objective` from `theta0`.
///
/// Callback errors abort the run; a failed line search ends it early with
/// [`Termination::LineSearchFailure`] and the best point so far.
pub fn minimize<F, G>(objective: F, gradient: G, theta0: &[f64], config: &OptimizerConfig) -> Result<OptimizerResult>
where
    F: Fn(&[f64]) -> Result<f64>,
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = theta0.len();
    let mut x = theta0.to_vec();
    let mut fx = objective(&x)?;
    let mut g = gradient(&x)?;
    let mut trace = vec![IteratePoint { theta: x.clone(), objective: fx, gradient_norm: norm(&g) }];
    let mut h = scaled_identity(n, norm(&g));
    let mut iterations = 0;
    let mut termination = Termination::MaxIterations;

    while iterations < config.max_iterations {
        if norm(&g) < config.gradient_tolerance {
            termination = Termination::GradientTolerance;
            break;
        }
        let mut fresh = false;
        let accepted = loop {
            let mut d: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &g)).collect();
            let mut slope = dot(&g, &d);
            if !(slope < 0.0) {
                h = scaled_identity(n, norm(&g));
                fresh = true;
                d = (0..n).map(|i| -h[i * n + i] * g[i]).collect();
                slope = dot(&g, &d);
            }
            let mut step = 1.0;
            let mut found = None;
            for _ in 0..=config.line_search.max_backtracks {
                let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
                let f_trial = objective(&trial)?;
                if f_trial <= fx + config.line_search.c1 * step * slope {
                    found = Some((trial, f_trial));
                    break;
                }
                step *= config.line_search.backtrack;
            }
            match found {
                Some(point) => break Some(point),
                None if !fresh => {
                    // retry once along steepest descent
                    h = scaled_identity(n, norm(&g));
                    fresh = true;
                }
                None => break None,
            }
        };
        let Some((x_new, f_new)) = accepted else {
            termination = Termination::LineSearchFailure;
            break;
        };
        let g_new = gradient(&x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > CURVATURE_GUARD {
            bfgs_update(&mut h, &s, &y, 1.0 / sy);
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        iterations += 1;
        trace.push(IteratePoint { theta: x.clone(), objective: fx, gradient_norm: norm(&g) });
        if norm(&s) < config.step_tolerance {
            termination = Termination::StepTolerance;
            break;
        }
    }
    if iterations == config.max_iterations && termination == Termination::MaxIterations && norm(&g) < config.gradient_tolerance {
        termination = Termination::GradientTolerance;
    }

    Ok(OptimizerResult { theta: x, objective: fx, iterations, trace, termination, inverse_hessian: h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> Result<f64> {
        Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2))
    }

    fn rosenbrock_grad(x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![
            -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
            200.0 * (x[1] - x[0] * x[0]),
        ])
    }

    #[test]
    fn one_dimensional_quadratic() {
        let res = minimize(
            |x| Ok((x[0] - 3.0).powi(2)),
            |x| Ok(vec![2.0 * (x[0] - 3.0)]),
            &[0.0],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!((res.theta[0] - 3.0).abs() < 1e-8);
        assert!(res.iterations <= 5, "{} iterations", res.iterations);
        assert_eq!(res.trace.len(), res.iterations + 1);
    }

    #[test]
    fn rosenbrock_converges() {
        let config = OptimizerConfig { max_iterations: 500, ..OptimizerConfig::default() };
        let res = minimize(rosenbrock, rosenbrock_grad, &[-1.2, 1.0], &config).unwrap();
        assert!((res.theta[0] - 1.0).abs() < 1e-6 && (res.theta[1] - 1.0).abs() < 1e-6, "{:?}", res.theta);
        for w in res.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective);
        }
    }

    #[test]
    fn zero_iterations_returns_start() {
        let res = minimize(rosenbrock, rosenbrock_grad, &[-1.2, 1.0], &OptimizerConfig::with_iterations(0)).unwrap();
        assert_eq!(res.theta, vec![-1.2, 1.0]);
        assert_eq!(res.termination, Termination::MaxIterations);
        assert_eq!(res.trace.len(), 1);
    }

    #[test]
    fn nonsmooth_objective_stops_softly() {
        let res = minimize(
            |x| Ok(x[0].abs()),
            |x| Ok(vec![x[0].signum()]),
            &[0.3],
            &OptimizerConfig::with_iterations(50),
        )
        .unwrap();
        assert!(res.objective <= 0.3);
        for w in res.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective);
        }
    }
}
