//! Numerical MLE: the unique positive model point with `A p = b / N`.
//!
//! Damped Newton on `log theta` with the gauge `theta_d = 1`. Because the
//! column sums agree, the `d` moment equations sum to zero identically, so the
//! last one is dropped from the Newton system and checked afterwards.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    self, probabilities_from_log, sufficient_statistic, DataVector, ParameterVector,
    ProbabilityDistribution, ToricModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BirchNewton,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Bound on the moment residual; the variety residual must be below `10 * tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Armijo constant for the sufficient-decrease test on `|g|^2`.
    pub armijo: f64,
    /// Step shrink factor during backtracking.
    pub shrink: f64,
    /// Smallest step length tried before declaring a stall.
    pub min_step: f64,
    /// Starting point; all ones when `None`.
    pub initial_theta: Option<Vec<f64>>,
    /// Random log-uniform restarts in `[1e-2, 1e2]` after a stall.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
            armijo: 1e-4,
            shrink: 0.5,
            min_step: 1e-10,
            initial_theta: None,
            restarts: 10,
            seed: 0,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Domain(format!(
                "solver options need tol > 0 and max_iter >= 1 (tol {}, max_iter {})",
                self.tol, self.max_iter
            )));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::Domain(format!("shrink factor {} not in (0, 1)", self.shrink)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MLEResult {
    pub p_hat: ProbabilityDistribution,
    pub theta_hat: ParameterVector,
    pub log_lik: f64,
    pub moment_residual: f64,
    pub variety_residual: f64,
    pub method: Method,
    pub iterations: usize,
}

impl MLEResult {
    /// Fills in likelihood and both residuals for a candidate `p`.
    pub fn certify(
        model: &ToricModel,
        u: &DataVector,
        p: Vec<f64>,
        theta: Vec<f64>,
        method: Method,
        iterations: usize,
    ) -> Result<Self> {
        let moment_residual = moment_residual(model, &p, u)?;
        let variety_residual = model::variety_residual(model, &p)?;
        let log_lik = model::log_likelihood(&p, u)?;
        Ok(Self {
            p_hat: ProbabilityDistribution::new(p)?,
            theta_hat: ParameterVector::new(theta)?,
            log_lik,
            moment_residual,
            variety_residual,
            method,
            iterations,
        })
    }
}

/// `|A p - A u / N|_inf`.
pub fn moment_residual(model: &ToricModel, p: &[f64], u: &DataVector) -> Result<f64> {
    if p.len() != model.cols() {
        return Err(Error::LengthMismatch {
            expected: model.cols(),
            got: p.len(),
        });
    }
    Ok(moment_gap(model, p, &target(model, u)?)
        .iter()
        .fold(0.0, |m, g| m.max(g.abs())))
}

fn target(model: &ToricModel, u: &DataVector) -> Result<Vec<f64>> {
    let b = sufficient_statistic(model, u)?;
    let n = u.sample_size() as f64;
    Ok(b.0.iter().map(|&x| x as f64 / n).collect())
}

fn moment_gap(model: &ToricModel, p: &[f64], target: &[f64]) -> Vec<f64> {
    model
        .matrix()
        .iter()
        .zip(target)
        .map(|(row, t)| row.iter().zip(p).map(|(&a, x)| a as f64 * x).sum::<f64>() - t)
        .collect()
}

fn sq_norm(g: &[f64]) -> f64 {
    g.iter().map(|x| x * x).sum()
}

enum Attempt {
    Converged(Vec<f64>, Vec<f64>),
    Stalled { log_theta: Vec<f64>, residual: f64 },
}

/// Solves the moment equations for strictly positive data.
pub fn solve_birch(model: &ToricModel, u: &DataVector, opts: &SolverOptions) -> Result<MLEResult> {
    opts.validate()?;
    if u.len() != model.cols() {
        return Err(Error::LengthMismatch {
            expected: model.cols(),
            got: u.len(),
        });
    }
    u.require_positive()?;
    let d = model.rows();
    let target = target(model, u)?;

    let start = match &opts.initial_theta {
        Some(t) => {
            if t.len() != d {
                return Err(Error::LengthMismatch { expected: d, got: t.len() });
            }
            let t = ParameterVector::new(t.clone())?;
            let last = t[d - 1].ln();
            t.iter().map(|x| x.ln() - last).collect()
        }
        None => vec![0.0; d],
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut iterations = 0;
    let mut best: (Vec<f64>, f64) = (start.clone(), f64::INFINITY);
    let mut log_theta = start;
    for attempt in 0..=opts.restarts {
        if attempt > 0 {
            log_theta = (0..d)
                .map(|i| if i + 1 == d { 0.0 } else { rng.random_range(-2.0..2.0) * std::f64::consts::LN_10 })
                .collect();
        }
        match newton(model, &target, log_theta.clone(), opts, &mut iterations) {
            Attempt::Converged(lt, p) => {
                let theta = lt.iter().map(|x| x.exp()).collect();
                return MLEResult::certify(model, u, p, theta, Method::BirchNewton, iterations);
            }
            Attempt::Stalled { log_theta, residual } => {
                if residual < best.1 {
                    best = (log_theta, residual);
                }
            }
        }
        if iterations >= opts.max_iter {
            break;
        }
    }
    Err(Error::NonConvergence {
        iterations,
        residual: best.1,
        last_iterate: best.0.iter().map(|x| x.exp()).collect(),
    })
}

fn newton(
    model: &ToricModel,
    target: &[f64],
    mut lt: Vec<f64>,
    opts: &SolverOptions,
    iterations: &mut usize,
) -> Attempt {
    let d = model.rows();
    let a = model.matrix();
    let mut p = probabilities_from_log(model, &lt);
    let mut g = moment_gap(model, &p, target);
    loop {
        let res = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if res <= opts.tol {
            if let Ok(v) = model::variety_residual(model, &p) {
                if v <= 10.0 * opts.tol {
                    return Attempt::Converged(lt, p);
                }
            }
        }
        if *iterations >= opts.max_iter || !res.is_finite() {
            return Attempt::Stalled { log_theta: lt, residual: res };
        }
        *iterations += 1;

        // J_ik = sum_j a_ij p_j (a_kj - (A p)_k), the covariance of the statistics.
        let ap: Vec<f64> = (0..d)
            .map(|k| a[k].iter().zip(&p).map(|(&x, y)| x as f64 * y).sum())
            .collect();
        let n = d - 1;
        let jac = DMatrix::from_fn(n, n, |i, k| {
            a[i].iter()
                .zip(&a[k])
                .zip(&p)
                .map(|((&ai, &ak), pj)| ai as f64 * pj * (ak as f64 - ap[k]))
                .sum()
        });
        let rhs = DVector::from_iterator(n, g[..n].iter().map(|x| -x));
        let Some(step) = jac.lu().solve(&rhs) else {
            return Attempt::Stalled { log_theta: lt, residual: res };
        };

        let f0 = sq_norm(&g);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = (0..d)
                .map(|i| if i < n { lt[i] + t * step[i] } else { lt[i] })
                .collect();
            let tp = probabilities_from_log(model, &trial);
            let tg = moment_gap(model, &tp, target);
            let f1 = sq_norm(&tg);
            // near the floating-point floor an equal residual still counts as progress
            if f1 <= (1.0 - 2.0 * opts.armijo * t) * f0 || (f1 <= f0 && f0 < 1e-24) {
                lt = trial;
                p = tp;
                g = tg;
                break;
            }
            t *= opts.shrink;
            if t < opts.min_step {
                return Attempt::Stalled { log_theta: lt, residual: res };
            }
        }
    }
}
