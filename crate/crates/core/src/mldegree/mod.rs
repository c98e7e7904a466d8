//! ML degree by elimination in parameter space.
//!
//! For a surface model (`d = 3`) the likelihood equations, with the gauge
//! `theta_3 = 1`, are two polynomials in `theta_1, theta_2`. Their resultant in
//! `theta_2` is cleaned of classical extraneous factors, rooted numerically,
//! and every root is matched with common `theta_2` roots of the two equations.
//! Torus points with `S(theta) != 0` are counted and the count is divided by
//! the torus fiber degree.

pub mod aberth;
pub mod resultant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use aberth::{aberth, complex_roots, ComplexRoot};
pub use resultant::{rational_determinant, sylvester_resultant};

use crate::birch::{solve_birch, SolverOptions};
use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::model::{sufficient_statistic, torus_fiber_degree, DataVector, ToricModel};
use crate::poly::{rat, MultivariatePolynomial, Rational, UnivariatePolynomial};

/// Redraws allowed across all trials before giving up.
pub const MAX_DISCARDS: usize = 10;

/// Data entries are drawn uniformly from `1..=DATA_MAX`.
pub const DATA_MAX: u64 = 1000;

#[derive(Debug, Clone)]
pub struct LikelihoodSystem {
    pub model: String,
    pub data: DataVector,
    /// `g_1..g_{d-1}` in `theta_1..theta_{d-1}` with `theta_d = 1`.
    pub equations: Vec<MultivariatePolynomial>,
    /// All `d` equations before the gauge, in `theta_1..theta_d`.
    pub raw: Vec<MultivariatePolynomial>,
}

fn monomials(model: &ToricModel) -> Vec<MultivariatePolynomial> {
    (0..model.cols())
        .map(|j| {
            let e = model.column(j).iter().map(|&a| a as u32).collect();
            MultivariatePolynomial::monomial(e, rat(1))
        })
        .collect()
}

/// `S(theta) = sum_j theta^{a_j}` in `d` variables.
pub fn partition_polynomial(model: &ToricModel) -> MultivariatePolynomial {
    monomials(model)
        .iter()
        .fold(MultivariatePolynomial::zero(model.rows()), |acc, m| &acc + m)
}

/// `g_i = b_i S - N sum_j a_ij theta^{a_j}`; one equation is dropped after
/// checking `sum_i g_i = 0`, then `theta_d = 1`.
pub fn likelihood_equations(model: &ToricModel, u: &DataVector) -> Result<LikelihoodSystem> {
    u.require_positive()?;
    let b = sufficient_statistic(model, u)?;
    let n = rat(u.sample_size() as i64);
    let d = model.rows();
    let mons = monomials(model);
    let s = partition_polynomial(model);
    let raw: Vec<MultivariatePolynomial> = (0..d)
        .map(|i| {
            let weighted = model.matrix()[i]
                .iter()
                .zip(&mons)
                .fold(MultivariatePolynomial::zero(d), |acc, (&a, m)| {
                    &acc + &m.scale(&rat(a))
                });
            &s.scale(&rat(b.0[i])) - &weighted.scale(&n)
        })
        .collect();
    let total = raw.iter().fold(MultivariatePolynomial::zero(d), |acc, g| &acc + g);
    if !total.is_zero() {
        return Err(Error::Internal(format!(
            "likelihood equations of {} are not dependent",
            model.label()
        )));
    }
    let equations = raw[..d - 1]
        .iter()
        .map(|g| g.substitute(d - 1, &rat(1)).drop_var(d - 1))
        .collect();
    Ok(LikelihoodSystem { model: model.label().to_string(), data: u.clone(), equations, raw })
}

/// Normalized lattice area of the model's point configuration, which is the
/// degree of the toric surface.
pub fn degree_of_variety(model: &ToricModel) -> Result<u64> {
    if model.rows() != 3 {
        return Err(Error::Unsupported {
            model: model.label().to_string(),
            reason: "degree is computed for surface models (3 rows)".into(),
        });
    }
    let pts: Vec<LatticePoint> = (0..model.cols())
        .map(|j| LatticePoint::new(model.matrix()[0][j], model.matrix()[1][j]))
        .collect();
    let hull = LatticePolygon::from_points(model.label(), &pts)?;
    Ok(hull.twice_area() as u64 / torus_fiber_degree(model))
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    /// ChaCha stream; one per trial.
    pub stream: u64,
    /// Index of the accepted draw within the stream.
    pub draw: usize,
    pub u: Vec<u64>,
    pub eliminant_degree: usize,
    /// Factors divided out of the resultant, in order.
    pub removals: Vec<String>,
    /// Accepted `(theta_1, theta_2)` pairs as `[[re, im], [re, im]]`.
    pub raw_theta_solutions: Vec<[[f64; 2]; 2]>,
    pub filtered_count: usize,
    pub count: usize,
    /// Newton MLE `(theta_1, theta_2)` with `theta_3 = 1`.
    pub mle_theta: Vec<f64>,
    /// Whether the MLE is among the solutions (within `1e-6`).
    pub contains_mle: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscardRecord {
    pub stream: u64,
    pub draw: usize,
    pub u: Vec<u64>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MLDegreeReport {
    pub model: String,
    pub count: usize,
    pub trials: Vec<TrialRecord>,
    pub discarded: Vec<DiscardRecord>,
    pub fiber_degree: u64,
    pub degree: u64,
    pub consistent: bool,
    /// Set for polygons with seven or more boundary points.
    pub experimental: bool,
}

enum Outcome {
    Counted {
        degree: usize,
        removals: Vec<String>,
        solutions: Vec<(Complex64, Complex64)>,
    },
    NonGeneric(String),
}

/// Counts critical points for a surface model over `trials` random data draws.
pub fn ml_degree(model: &ToricModel, trials: usize, seed: u64) -> Result<MLDegreeReport> {
    if model.rows() != 3 {
        return Err(Error::Unsupported {
            model: model.label().to_string(),
            reason: format!("ML degree counting needs 3 rows, got {}", model.rows()),
        });
    }
    if trials < 3 {
        return Err(Error::Domain(format!("need at least 3 trials, got {trials}")));
    }
    let fiber = torus_fiber_degree(model);
    let degree = degree_of_variety(model)?;

    let per_trial: Vec<Result<(Option<TrialRecord>, Vec<DiscardRecord>)>> = (0..trials as u64)
        .into_par_iter()
        .map(|stream| run_trial(model, seed, stream, fiber))
        .collect();

    let mut records = Vec::new();
    let mut discarded = Vec::new();
    for r in per_trial {
        let (rec, disc) = r?;
        discarded.extend(disc);
        if let Some(rec) = rec {
            records.push(rec);
        }
    }
    if discarded.len() > MAX_DISCARDS || records.len() < trials {
        return Err(Error::Genericity { discarded: discarded.len() });
    }
    let count = records[0].count;
    let consistent = records.iter().all(|r| r.count == count && r.filtered_count % fiber as usize == 0);
    Ok(MLDegreeReport {
        model: model.label().to_string(),
        count,
        trials: records,
        discarded,
        fiber_degree: fiber,
        degree,
        consistent,
        experimental: degree >= 7,
    })
}

fn run_trial(
    model: &ToricModel,
    seed: u64,
    stream: u64,
    fiber: u64,
) -> Result<(Option<TrialRecord>, Vec<DiscardRecord>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut discards = Vec::new();
    for draw in 0..=MAX_DISCARDS {
        let u: Vec<u64> = (0..model.cols()).map(|_| rng.random_range(1..=DATA_MAX)).collect();
        let data = DataVector::new(u.clone())?;
        match count_critical_points(model, &data)? {
            Outcome::NonGeneric(reason) => discards.push(DiscardRecord { stream, draw, u, reason }),
            Outcome::Counted { degree, removals, solutions } => {
                let mle = solve_birch(model, &data, &SolverOptions::default())?;
                let mle_theta = mle.theta_hat[..2].to_vec();
                let contains_mle = solutions.iter().any(|(x, y)| {
                    (x - mle_theta[0]).norm() <= 1e-6 * mle_theta[0].max(1.0)
                        && (y - mle_theta[1]).norm() <= 1e-6 * mle_theta[1].max(1.0)
                });
                let filtered_count = solutions.len();
                return Ok((
                    Some(TrialRecord {
                        seed,
                        stream,
                        draw,
                        u,
                        eliminant_degree: degree,
                        removals,
                        raw_theta_solutions: solutions
                            .iter()
                            .map(|(x, y)| [[x.re, x.im], [y.re, y.im]])
                            .collect(),
                        filtered_count,
                        count: filtered_count / fiber as usize,
                        mle_theta,
                        contains_mle,
                    }),
                    discards,
                ));
            }
        }
    }
    Ok((None, discards))
}

/// Complex coefficients (ascending in `theta_2`) of `g(x, theta_2)`, and
/// whether they all vanish relative to the size of the terms.
fn specialize(g: &MultivariatePolynomial, x: Complex64) -> (Vec<Complex64>, bool) {
    let mut c = vec![Complex64::new(0.0, 0.0); g.degree_in(1) as usize + 1];
    let mut scale = 0.0;
    for (e, v) in g.terms() {
        let t = crate::poly::rat_to_f64(v) * x.powu(e[0]);
        scale += t.norm();
        c[e[1] as usize] += t;
    }
    let vanishes = c.iter().all(|z| z.norm() <= 1e-10 * scale);
    (c, vanishes)
}

fn relative(g: &MultivariatePolynomial, x: Complex64, y: Complex64) -> f64 {
    let (v, s) = g.eval_complex(&[x, y]);
    if s == 0.0 {
        0.0
    } else {
        v.norm() / s
    }
}

/// Newton on the pair `(g1, g2)` from a matched root.
fn polish(
    g: &[MultivariatePolynomial],
    jac: &[[MultivariatePolynomial; 2]; 2],
    mut x: Complex64,
    mut y: Complex64,
) -> (Complex64, Complex64) {
    for _ in 0..20 {
        let f1 = g[0].eval_complex(&[x, y]).0;
        let f2 = g[1].eval_complex(&[x, y]).0;
        let a = jac[0][0].eval_complex(&[x, y]).0;
        let b = jac[0][1].eval_complex(&[x, y]).0;
        let c = jac[1][0].eval_complex(&[x, y]).0;
        let d = jac[1][1].eval_complex(&[x, y]).0;
        let det = a * d - b * c;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (d * f1 - b * f2) / det;
        let dy = (a * f2 - c * f1) / det;
        if !(dx.is_finite() && dy.is_finite()) {
            break;
        }
        x -= dx;
        y -= dy;
        if dx.norm() <= 1e-15 * x.norm() && dy.norm() <= 1e-15 * y.norm() {
            break;
        }
    }
    (x, y)
}

fn count_critical_points(model: &ToricModel, u: &DataVector) -> Result<Outcome> {
    let sys = likelihood_equations(model, u)?;
    let g = &sys.equations;
    if g[0].degree_in(1) == 0 && g[1].degree_in(1) == 0 {
        return Err(Error::Unsupported {
            model: model.label().to_string(),
            reason: "likelihood equations do not involve theta_2".into(),
        });
    }
    let res = sylvester_resultant(&g[0], &g[1], 1)?;
    let Some(mut r) = res.to_univariate(0) else {
        return Err(Error::Internal("resultant still involves theta_2".into()));
    };
    if r.is_zero() {
        return Ok(Outcome::NonGeneric("resultant vanishes identically".into()));
    }

    let mut removals = Vec::new();
    let before = r.clone();
    r = r.primitive();
    if let (Some(a), Some(b)) = (before.leading(), r.leading()) {
        let content: Rational = a / b;
        if content != rat(1) {
            removals.push(format!("content {content}"));
        }
    }
    let k = r.strip_zero_roots();
    if k > 0 {
        removals.push(format!("theta1^{k}"));
    }
    let lead = |p: &MultivariatePolynomial| -> UnivariatePolynomial {
        p.coefficients_in(1)
            .last()
            .and_then(|c| c.to_univariate(0))
            .unwrap_or_else(UnivariatePolynomial::zero)
    };
    let common_lead = lead(&g[0]).gcd(&lead(&g[1]));
    if common_lead.degree().unwrap_or(0) >= 1 {
        loop {
            let h = r.gcd(&common_lead);
            if h.degree().unwrap_or(0) == 0 {
                break;
            }
            removals.push(format!("leading-coefficient factor {}", h.display_var("theta1")));
            r = r.div_rem(&h).0.primitive();
        }
    }
    let sf = r.squarefree_part().primitive();
    if sf.degree() != r.degree() {
        removals.push(format!(
            "repeated factors (degree {} -> {})",
            r.degree().unwrap_or(0),
            sf.degree().unwrap_or(0)
        ));
    }
    let r = sf;
    let degree = r.degree().unwrap_or(0);
    if degree == 0 {
        return Ok(Outcome::Counted { degree, removals, solutions: Vec::new() });
    }

    let roots = complex_roots(&r)?;
    if roots.iter().any(|z| !z.simple) {
        return Ok(Outcome::NonGeneric("clustered eliminant roots".into()));
    }

    let jac = [
        [g[0].partial(0), g[0].partial(1)],
        [g[1].partial(0), g[1].partial(1)],
    ];
    let s = partition_polynomial(model).substitute(2, &rat(1)).drop_var(2);
    let mut solutions: Vec<(Complex64, Complex64)> = Vec::new();
    for root in roots {
        let x = root.value;
        let ((c1, z1), (c2, z2)) = (specialize(&g[0], x), specialize(&g[1], x));
        // a factor depending on theta_1 alone can kill one equation at x
        let (base, other) = match (z1, z2) {
            (true, true) => continue,
            (true, false) => (&c2, 0),
            (false, true) => (&c1, 1),
            _ if c1.len() <= c2.len() => (&c1, 1),
            _ => (&c2, 0),
        };
        let ys = match aberth(base) {
            Ok(ys) => ys,
            Err(_) => continue,
        };
        for y in ys {
            if relative(&g[other], x, y) > 1e-6 {
                continue;
            }
            let (px, py) = polish(g, &jac, x, y);
            if relative(&g[0], px, py) > 1e-10 || relative(&g[1], px, py) > 1e-10 {
                continue;
            }
            if px.norm() <= 1e-10 || py.norm() <= 1e-10 {
                continue;
            }
            let (sv, ss) = s.eval_complex(&[px, py]);
            if sv.norm() <= 1e-10 * ss {
                continue;
            }
            let scale = |z: Complex64| z.norm().max(1.0);
            let dup = solutions.iter().any(|(a, b)| {
                (a - px).norm() <= 1e-6 * scale(px) && (b - py).norm() <= 1e-6 * scale(py)
            });
            if !dup {
                solutions.push((px, py));
            }
        }
    }
    Ok(Outcome::Counted { degree, removals, solutions })
}
