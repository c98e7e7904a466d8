//! Closed-form MLE for the cubic `S3` and the quartics `S4`, `S4_A2`, `S4_A3`.
//!
//! Each model has an affine moment slice of dimension one or two. The solver
//! roots one univariate polynomial per pivot coordinate with Cardano or
//! Ferrari, rebuilds `p` on the slice, and keeps the candidate that passes the
//! moment and variety certificates. Printed polynomials are used only where
//! they actually vanish at the certified point; otherwise the eliminant from
//! [`eliminate_to_univariate`] replaces them and a [`DiscrepancyReport`] is
//! emitted.

pub mod eliminate;
pub mod paper;
pub mod radicals;

use serde::Serialize;

pub use eliminate::{eliminate_to_univariate, AffineChart};
pub use paper::{paper_displays, paper_polynomial, PaperDisplay};
pub use radicals::{real_roots, roots_up_to_quartic, solve_cubic, solve_quartic};

use crate::birch::{moment_residual, MLEResult, Method};
use crate::error::{Error, Result};
use crate::model::{self, parametrize, DataVector, ToricModel};
use crate::poly::UnivariatePolynomial;

/// Certificate bound for closed-form candidates.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Relative residual below which a polynomial counts as vanishing.
pub const ROOT_TOL: f64 = 1e-8;

pub const MODELS: [&str; 4] = ["S3", "S4", "S4_A2", "S4_A3"];

/// Pivot coordinates (0-based) whose polynomials are rooted.
fn pivots(label: &str) -> Option<&'static [usize]> {
    match label {
        "S3" => Some(&[0]),
        "S4" | "S4_A2" => Some(&[0, 1]),
        "S4_A3" => Some(&[1, 2]),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Paper,
    Derived,
}

#[derive(Debug, Clone, Serialize)]
pub struct PivotPolynomial {
    /// 1-based coordinate.
    pub coordinate: usize,
    pub source: Source,
    pub polynomial: String,
    pub real_roots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    pub paper: f64,
    pub derived: f64,
}

/// Machine-readable record of a printed formula that failed its check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub model: String,
    pub display: String,
    pub coordinate: String,
    pub paper_poly: String,
    pub derived_poly: String,
    pub witness_phat: Vec<f64>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormSolution {
    pub result: MLEResult,
    pub pivots: Vec<PivotPolynomial>,
    pub discrepancies: Vec<DiscrepancyReport>,
}

/// `|P(x)| / sum |c_i x^i|`, evaluated on max-normalized coefficients.
pub fn relative_residual(poly: &UnivariatePolynomial, x: f64) -> f64 {
    let c = poly.to_f64_normalized();
    let (mut v, mut s, mut xp) = (0.0, 0.0, 1.0);
    for a in c {
        v += a * xp;
        s += (a * xp).abs();
        xp *= x;
    }
    if s == 0.0 {
        0.0
    } else {
        v.abs() / s
    }
}

fn coord_name(k: usize) -> String {
    format!("p{}", k + 1)
}

fn unit_roots(poly: &UnivariatePolynomial) -> Result<Vec<f64>> {
    let mut r: Vec<f64> = real_roots(&roots_up_to_quartic(poly)?)
        .into_iter()
        .filter(|&x| x > 0.0 && x < 1.0)
        .collect();
    r.sort_by(f64::total_cmp);
    r.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    Ok(r)
}

struct Candidate {
    p: Vec<f64>,
    moment: f64,
    variety: f64,
}

/// Rebuilds `p` from every combination of pivot roots; returns the certified
/// point or the full candidate list on failure.
fn select(
    model: &ToricModel,
    u: &DataVector,
    chart: &AffineChart,
    roots: &[Vec<f64>],
) -> std::result::Result<Vec<f64>, Vec<Candidate>> {
    let mut combos: Vec<Vec<f64>> = vec![Vec::new()];
    for rs in roots {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                rs.iter().map(move |&r| {
                    let mut c = c.clone();
                    c.push(r);
                    c
                })
            })
            .collect();
    }
    let mut all = Vec::new();
    for vals in combos {
        let p = chart.point(&vals);
        if p.iter().any(|&x| !(x > 0.0)) {
            all.push(Candidate { p, moment: f64::INFINITY, variety: f64::INFINITY });
            continue;
        }
        let moment = moment_residual(model, &p, u).unwrap_or(f64::INFINITY);
        let variety = model::variety_residual(model, &p).unwrap_or(f64::INFINITY);
        all.push(Candidate { p, moment, variety });
    }
    let best = all
        .iter()
        .filter(|c| c.moment <= CERTIFICATE_TOL && c.variety <= CERTIFICATE_TOL)
        .min_by(|a, b| (a.moment + a.variety).total_cmp(&(b.moment + b.variety)));
    match best {
        Some(c) => Ok(c.p.clone()),
        None => Err(all),
    }
}

/// A parameter recovery formula: name, printed form, corrected form.
struct ThetaFormula {
    printed: &'static str,
    corrected: &'static str,
    paper: fn(&[f64]) -> f64,
    fixed: fn(&[f64]) -> f64,
}

fn theta_formulas(label: &str) -> Vec<ThetaFormula> {
    fn same(printed: &'static str, f: fn(&[f64]) -> f64) -> ThetaFormula {
        ThetaFormula { printed, corrected: printed, paper: f, fixed: f }
    }
    match label {
        "S3" => vec![
            same("cbrt(p1^2/p2)", |p| (p[0] * p[0] / p[1]).cbrt()),
            same("cbrt(p2^2/p1)", |p| (p[1] * p[1] / p[0]).cbrt()),
            same("cbrt(p3)", |p| p[2].cbrt()),
        ],
        "S4" | "S4_A2" => vec![
            same("cbrt(p1^2/p2)", |p| (p[0] * p[0] / p[1]).cbrt()),
            same("cbrt(p2^2/p1)", |p| (p[1] * p[1] / p[0]).cbrt()),
            same("cbrt(p5^3/(p1*p2))", |p| (p[4].powi(3) / (p[0] * p[1])).cbrt()),
        ],
        "S4_A3" => vec![
            same("(p2/p3)*(p5^2/p2)^(1/4)", |p| p[1] / p[2] * (p[4] * p[4] / p[1]).powf(0.25)),
            ThetaFormula {
                printed: "p3*(p2^3/p5^6)^(1/4)",
                corrected: "p3*(1/(p2*p5^2))^(1/4)",
                paper: |p| p[2] * (p[1].powi(3) / p[4].powi(6)).powf(0.25),
                fixed: |p| p[2] * (1.0 / (p[1] * p[4] * p[4])).powf(0.25),
            },
            same("(p5^2/p2)^(1/4)", |p| (p[4] * p[4] / p[1]).powf(0.25)),
        ],
        _ => Vec::new(),
    }
}

fn round_trip_error(model: &ToricModel, theta: &[f64], p: &[f64]) -> f64 {
    match parametrize(model, theta) {
        Ok(q) => q.iter().zip(p).fold(0.0, |m, (a, b)| m.max((a - b).abs())),
        Err(_) => f64::INFINITY,
    }
}

/// Closed-form MLE, returning only the estimate.
pub fn mle_closed_form(label: &str, u: &DataVector) -> Result<MLEResult> {
    Ok(solve_closed_form(label, u)?.result)
}

/// Closed-form MLE with the polynomials used and any discrepancy reports.
pub fn solve_closed_form(label: &str, u: &DataVector) -> Result<ClosedFormSolution> {
    let piv = pivots(label).ok_or_else(|| Error::Unsupported {
        model: label.to_string(),
        reason: format!("closed forms exist only for {}", MODELS.join(", ")),
    })?;
    let model = model::named(label)?;
    if u.len() != model.cols() {
        return Err(Error::LengthMismatch { expected: model.cols(), got: u.len() });
    }
    u.require_positive()?;
    let chart = AffineChart::new(&model, u, piv)
        .ok_or_else(|| Error::Internal(format!("pivots of {label} do not chart the moment slice")))?;

    let derived: Vec<UnivariatePolynomial> = piv
        .iter()
        .map(|&k| eliminate_to_univariate(&model, u, k))
        .collect::<Result<_>>()?;
    let derived_roots: Vec<Vec<f64>> = derived.iter().map(unit_roots).collect::<Result<_>>()?;
    let witness = select(&model, u, &chart, &derived_roots).map_err(|all| inconsistent(label, all))?;

    let mut discrepancies = Vec::new();
    let mut chosen = Vec::new();
    for (i, &k) in piv.iter().enumerate() {
        let display = paper_polynomial(label, u, k + 1)?;
        let derived_res = relative_residual(&derived[i], witness[k]);
        let pick = match display {
            Some(d) => {
                let res = relative_residual(&d.poly, witness[k]);
                if res <= ROOT_TOL {
                    (Source::Paper, d.poly)
                } else {
                    discrepancies.push(DiscrepancyReport {
                        model: label.to_string(),
                        display: d.name.clone(),
                        coordinate: coord_name(k),
                        paper_poly: d.poly.display_var(&coord_name(k)),
                        derived_poly: derived[i].display_var(&coord_name(k)),
                        witness_phat: witness.clone(),
                        residuals: Residuals { paper: res, derived: derived_res },
                    });
                    (Source::Derived, derived[i].clone())
                }
            }
            None => (Source::Derived, derived[i].clone()),
        };
        chosen.push(pick);
    }

    let chosen_roots: Vec<Vec<f64>> =
        chosen.iter().map(|(_, p)| unit_roots(p)).collect::<Result<_>>()?;
    let p = select(&model, u, &chart, &chosen_roots).map_err(|all| inconsistent(label, all))?;

    let formulas = theta_formulas(label);
    let theta: Vec<f64> = formulas.iter().map(|f| (f.fixed)(&p)).collect();
    let printed: Vec<f64> = formulas.iter().map(|f| (f.paper)(&p)).collect();
    let fixed_err = round_trip_error(&model, &theta, &p);
    let printed_err = round_trip_error(&model, &printed, &p);
    for (i, f) in formulas.iter().enumerate() {
        if f.printed != f.corrected && !(printed_err <= 1e-10) {
            discrepancies.push(DiscrepancyReport {
                model: label.to_string(),
                display: format!("{label} parameter recovery"),
                coordinate: format!("theta{}", i + 1),
                paper_poly: f.printed.to_string(),
                derived_poly: f.corrected.to_string(),
                witness_phat: p.clone(),
                residuals: Residuals { paper: printed_err, derived: fixed_err },
            });
        }
    }

    let pivots = piv
        .iter()
        .zip(chosen.iter().zip(chosen_roots))
        .map(|(&k, ((source, poly), roots))| PivotPolynomial {
            coordinate: k + 1,
            source: *source,
            polynomial: poly.display_var(&coord_name(k)),
            real_roots: roots,
        })
        .collect();
    let result = MLEResult::certify(&model, u, p, theta, Method::ClosedForm, 0)?;
    Ok(ClosedFormSolution { result, pivots, discrepancies })
}

fn inconsistent(label: &str, all: Vec<Candidate>) -> Error {
    Error::Inconsistent {
        model: label.to_string(),
        candidates: all.len(),
        residuals: all.iter().map(|c| (c.moment, c.variety)).collect(),
        roots: all.into_iter().map(|c| c.p).collect(),
    }
}

/// Audit line for one printed display against a trusted witness `p`.
#[derive(Debug, Clone, Serialize)]
pub struct DisplayAudit {
    pub display: String,
    /// Coordinate the text assigns (1-based).
    pub labelled: usize,
    /// Relative residual at the labelled coordinate.
    pub residual: f64,
    /// Relative residual of the derived eliminant at the same coordinate.
    pub derived_residual: f64,
    /// Coordinates (1-based) at which the display vanishes.
    pub annihilates: Vec<usize>,
    pub passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<DiscrepancyReport>,
}

/// Evaluates every printed display of `label` at the witness `p`.
pub fn audit_paper_displays(label: &str, u: &DataVector, p: &[f64]) -> Result<Vec<DisplayAudit>> {
    let model = model::named(label)?;
    if p.len() != model.cols() {
        return Err(Error::LengthMismatch { expected: model.cols(), got: p.len() });
    }
    paper_displays(label, u)?
        .into_iter()
        .map(|d| {
            let k = d.labelled - 1;
            let derived = eliminate_to_univariate(&model, u, k)?;
            let residual = relative_residual(&d.poly, p[k]);
            let derived_residual = relative_residual(&derived, p[k]);
            let annihilates = (0..p.len())
                .filter(|&j| relative_residual(&d.poly, p[j]) <= ROOT_TOL)
                .map(|j| j + 1)
                .collect();
            let passes = residual <= ROOT_TOL;
            let discrepancy = (!passes).then(|| DiscrepancyReport {
                model: label.to_string(),
                display: d.name.clone(),
                coordinate: coord_name(k),
                paper_poly: d.poly.display_var(&coord_name(k)),
                derived_poly: derived.display_var(&coord_name(k)),
                witness_phat: p.to_vec(),
                residuals: Residuals { paper: residual, derived: derived_residual },
            });
            Ok(DisplayAudit {
                display: d.name,
                labelled: d.labelled,
                residual,
                derived_residual,
                annihilates,
                passes,
                discrepancy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birch::{solve_birch, SolverOptions};
    use approx::assert_abs_diff_eq;

    fn data(v: &[u64]) -> DataVector {
        DataVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cubic_uniform() {
        let r = mle_closed_form("S3", &data(&[1, 1, 1, 1])).unwrap();
        for x in r.p_hat.iter() {
            assert_abs_diff_eq!(*x, 0.25, epsilon = 1e-12);
        }
        for t in r.theta_hat.iter() {
            assert_abs_diff_eq!(*t, 0.25f64.cbrt(), epsilon = 1e-12);
        }
        assert_eq!(r.method, Method::ClosedForm);
    }

    #[test]
    fn quartic_uniform() {
        let r = mle_closed_form("S4", &data(&[1; 5])).unwrap();
        for x in r.p_hat.iter() {
            assert_abs_diff_eq!(*x, 0.2, epsilon = 1e-12);
        }
    }

    #[test]
    fn agrees_with_newton_and_round_trips() {
        for (label, u) in [
            ("S3", vec![3, 5, 7, 11]),
            ("S4", vec![3, 5, 7, 11, 13]),
            ("S4_A2", vec![3, 5, 7, 11, 13]),
            ("S4_A3", vec![3, 5, 7, 11, 13]),
        ] {
            let u = data(&u);
            let m = model::named(label).unwrap();
            let cf = mle_closed_form(label, &u).unwrap();
            let nb = solve_birch(&m, &u, &SolverOptions::default()).unwrap();
            for (a, b) in cf.p_hat.iter().zip(nb.p_hat.iter()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-8);
            }
            let back = parametrize(&m, &cf.theta_hat).unwrap();
            for (a, b) in back.iter().zip(cf.p_hat.iter()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn printed_cubic_is_replaced_and_reported() {
        let s = solve_closed_form("S3", &data(&[3, 5, 7, 11])).unwrap();
        assert_eq!(s.pivots[0].source, Source::Derived);
        let d = &s.discrepancies[0];
        assert_eq!(d.coordinate, "p1");
        assert!(d.residuals.paper > ROOT_TOL && d.residuals.derived <= ROOT_TOL);
        let v = serde_json::to_value(d).unwrap();
        for key in ["model", "coordinate", "paper_poly", "derived_poly", "witness_phat", "residuals"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn printed_theta_two_is_reported_for_a3() {
        let s = solve_closed_form("S4_A3", &data(&[3, 5, 7, 11, 13])).unwrap();
        assert!(s.discrepancies.iter().any(|d| d.coordinate == "theta2"));
    }

    #[test]
    fn unsupported_model() {
        assert!(matches!(
            mle_closed_form("S5", &data(&[1; 6])),
            Err(Error::Unsupported { .. })
        ));
        assert!(matches!(
            mle_closed_form("S3", &data(&[0, 1, 1, 1])),
            Err(Error::ZeroCount { index: 0 })
        ));
    }

    #[test]
    fn relative_residual_scale_free() {
        let p = UnivariatePolynomial::from_i64(&[-1, 4]);
        assert_eq!(relative_residual(&p, 0.25), 0.0);
        assert!(relative_residual(&p, 0.5) > 0.3);
    }
}
