//! Toric (log-linear) models: the matrix `A`, its monomial parametrization,
//! sufficient statistics, defining binomials, and the likelihood.

use std::fmt;
use std::ops::Deref;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat;
use crate::lattice;

/// Nonnegative integer `d x m` matrix with equal column sums.
#[derive(Debug, Clone)]
pub struct ToricModel {
    label: String,
    matrix: Vec<Vec<i64>>,
    column_sum: i64,
    binomials: OnceLock<Vec<Binomial>>,
}

impl PartialEq for ToricModel {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.matrix == other.matrix
    }
}

impl ToricModel {
    pub fn new(label: impl Into<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let label = label.into();
        let d = matrix.len();
        let m = matrix.first().map_or(0, Vec::len);
        if d == 0 || m == 0 {
            return Err(Error::Malformed(format!("model '{label}' has an empty matrix")));
        }
        if matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Malformed(format!("model '{label}' has ragged rows")));
        }
        if matrix.iter().flatten().any(|&a| a < 0) {
            return Err(Error::Malformed(format!("model '{label}' has a negative entry")));
        }
        let sums: Vec<i64> = (0..m).map(|j| matrix.iter().map(|r| r[j]).sum()).collect();
        let column_sum = sums[0];
        if column_sum <= 0 || sums.iter().any(|&s| s != column_sum) {
            return Err(Error::Malformed(format!(
                "model '{label}' needs equal positive column sums, got {sums:?}"
            )));
        }
        Ok(Self {
            label,
            matrix,
            column_sum,
            binomials: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Number of rows `d` (parameters).
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    /// Number of columns `m` (states).
    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn column_sum(&self) -> i64 {
        self.column_sum
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }

    /// Same model with columns reordered: new column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        let matrix = self
            .matrix
            .iter()
            .map(|r| perm.iter().map(|&j| r[j]).collect())
            .collect();
        Self::new(self.label.clone(), matrix)
    }

    /// Lattice basis binomials, computed once.
    pub fn binomials(&self) -> &[Binomial] {
        self.binomials.get_or_init(|| kernel_binomials(self))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "matrix": self.matrix,
            "binomials": self.binomials().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Reads `{label, matrix, binomials?}`; supplied binomials must vanish on the model.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            label: String,
            matrix: Vec<Vec<i64>>,
            #[serde(default)]
            binomials: Vec<String>,
        }
        let doc: Doc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        let model = Self::new(doc.label, doc.matrix)?;
        for s in &doc.binomials {
            let b = Binomial::parse(s, model.cols())?;
            if !b.lies_on(&model) {
                return Err(Error::Malformed(format!(
                    "binomial '{s}' does not vanish on model '{}'",
                    model.label
                )));
            }
        }
        Ok(model)
    }

    /// Cubic surface with three `A_2` points.
    pub fn s3() -> Self {
        Self::new("S3", vec![vec![2, 1, 0, 1], vec![1, 2, 0, 1], vec![0, 0, 3, 1]]).unwrap()
    }

    /// Quartic with four `A_1` points.
    pub fn s4() -> Self {
        Self::new(
            "S4",
            vec![vec![2, 1, 1, 0, 1], vec![1, 2, 0, 1, 1], vec![0, 0, 2, 2, 1]],
        )
        .unwrap()
    }

    /// Quartic with one `A_2` and two `A_1` points.
    pub fn s4_a2() -> Self {
        Self::new(
            "S4_A2",
            vec![vec![2, 1, 0, 1, 1], vec![1, 2, 2, 0, 1], vec![0, 0, 1, 2, 1]],
        )
        .unwrap()
    }

    /// Quartic with one `A_3` and two `A_1` points.
    pub fn s4_a3() -> Self {
        Self::new(
            "S4_A3",
            vec![vec![1, 2, 1, 0, 1], vec![0, 2, 2, 2, 1], vec![3, 0, 1, 2, 2]],
        )
        .unwrap()
    }
}

/// Resolves a model name: `S3`, `S4`, `S4_A2`, `S4_A3` (closed-form models),
/// a tabulated surface name such as `S5'`, or a polygon label such as `7a`.
pub fn named(name: &str) -> Result<ToricModel> {
    match name {
        "S3" => Ok(ToricModel::s3()),
        "S4" => Ok(ToricModel::s4()),
        "S4_A2" => Ok(ToricModel::s4_a2()),
        "S4_A3" => Ok(ToricModel::s4_a3()),
        other => lattice::lookup(other)?.model(),
    }
}

/// Names accepted by [`named`], for usage hints.
pub fn known_names() -> Vec<String> {
    let mut out: Vec<String> = ["S3", "S4", "S4_A2", "S4_A3"].iter().map(|s| s.to_string()).collect();
    for e in lattice::catalog() {
        if let Some(s) = e.surface {
            if !out.iter().any(|o| o == s) {
                out.push(s.to_string());
            }
        }
        out.push(e.label.to_string());
    }
    out
}

/// Observed counts `u` with sample size `N >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DataVector(Vec<u64>);

impl DataVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::Domain("data vector has sample size zero".into()));
        }
        Ok(Self(counts))
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sample_size(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Fails with [`Error::ZeroCount`] on the first zero entry.
    pub fn require_positive(&self) -> Result<()> {
        match self.0.iter().position(|&c| c == 0) {
            Some(index) => Err(Error::ZeroCount { index }),
            None => Ok(()),
        }
    }

    /// Comma or newline separated nonnegative integers.
    pub fn parse(s: &str) -> Result<Self> {
        let counts = s
            .split([',', '\n', '\r'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Malformed(format!("'{t}' is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(counts)
    }

    fn check_len(&self, model: &ToricModel) -> Result<()> {
        if self.len() != model.cols() {
            return Err(Error::LengthMismatch {
                expected: model.cols(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// `b = A u`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SufficientStatistic(pub Vec<i64>);

/// Strictly positive parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(i) = theta.iter().position(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::Domain(format!(
                "parameter {} must be positive and finite, got {}",
                i + 1,
                theta[i]
            )));
        }
        Ok(Self(theta))
    }
}

impl Deref for ParameterVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityDistribution(Vec<f64>);

impl ProbabilityDistribution {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some(i) = p.iter().position(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain(format!("probability {} is {}", i + 1, p[i])));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::Domain(format!("probabilities sum to {s}, not 1")));
        }
        Ok(Self(p))
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ProbabilityDistribution {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `p^plus - p^minus` with disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

impl Binomial {
    /// Splits an integer vector into positive and negative parts.
    pub fn from_kernel_vector(v: &[i64]) -> Self {
        Self {
            plus: v.iter().map(|&x| x.max(0) as u32).collect(),
            minus: v.iter().map(|&x| (-x).max(0) as u32).collect(),
        }
    }

    /// `plus - minus` as an integer vector.
    pub fn exponent_vector(&self) -> Vec<i64> {
        self.plus
            .iter()
            .zip(&self.minus)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.plus.iter().sum::<u32>().max(self.minus.iter().sum())
    }

    /// `A (plus - minus) = 0`.
    pub fn lies_on(&self, model: &ToricModel) -> bool {
        let v = self.exponent_vector();
        v.len() == model.cols()
            && model
                .matrix()
                .iter()
                .all(|r| r.iter().zip(&v).map(|(a, x)| a * x).sum::<i64>() == 0)
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        let mono = |e: &[u32]| {
            e.iter()
                .zip(p)
                .map(|(&k, &x)| x.powi(k as i32))
                .product::<f64>()
        };
        mono(&self.plus) - mono(&self.minus)
    }

    /// Parses `p1*p2*p3 - p4^3` (1-based coordinates out of `m`). Common
    /// factors of the two monomials are cancelled.
    pub fn parse(s: &str, m: usize) -> Result<Self> {
        let bad = || Error::Malformed(format!("cannot parse binomial '{s}'"));
        let (lhs, rhs) = s.split_once('-').ok_or_else(bad)?;
        let side = |t: &str| -> Result<Vec<u32>> {
            let mut e = vec![0u32; m];
            for f in t.split('*').map(str::trim) {
                let f = f.strip_prefix('p').ok_or_else(bad)?;
                let (idx, pow) = match f.split_once('^') {
                    Some((i, k)) => (i, k.trim().parse::<u32>().map_err(|_| bad())?),
                    None => (f, 1),
                };
                let idx: usize = idx.trim().parse().map_err(|_| bad())?;
                if idx == 0 || idx > m {
                    return Err(Error::Malformed(format!(
                        "coordinate p{idx} out of range 1..={m} in '{s}'"
                    )));
                }
                e[idx - 1] += pow;
            }
            Ok(e)
        };
        let (mut plus, mut minus) = (side(lhs)?, side(rhs)?);
        for (a, b) in plus.iter_mut().zip(minus.iter_mut()) {
            let c = (*a).min(*b);
            *a -= c;
            *b -= c;
        }
        Ok(Self { plus, minus })
    }
}

fn fmt_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| match k {
            1 => format!("p{}", i + 1),
            _ => format!("p{}^{}", i + 1, k),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", fmt_monomial(&self.plus), fmt_monomial(&self.minus))
    }
}

/// `p_j = theta^{a_j} / sum_k theta^{a_k}`, evaluated in log space.
pub fn parametrize(model: &ToricModel, theta: &[f64]) -> Result<ProbabilityDistribution> {
    if theta.len() != model.rows() {
        return Err(Error::LengthMismatch {
            expected: model.rows(),
            got: theta.len(),
        });
    }
    let theta = ParameterVector::new(theta.to_vec())?;
    let log_theta: Vec<f64> = theta.iter().map(|t| t.ln()).collect();
    Ok(ProbabilityDistribution(probabilities_from_log(model, &log_theta)))
}

/// Normalized `exp(A^T log_theta)`; shared with the Newton solver.
pub(crate) fn probabilities_from_log(model: &ToricModel, log_theta: &[f64]) -> Vec<f64> {
    let logs: Vec<f64> = (0..model.cols())
        .map(|j| {
            model
                .matrix()
                .iter()
                .zip(log_theta)
                .map(|(r, lt)| r[j] as f64 * lt)
                .sum()
        })
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub fn sufficient_statistic(model: &ToricModel, u: &DataVector) -> Result<SufficientStatistic> {
    u.check_len(model)?;
    Ok(SufficientStatistic(
        model
            .matrix()
            .iter()
            .map(|r| r.iter().zip(u.counts()).map(|(&a, &c)| a * c as i64).sum())
            .collect(),
    ))
}

/// Binomials from a size-reduced lattice basis of `ker A`.
pub fn kernel_binomials(model: &ToricModel) -> Vec<Binomial> {
    intmat::kernel_basis(model.matrix())
        .iter()
        .map(|v| Binomial::from_kernel_vector(v))
        .collect()
}

/// `max |p^plus - p^minus|` over the kernel binomials.
pub fn variety_residual(model: &ToricModel, p: &[f64]) -> Result<f64> {
    if p.len() != model.cols() {
        return Err(Error::LengthMismatch {
            expected: model.cols(),
            got: p.len(),
        });
    }
    if let Some(i) = p.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::Domain(format!(
            "variety residual needs positive coordinates, p{} = {}",
            i + 1,
            p[i]
        )));
    }
    Ok(model
        .binomials()
        .iter()
        .map(|b| b.eval(p).abs())
        .fold(0.0, f64::max))
}

/// `sum u_j log p_j - N log(sum p_j)`, dropping the multinomial coefficient.
///
/// Returns `-inf` when some `p_j = 0` has `u_j > 0`.
pub fn log_likelihood(p: &[f64], u: &DataVector) -> Result<f64> {
    if p.len() != u.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            got: p.len(),
        });
    }
    let total: f64 = p.iter().sum();
    let mut ll = 0.0;
    for (&pj, &uj) in p.iter().zip(u.counts()) {
        if uj == 0 {
            continue;
        }
        if pj <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        ll += uj as f64 * pj.ln();
    }
    Ok(ll - u.sample_size() as f64 * total.ln())
}

/// Order of the finite group of torus elements, modulo scaling, that the
/// parametrization cannot tell apart: the product of the nonzero elementary
/// divisors of the column differences `a_j - a_m`.
pub fn torus_fiber_degree(model: &ToricModel) -> u64 {
    let m = model.cols();
    let last = model.column(m - 1);
    let diffs: Vec<Vec<i64>> = (0..m - 1)
        .map(|j| model.column(j).iter().zip(&last).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        return 1;
    }
    intmat::elementary_divisors(&diffs).iter().product()
}
