//! Independent re-derivation of the per-coordinate polynomials.
//!
//! The moment equations `A p = b / N` cut out an affine space of dimension
//! `m - rank A`; pick that many coordinates as free parameters, write every
//! other `p_j` as an exact affine function of them, substitute into the kernel
//! binomials, and eliminate all but `p_k` with a resultant.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intmat;
use crate::mldegree::sylvester_resultant;
use crate::model::{sufficient_statistic, DataVector, ToricModel};
use crate::poly::{rat, rat_to_f64, MultivariatePolynomial, Rational, UnivariatePolynomial};

/// Exact affine parametrization of `{p : A p = b / N}` by chosen free coordinates.
#[derive(Debug, Clone)]
pub struct AffineChart {
    pub free: Vec<usize>,
    /// `p_j = offset[j] + sum_f slopes[j][f] * p_free[f]`.
    pub offset: Vec<Rational>,
    pub slopes: Vec<Vec<Rational>>,
}

impl AffineChart {
    /// Fails when the other coordinates are not determined by the free ones.
    pub fn new(model: &ToricModel, u: &DataVector, free: &[usize]) -> Option<Self> {
        let m = model.cols();
        let b = sufficient_statistic(model, u).ok()?;
        let n = rat(u.sample_size() as i64);
        let bound: Vec<usize> = (0..m).filter(|j| !free.contains(j)).collect();
        if bound.len() != intmat::rank(model.matrix()) {
            return None;
        }
        let a = model.matrix();
        // augmented system: A_bound X = [b/N | -A_free]
        let rows = a.len();
        let width = bound.len() + 1 + free.len();
        let mut mat: Vec<Vec<Rational>> = (0..rows)
            .map(|i| {
                let mut r: Vec<Rational> = bound.iter().map(|&j| rat(a[i][j])).collect();
                r.push(rat(b.0[i]) / &n);
                r.extend(free.iter().map(|&j| -rat(a[i][j])));
                r
            })
            .collect();
        let sol = solve(&mut mat, bound.len(), width)?;

        let mut offset = vec![Rational::zero(); m];
        let mut slopes = vec![vec![Rational::zero(); free.len()]; m];
        for (f, &j) in free.iter().enumerate() {
            slopes[j][f] = Rational::one();
        }
        for (r, &j) in bound.iter().enumerate() {
            offset[j] = sol[r][0].clone();
            for f in 0..free.len() {
                slopes[j][f] = sol[r][1 + f].clone();
            }
        }
        Some(Self { free: free.to_vec(), offset, slopes })
    }

    /// Each `p_j` as a polynomial in the free coordinates.
    pub fn coordinates(&self) -> Vec<MultivariatePolynomial> {
        let nv = self.free.len();
        self.offset
            .iter()
            .zip(&self.slopes)
            .map(|(o, s)| {
                let mut p = MultivariatePolynomial::constant(nv, o.clone());
                for (f, c) in s.iter().enumerate() {
                    p = &p + &MultivariatePolynomial::var(nv, f).scale(c);
                }
                p
            })
            .collect()
    }

    pub fn point(&self, free_values: &[f64]) -> Vec<f64> {
        self.offset
            .iter()
            .zip(&self.slopes)
            .map(|(o, s)| {
                rat_to_f64(o)
                    + s.iter()
                        .zip(free_values)
                        .map(|(c, v)| rat_to_f64(c) * v)
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Gauss-Jordan on a rank-`n` system with extra right-hand columns; returns
/// the `n` solution rows (right-hand part only).
fn solve(mat: &mut [Vec<Rational>], n: usize, width: usize) -> Option<Vec<Vec<Rational>>> {
    let rows = mat.len();
    let mut r = 0;
    for col in 0..n {
        let piv = (r..rows).find(|&i| !mat[i][col].is_zero())?;
        mat.swap(r, piv);
        let inv = Rational::one() / &mat[r][col];
        for c in col..width {
            mat[r][c] = &mat[r][c] * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for c in col..width {
                    let v = &mat[r][c] * &f;
                    mat[i][c] -= v;
                }
            }
        }
        r += 1;
    }
    // leftover rows must be consistent (all zero)
    if mat[r..].iter().any(|row| row.iter().any(|x| !x.is_zero())) {
        return None;
    }
    Some(mat[..n].iter().map(|row| row[n..].to_vec()).collect())
}

fn binomial_poly(
    b: &crate::model::Binomial,
    coords: &[MultivariatePolynomial],
    nv: usize,
) -> MultivariatePolynomial {
    let mono = |e: &[u32]| {
        e.iter().zip(coords).fold(
            MultivariatePolynomial::constant(nv, Rational::one()),
            |acc, (&k, p)| if k == 0 { acc } else { &acc * &p.pow(k) },
        )
    };
    &mono(&b.plus) - &mono(&b.minus)
}

/// Squarefree univariate eliminant in `p_k` (0-based `k`) whose positive real
/// roots include the MLE coordinate.
pub fn eliminate_to_univariate(
    model: &ToricModel,
    u: &DataVector,
    k: usize,
) -> Result<UnivariatePolynomial> {
    if k >= model.cols() {
        return Err(Error::Domain(format!("coordinate {} out of range", k + 1)));
    }
    u.require_positive()?;
    let dim = model.cols() - intmat::rank(model.matrix());
    let unsupported = |reason: &str| Error::Unsupported {
        model: model.label().to_string(),
        reason: reason.to_string(),
    };
    let binomials = model.binomials();
    let raw = match dim {
        1 => {
            let chart = AffineChart::new(model, u, &[k])
                .ok_or_else(|| unsupported("coordinate does not parametrize the moment slice"))?;
            let coords = chart.coordinates();
            binomials
                .iter()
                .map(|b| binomial_poly(b, &coords, 1))
                .find(|p| !p.is_zero())
                .ok_or_else(|| Error::Internal("all binomials vanish on the slice".into()))?
        }
        2 => {
            let chart = (0..model.cols())
                .filter(|&l| l != k)
                .find_map(|l| AffineChart::new(model, u, &[k, l]))
                .ok_or_else(|| unsupported("no coordinate pair parametrizes the moment slice"))?;
            let coords = chart.coordinates();
            let polys: Vec<_> = binomials.iter().map(|b| binomial_poly(b, &coords, 2)).collect();
            eliminate_second(&polys)?
        }
        _ => return Err(unsupported("closed forms need a moment slice of dimension 1 or 2")),
    };
    let uni = raw
        .to_univariate(0)
        .ok_or_else(|| Error::Internal("eliminant still involves the second coordinate".into()))?;
    let out = uni.squarefree_part().primitive();
    match out.degree() {
        Some(d) if (1..=4).contains(&d) => Ok(out),
        d => Err(Error::Internal(format!("eliminant has degree {d:?}, expected 1..=4"))),
    }
}

/// Finds a nonzero eliminant of the second variable from a pair of binomials.
fn eliminate_second(polys: &[MultivariatePolynomial]) -> Result<MultivariatePolynomial> {
    if let Some(p) = polys.iter().find(|p| !p.is_zero() && p.degree_in(1) == 0) {
        return Ok(p.clone());
    }
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let r = sylvester_resultant(&polys[i], &polys[j], 1)?;
            if !r.is_zero() {
                return Ok(r);
            }
        }
    }
    Err(Error::Internal("binomials share a component on the moment slice".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn data(v: &[u64]) -> DataVector {
        DataVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cubic_symmetric_root() {
        let e = eliminate_to_univariate(&ToricModel::s3(), &data(&[1, 1, 1, 1]), 3).unwrap();
        assert!(e.eval(&ratio(1, 4)).is_zero());
        assert!(e.degree().unwrap() <= 3);
    }

    #[test]
    fn quartic_symmetric_root() {
        let e = eliminate_to_univariate(&ToricModel::s4(), &data(&[1; 5]), 4).unwrap();
        assert!(e.eval(&ratio(1, 5)).is_zero());
        assert!(e.degree().unwrap() <= 4);
    }

    #[test]
    fn chart_reproduces_moments() {
        let m = ToricModel::s4_a3();
        let u = data(&[3, 5, 7, 11, 13]);
        let chart = AffineChart::new(&m, &u, &[1, 2]).unwrap();
        let p = chart.point(&[0.1, 0.2]);
        let b = sufficient_statistic(&m, &u).unwrap();
        for (row, bi) in m.matrix().iter().zip(&b.0) {
            let lhs: f64 = row.iter().zip(&p).map(|(&a, x)| a as f64 * x).sum();
            assert!((lhs - *bi as f64 / 39.0).abs() < 1e-14);
        }
    }

    #[test]
    fn too_big_a_slice_is_unsupported() {
        let m = crate::model::named("S5").unwrap();
        assert!(matches!(
            eliminate_to_univariate(&m, &data(&[1; 6]), 0),
            Err(Error::Unsupported { .. })
        ));
    }
}
