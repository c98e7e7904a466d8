//! Sylvester resultants over the rationals by evaluation and interpolation.
//!
//! The Sylvester matrix size is fixed by the formal degrees of the inputs, so
//! every specialization gives a value of the same polynomial and no evaluation
//! point needs to be avoided.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, MultivariatePolynomial, Rational};

/// Resultant of `f` and `g` with respect to `var`. The result lives in the
/// same variable space and does not involve `var`.
pub fn sylvester_resultant(
    f: &MultivariatePolynomial,
    g: &MultivariatePolynomial,
    var: usize,
) -> Result<MultivariatePolynomial> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Domain("resultant of a zero polynomial".into()));
    }
    if f.nvars() != g.nvars() || var >= f.nvars() {
        return Err(Error::Domain("resultant inputs live in different spaces".into()));
    }
    let (m, n) = (f.degree_in(var), g.degree_in(var));
    if m == 0 && n == 0 {
        return Err(Error::Domain(format!("neither input involves variable {var}")));
    }
    Ok(resultant_rec(f, g, var, m, n))
}

fn resultant_rec(
    f: &MultivariatePolynomial,
    g: &MultivariatePolynomial,
    var: usize,
    m: u32,
    n: u32,
) -> MultivariatePolynomial {
    let nv = f.nvars();
    let z = (0..nv).find(|&i| i != var && (f.degree_in(i) > 0 || g.degree_in(i) > 0));
    let Some(z) = z else {
        return MultivariatePolynomial::constant(nv, numeric_resultant(f, g, var, m, n));
    };

    let bound = (n * f.degree_in(z) + m * g.degree_in(z)) as usize;
    let points: Vec<Rational> = (0..=bound as i64).map(rat).collect();
    let values: Vec<MultivariatePolynomial> = points
        .iter()
        .map(|t| resultant_rec(&f.substitute(z, t), &g.substitute(z, t), var, m, n))
        .collect();
    interpolate(&points, values, z)
}

/// Newton interpolation in variable `z` with polynomial-valued samples.
fn interpolate(
    points: &[Rational],
    mut dd: Vec<MultivariatePolynomial>,
    z: usize,
) -> MultivariatePolynomial {
    let k = points.len();
    for j in 1..k {
        for i in (j..k).rev() {
            let diff = &dd[i] - &dd[i - 1];
            let den = &points[i] - &points[i - j];
            dd[i] = diff.scale(&(Rational::one() / den));
        }
    }
    let nv = dd[0].nvars();
    let zvar = MultivariatePolynomial::var(nv, z);
    let mut acc = dd[k - 1].clone();
    for i in (0..k - 1).rev() {
        let lin = &zvar - &MultivariatePolynomial::constant(nv, points[i].clone());
        acc = &(&acc * &lin) + &dd[i];
    }
    acc
}

fn numeric_resultant(
    f: &MultivariatePolynomial,
    g: &MultivariatePolynomial,
    var: usize,
    m: u32,
    n: u32,
) -> Rational {
    let coeffs = |p: &MultivariatePolynomial, deg: u32| -> Vec<Rational> {
        let mut c = vec![Rational::zero(); deg as usize + 1];
        for (e, v) in p.terms() {
            c[e[var] as usize] = v.clone();
        }
        c
    };
    let (fc, gc) = (coeffs(f, m), coeffs(g, n));
    let (m, n) = (m as usize, n as usize);
    let size = m + n;
    let mut mat = vec![vec![Rational::zero(); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    rational_determinant(mat)
}

/// Determinant of a rational matrix: rows are scaled to integers and the
/// integer determinant is taken by fraction-free (Bareiss) elimination.
pub fn rational_determinant(mat: Vec<Vec<Rational>>) -> Rational {
    let size = mat.len();
    if size == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = mat
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            row.into_iter()
                .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let det = bareiss(&mut a);
    Rational::new(det, scale)
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
