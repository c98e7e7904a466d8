//! Aberth-Ehrlich simultaneous root iteration.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::UnivariatePolynomial;

pub const MAX_SWEEPS: usize = 500;

/// Roots closer than this (relative to `max(1, |z|)`) are reported as a cluster.
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexRoot {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// False when another root lies within [`CLUSTER_TOL`].
    pub simple: bool,
    /// `|p(z)| / (|c| (1 + |z|)^deg)` on the normalized coefficients.
    pub residual: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// All complex roots of an exact polynomial, certified and cluster-flagged.
pub fn complex_roots(poly: &UnivariatePolynomial) -> Result<Vec<ComplexRoot>> {
    match poly.degree() {
        None | Some(0) => Err(Error::Domain("complex_roots needs degree >= 1".into())),
        Some(_) => {
            let c: Vec<Complex64> = poly
                .to_f64_normalized()
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect();
            let z = aberth(&c)?;
            Ok(classify(&c, z))
        }
    }
}

fn norm2(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Certificate residual `|p(z)| / (|c| (1 + |z|)^n)`.
pub fn certificate(c: &[Complex64], z: Complex64) -> f64 {
    let n = c.len() as i32 - 1;
    horner(c, z).0.norm() / (norm2(c) * (1.0 + z.norm()).powi(n))
}

fn classify(c: &[Complex64], z: Vec<Complex64>) -> Vec<ComplexRoot> {
    (0..z.len())
        .map(|i| {
            let simple = !(0..z.len()).any(|j| {
                j != i && (z[i] - z[j]).norm() <= CLUSTER_TOL * z[i].norm().max(1.0)
            });
            ComplexRoot { value: z[i], simple, residual: certificate(c, z[i]) }
        })
        .collect()
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Newton quotient `p(z) / p'(z)`, through the reversed polynomial when
/// `|z| > 1` so large iterates do not overflow or lose accuracy.
fn newton_quotient(c: &[Complex64], z: Complex64) -> Complex64 {
    if z.norm() <= 1.0 {
        let (p, dp) = horner(c, z);
        return p / dp;
    }
    let n = (c.len() - 1) as f64;
    let y = z.inv();
    let mut q = Complex64::new(0.0, 0.0);
    let mut dq = Complex64::new(0.0, 0.0);
    for &a in c.iter() {
        dq = dq * y + q;
        q = q * y + a;
    }
    // p(z) = z^n q(1/z)  =>  p / p' = z / (n - y q'(y) / q(y))
    z / (n - y * dq / q)
}

/// Roots of a polynomial with complex coefficients (ascending), leading
/// coefficient nonzero.
pub fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::Domain("aberth needs degree >= 1".into()));
    }
    let lead = c[n];
    for a in c.iter_mut() {
        *a /= lead;
    }
    // exact zero roots are split off first
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    let c = &c[zeros..];
    let m = c.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if m == 0 {
        return Ok(out);
    }
    if m == 1 {
        out.push(-c[0] / c[1]);
        return Ok(out);
    }

    let radius = c[0].norm().powf(1.0 / m as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64 + 0.4))
        .collect();
    let mut done = vec![false; m];
    for _ in 0..MAX_SWEEPS {
        for i in 0..m {
            if done[i] {
                continue;
            }
            let ratio = newton_quotient(c, z[i]);
            if !ratio.is_finite() {
                done[i] = true;
                continue;
            }
            let repulse: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulse);
            if w.is_finite() {
                z[i] -= w;
            }
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            out.extend(z);
            return Ok(out);
        }
    }
    // not every correction shrank to rounding level; accept if certified
    let worst = z.iter().map(|&r| certificate(c, r)).fold(0.0, f64::max);
    if worst <= 1e-8 {
        out.extend(z);
        return Ok(out);
    }
    Err(Error::NonConvergence {
        iterations: MAX_SWEEPS,
        residual: worst,
        last_iterate: z.iter().flat_map(|r| [r.re, r.im]).collect(),
    })
}
