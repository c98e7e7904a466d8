//! Cardano and Ferrari in complex arithmetic, each root polished by Newton.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::UnivariatePolynomial;

/// Roots of a cubic with exact coefficients.
pub fn solve_cubic(poly: &UnivariatePolynomial) -> Result<[Complex64; 3]> {
    match poly.degree() {
        Some(3) => {
            let c = poly.to_f64_normalized();
            Ok(cubic_roots([c[0], c[1], c[2], c[3]]))
        }
        d => Err(Error::Domain(format!("solve_cubic needs degree 3, got {d:?}"))),
    }
}

/// Roots of a quartic with exact coefficients.
pub fn solve_quartic(poly: &UnivariatePolynomial) -> Result<[Complex64; 4]> {
    match poly.degree() {
        Some(4) => {
            let c = poly.to_f64_normalized();
            Ok(quartic_roots([c[0], c[1], c[2], c[3], c[4]]))
        }
        d => Err(Error::Domain(format!("solve_quartic needs degree 4, got {d:?}"))),
    }
}

/// All roots of a polynomial of degree 1 to 4 (ascending coefficients).
pub fn roots_up_to_quartic(poly: &UnivariatePolynomial) -> Result<Vec<Complex64>> {
    let c = poly.to_f64_normalized();
    match poly.degree() {
        Some(1) => Ok(vec![Complex64::new(-c[0] / c[1], 0.0)]),
        Some(2) => Ok(quadratic(
            Complex64::new(c[2], 0.0),
            Complex64::new(c[1], 0.0),
            Complex64::new(c[0], 0.0),
        )
        .iter()
        .map(|&z| polish(&c, z))
        .collect()),
        Some(3) => Ok(solve_cubic(poly)?.to_vec()),
        Some(4) => Ok(solve_quartic(poly)?.to_vec()),
        d => Err(Error::Domain(format!("closed-form rooting needs degree 1..=4, got {d:?}"))),
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// A few Newton steps, each kept only if it lowers `|p(z)|`.
fn polish(c: &[f64], mut z: Complex64) -> Complex64 {
    let (mut pz, mut dz) = horner(c, z);
    for _ in 0..8 {
        if dz.norm() == 0.0 || pz.norm() == 0.0 {
            break;
        }
        let next = z - pz / dz;
        let (pn, dn) = horner(c, next);
        if !(pn.norm() < pz.norm()) {
            break;
        }
        z = next;
        pz = pn;
        dz = dn;
    }
    z
}

fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Cardano on `c0 + c1 x + c2 x^2 + c3 x^3`.
pub fn cubic_roots(c: [f64; 4]) -> [Complex64; 3] {
    let (a, b, cc) = (c[2] / c[3], c[1] / c[3], c[0] / c[3]);
    // x = t - a/3 gives t^3 + p t + q
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
    let shift = Complex64::new(-a / 3.0, 0.0);
    let disc = Complex64::new(q * q / 4.0 + p * p * p / 27.0, 0.0).sqrt();
    let half_q = Complex64::new(-q / 2.0, 0.0);
    let s = if (half_q + disc).norm() >= (half_q - disc).norm() {
        half_q + disc
    } else {
        half_q - disc
    };
    let big = s.powf(1.0 / 3.0);
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [shift; 3];
    if big.norm() > 0.0 {
        let mut w = Complex64::new(1.0, 0.0);
        for r in out.iter_mut() {
            let cw = big * w;
            *r = cw - p / (3.0 * cw) + shift;
            w *= omega;
        }
    }
    out.map(|z| polish(&c, z))
}

/// Ferrari on `c0 + c1 x + ... + c4 x^4`, with the resolvent cubic from [`cubic_roots`].
pub fn quartic_roots(c: [f64; 5]) -> [Complex64; 4] {
    let (a, b, cc, d) = (c[3] / c[4], c[2] / c[4], c[1] / c[4], c[0] / c[4]);
    // x = y - a/4 gives y^4 + p y^2 + q y + r
    let p = b - 3.0 * a * a / 8.0;
    let q = a * a * a / 8.0 - a * b / 2.0 + cc;
    let r = -3.0 * a.powi(4) / 256.0 + a * a * b / 16.0 - a * cc / 4.0 + d;
    let shift = Complex64::new(-a / 4.0, 0.0);
    let scale = 1.0 + p.abs() + q.abs().sqrt() + r.abs().sqrt();

    let ys: [Complex64; 4] = if q.abs() <= 1e-14 * scale * scale.sqrt() {
        let zs = quadratic(
            Complex64::new(1.0, 0.0),
            Complex64::new(p, 0.0),
            Complex64::new(r, 0.0),
        );
        let (s0, s1) = (zs[0].sqrt(), zs[1].sqrt());
        [s0, -s0, s1, -s1]
    } else {
        // 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0
        let ms = cubic_roots([-q * q, 2.0 * p * p - 8.0 * r, 8.0 * p, 8.0]);
        let m = ms
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        let s = (2.0 * m).sqrt();
        let one = Complex64::new(1.0, 0.0);
        let base = p / 2.0 + m;
        let t = q / (2.0 * s);
        let r1 = quadratic(one, s, base - t);
        let r2 = quadratic(one, -s, base + t);
        [r1[0], r1[1], r2[0], r2[1]]
    };
    ys.map(|y| polish(&c, y + shift))
}

/// Real parts of roots whose imaginary part is at most `1e-9 (1 + |z|)`.
pub fn real_roots(roots: &[Complex64]) -> Vec<f64> {
    roots
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.norm()))
        .map(|z| z.re)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ratio, UnivariatePolynomial};

    fn residual_ok(poly: &UnivariatePolynomial, roots: &[Complex64]) {
        let c = poly.to_f64();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let deg = c.len() as i32 - 1;
        for &z in roots {
            let (v, _) = horner(&c, z);
            assert!(
                v.norm() <= 1e-10 * norm * z.norm().max(1.0).powi(deg),
                "residual {} at {z}",
                v.norm()
            );
        }
    }

    fn contains(roots: &[Complex64], z: Complex64, tol: f64) -> bool {
        roots.iter().any(|r| (r - z).norm() <= tol)
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = UnivariatePolynomial::from_i64(&[-1, 0, 0, 1]);
        let r = solve_cubic(&p).unwrap();
        residual_ok(&p, &r);
        let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        for z in [Complex64::new(1.0, 0.0), w, w.conj()] {
            assert!(contains(&r, z, 1e-12));
        }
    }

    #[test]
    fn triple_root() {
        let p = UnivariatePolynomial::from_i64(&[-1, 3, -3, 1]);
        let r = solve_cubic(&p).unwrap();
        for z in r {
            assert!((z - 1.0).norm() < 1e-5);
        }
    }

    #[test]
    fn cubic_with_rational_roots() {
        let p = UnivariatePolynomial::from_roots(&[ratio(1, 4), ratio(2, 1), ratio(-3, 1)]);
        let r = solve_cubic(&p).unwrap();
        residual_ok(&p, &r);
        for x in [0.25, 2.0, -3.0] {
            assert!(contains(&r, Complex64::new(x, 0.0), 1e-12));
        }
        let mut re = real_roots(&r);
        re.sort_by(f64::total_cmp);
        assert_eq!(re.len(), 3);
    }

    #[test]
    fn quartic_roots_of_unity() {
        let p = UnivariatePolynomial::from_i64(&[-1, 0, 0, 0, 1]);
        let r = solve_quartic(&p).unwrap();
        residual_ok(&p, &r);
        for z in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            assert!(contains(&r, Complex64::new(z.0, z.1), 1e-12));
        }
    }

    #[test]
    fn double_imaginary_pair() {
        let p = UnivariatePolynomial::from_i64(&[1, 0, 2, 0, 1]);
        let r = solve_quartic(&p).unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(r.iter().filter(|z| (*z - i).norm() < 1e-6).count(), 2);
        assert_eq!(r.iter().filter(|z| (*z + i).norm() < 1e-6).count(), 2);
    }

    #[test]
    fn quartic_with_double_root_and_vieta() {
        let roots = [ratio(1, 5), ratio(1, 5), ratio(3, 1), ratio(-2, 1)];
        let p = UnivariatePolynomial::from_roots(&roots);
        let r = solve_quartic(&p).unwrap();
        residual_ok(&p, &r);
        let sum: Complex64 = r.iter().sum();
        let prod: Complex64 = r.iter().product();
        assert!((sum - 1.4).norm() < 1e-9);
        assert!((prod - (-0.24)).norm() < 1e-9);
        assert!(contains(&r, Complex64::new(3.0, 0.0), 1e-12));
        assert!(contains(&r, Complex64::new(-2.0, 0.0), 1e-12));
        assert!(contains(&r, Complex64::new(0.2, 0.0), 1e-7));
    }

    #[test]
    fn wrong_degree_is_a_domain_error() {
        let p = UnivariatePolynomial::from_i64(&[1, 1]);
        assert!(matches!(solve_cubic(&p), Err(Error::Domain(_))));
        assert!(matches!(solve_quartic(&p), Err(Error::Domain(_))));
    }
}
