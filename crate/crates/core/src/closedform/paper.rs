//! The printed univariate polynomials for the cubic and the three quartics,
//! transcribed as displayed, typos included. Nothing here is trusted: the
//! audit checks each display against the elimination oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DataVector;
use crate::poly::{rat, MultivariatePolynomial as MP, Rational, UnivariatePolynomial};

/// One displayed equation.
#[derive(Debug, Clone, Serialize)]
pub struct PaperDisplay {
    pub model: &'static str,
    /// Short name of the display, such as `"S4_A2 quartic labelled p1"`.
    pub name: String,
    /// Coordinate the text says the display determines (1-based).
    pub labelled: usize,
    /// Coordinate the display is written in (1-based); differs from
    /// `labelled` where the printed variable name disagrees with the text.
    pub variable: usize,
    #[serde(skip)]
    pub poly: UnivariatePolynomial,
}

fn x() -> MP {
    MP::var(1, 0)
}

fn c(r: Rational) -> MP {
    MP::constant(1, r)
}

fn finish(p: MP) -> UnivariatePolynomial {
    p.to_univariate(0).expect("single-variable polynomial")
}

fn counts(u: &DataVector, m: usize) -> Result<Vec<Rational>> {
    if u.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: u.len() });
    }
    Ok(u.counts().iter().map(|&k| rat(k as i64)).collect())
}

/// Every display printed for a model, in the order they appear.
pub fn paper_displays(model: &str, u: &DataVector) -> Result<Vec<PaperDisplay>> {
    match model {
        "S3" => cubic(u),
        "S4" => s4(u),
        "S4_A2" => s4_a2(u),
        "S4_A3" => s4_a3(u),
        other => Err(Error::Unsupported {
            model: other.to_string(),
            reason: "no printed closed form".into(),
        }),
    }
}

/// The display the text assigns to coordinate `k` (1-based), if any.
pub fn paper_polynomial(model: &str, u: &DataVector, k: usize) -> Result<Option<PaperDisplay>> {
    Ok(paper_displays(model, u)?.into_iter().find(|d| d.labelled == k))
}

fn cubic(u: &DataVector) -> Result<Vec<PaperDisplay>> {
    let u = counts(u, 4)?;
    let n: Rational = u.iter().sum();
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let mut out = Vec::new();
    for k in 0..3 {
        let (i, j) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let s = rat(3) * &u[k] + &u[3];
        let c2 = (&n - rat(28) * &s) / (rat(28) * &n);
        let c1 = ((&u[i] - &u[k]) * (&u[j] - &u[k]) - rat(9) * &s * &s) / (rat(28) * &n2);
        let c0 = (&s * &s * &s) / (rat(28) * &n3);
        let p = UnivariatePolynomial::new(vec![-c0, c1, -c2, rat(1)]);
        out.push(PaperDisplay {
            model: "S3",
            name: format!("S3 cubic for p{}", k + 1),
            labelled: k + 1,
            variable: k + 1,
            poly: p,
        });
    }
    Ok(out)
}

fn s4(u: &DataVector) -> Result<Vec<PaperDisplay>> {
    let u = counts(u, 5)?;
    let n: Rational = u.iter().sum();
    let n2 = &n * &n;
    let (u1, u2, u3, u4, u5) = (&u[0], &u[1], &u[2], &u[3], &u[4]);
    let two = rat(2);

    let side = |delta: Rational, prod: Rational| {
        let a = &(&x().pow(2) - &(&x() * &c((rat(4) * &n + &delta) / &n))) + &c(prod / &n2);
        let b = &x().pow(2) - &(&x() * &c(&delta / &n));
        let l = &(&x() * &c(rat(4))) - &c((&two * &n + &two * &delta) / &n);
        finish(&a.pow(2) - &(&b * &l.pow(2)))
    };
    let p1 = side(
        u1 - u4,
        (&two * u1 + &two * u2 + u5) * (&two * u1 + &two * u3 + u5),
    );
    let p2 = side(
        u2 - u3,
        (&two * u1 + &two * u2 + u5) * (&two * u2 + &two * u4 + u5),
    );
    let k = (&two * u1 + &two * u2 + u5) * (&two * u3 + &two * u4 + u5) / &n2
        + (&two * u1 - &two * u4) * (&n + u2 - u3) / &n2;
    let a = &(&x().pow(2) - &(&x() * &c(two.clone()))) + &c(k);
    let b = &c(two.clone()) - &(&x() * &c(two.clone()));
    let e = &c((u1 - u4) / &n2) + &(&x().pow(2) * &c(rat(4)));
    let p5 = finish(&a.pow(2) - &(&b.pow(2) * &e));

    Ok(vec![
        PaperDisplay { model: "S4", name: "S4 quartic for p1".into(), labelled: 1, variable: 1, poly: p1 },
        PaperDisplay { model: "S4", name: "S4 quartic for p2".into(), labelled: 2, variable: 2, poly: p2 },
        PaperDisplay { model: "S4", name: "S4 quartic for p5".into(), labelled: 5, variable: 5, poly: p5 },
    ])
}

fn s4_a2(u: &DataVector) -> Result<Vec<PaperDisplay>> {
    let u = counts(u, 5)?;
    let n: Rational = u.iter().sum();
    let n2 = &n * &n;
    let (u1, u2, u3, u4, u5) = (&u[0], &u[1], &u[2], &u[3], &u[4]);
    let xx = rat(3) * u1 + rat(2) * u2 + u5;
    let y = u1 - u3;
    let z = u1 + u2 - u4;
    let w = rat(3) * u3 + rat(2) * u2 + u5;
    let r = |k: i64| c(rat(k));

    // printed as the equation for p1, written in p2
    let a = &(&(&r(9) * &x().pow(2)) + &(&x() * &c((rat(4) * &xx - rat(6) * &y) / &n)))
        + &c(&y * &y / &n2);
    let b = &(&r(16) * &x()) + &c((rat(6) * &xx - rat(9) * &y) / &n);
    let d = &(&(&r(33) * &x().pow(2))
        + &(&x() * &c((rat(23) * &xx - rat(43) * &y + &z) / &n)))
        + &c(&w * &w / &n2);
    let q1 = finish(&(&a * &b.pow(2)) - &d.pow(2));

    // printed as the equation for p2, written in p1
    let a = &(&x().pow(2) + &(&x() * &c((rat(8) * &y - rat(6) * &xx) / &n))) + &c(&xx * &xx / &n2);
    let b = &(&r(19) * &x()) + &c((rat(2) * &z - rat(7) * &xx) / &n);
    let d = &(&(&r(3) * &x().pow(2))
        + &(&x() * &c((rat(12) * &y - rat(8) * &xx - rat(6) * &z) / &n)))
        + &c((&w * &w + rat(2) * &w * &z) / &n2);
    let q2 = finish(&(&a * &b.pow(2)) - &d.pow(2));

    // a5..e4 with the printed index slips read as the p5 coefficients
    let uu = (u1 + rat(2) * u4 + u5) / &n;
    let vv = (u3 + rat(2) * u4 + u5) / &n;
    let ww = (u2 - rat(3) * u4 - u5) / &n;
    let s = &uu + &vv + &ww;
    let a5 = rat(51);
    let b5 = rat(-35) * &s - rat(4) * &vv;
    let c5 = &s * (rat(9) * &uu + rat(36) * &vv + &ww) + rat(75) * &uu * &ww - rat(8) * &vv * &vv;
    let d5 = rat(-3) * &s * (rat(12) * &uu * &ww + (rat(6) * &vv + rat(6) * &ww + rat(4) * &vv) * &vv)
        - rat(3) * &uu * &vv * &ww;
    let e5 = rat(3) * &uu * &ww * (rat(9) * &uu * &ww + (rat(6) * &uu + rat(6) * &ww + rat(4) * &vv) * &vv);
    let q5 = UnivariatePolynomial::new(vec![e5, d5, c5, b5, a5]);

    Ok(vec![
        PaperDisplay { model: "S4_A2", name: "S4_A2 quartic labelled p1".into(), labelled: 1, variable: 2, poly: q1 },
        PaperDisplay { model: "S4_A2", name: "S4_A2 quartic labelled p2".into(), labelled: 2, variable: 1, poly: q2 },
        PaperDisplay { model: "S4_A2", name: "S4_A2 quartic for p5".into(), labelled: 5, variable: 5, poly: q5 },
    ])
}

fn s4_a3(u: &DataVector) -> Result<Vec<PaperDisplay>> {
    let u = counts(u, 5)?;
    let n: Rational = u.iter().sum();
    let (u1, u2, u3, u4, u5) = (&u[0], &u[1], &u[2], &u[3], &u[4]);
    let uu = (rat(2) * u3 + u5) / &n;
    let v = (u1 - u4) / &n;
    let w = (rat(2) * u2 + u4 + u5) / &n;
    let u2_ = &uu * &uu;
    let u4_ = &u2_ * &u2_;

    let p2 = UnivariatePolynomial::new(vec![
        u4_.clone(),
        (&w - &uu) * (&w + &v - &uu) - rat(2) * &u2_ * (rat(3) * &uu + &v - &w),
        rat(-4) * &u2_ + rat(4) * (&uu - &w) * (rat(3) * &w - rat(5) * &uu + rat(2) * &v)
            - rat(2) * (&w + &v - &uu) * (&w + &v - &uu),
        rat(76) * &w - rat(92) * &uu + rat(16) * &v,
        rat(-40),
    ]);
    let p3 = UnivariatePolynomial::new(vec![
        u4_.clone(),
        -(&u2_ * (rat(7) * &uu + rat(2) * &v + &w)),
        rat(6) * &u2_ + (rat(4) * &uu + &v) * (rat(3) * &uu + &v + &w),
        rat(-2) * (rat(10) * &uu + rat(3) * &v + rat(2) * &w),
        rat(10),
    ]);
    let p5 = UnivariatePolynomial::new(vec![
        &u4_ + rat(2) * &uu * &v * (&uu * &v + &w * &uu),
        rat(-4) * &u2_ * &uu - rat(2) * &v * (&u2_ + rat(2) * &uu * &v + rat(2) * &w * &uu),
        rat(6) * &u2_ + (rat(2) * &v - rat(4) * &uu) * (&v + &w),
        rat(6) * &v + rat(4) * &w,
        rat(5),
    ]);

    Ok(vec![
        PaperDisplay { model: "S4_A3", name: "S4_A3 quartic for p2".into(), labelled: 2, variable: 2, poly: p2 },
        PaperDisplay { model: "S4_A3", name: "S4_A3 quartic for p3".into(), labelled: 3, variable: 3, poly: p3 },
        PaperDisplay { model: "S4_A3", name: "S4_A3 quartic for p5".into(), labelled: 5, variable: 5, poly: p5 },
    ])
}
