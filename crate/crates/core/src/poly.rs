//! Exact-rational polynomials.
//!
//! [`MultivariatePolynomial`] is a sparse map from exponent vectors to
//! coefficients; [`UnivariatePolynomial`] is dense, ascending degree. Both keep
//! the invariant that no stored coefficient is zero (trailing zeros trimmed for
//! the dense form).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Best-effort conversion; big magnitudes are scaled before dividing.
pub fn rat_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(n.clone(), d.clone() << (shift as usize))
    } else {
        BigRational::new(n.clone() << ((-shift) as usize), d.clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Sparse polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultivariatePolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The monomial `c * x^exps`.
    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Degree in variable `var` (0 for the zero polynomial).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Coefficients as a polynomial in `var`: entry `k` multiplies `var^k`.
    /// The returned polynomials keep `nvars` but never mention `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultivariatePolynomial> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Substitutes `var = value`; the variable stays in the index space.
    pub fn substitute(&self, var: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            out.add_term(e2, c * value.rpow(k));
        }
        out
    }

    /// Removes variable `var` (which must not occur).
    pub fn drop_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            assert_eq!(e[var], 0, "dropping a variable that still occurs");
            let mut e2 = e.clone();
            e2.remove(var);
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.rpow(k))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Complex evaluation; also returns the sum of term magnitudes, a natural
    /// scale for relative residuals.
    pub fn eval_complex(&self, point: &[Complex64]) -> (Complex64, f64) {
        let mut val = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (e, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (&k, x) in e.iter().zip(point) {
                t *= x.powu(k);
            }
            scale += t.norm();
            val += t;
        }
        (val, scale)
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * rat(e[var] as i64));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Univariate view when only `var` occurs.
    pub fn to_univariate(&self, var: usize) -> Option<UnivariatePolynomial> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(UnivariatePolynomial::new(coeffs))
    }

    /// Embeds a univariate polynomial as a polynomial in variable `var`.
    pub fn from_univariate(p: &UnivariatePolynomial, nvars: usize, var: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Pretty form using the supplied variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = names.get(i).copied().unwrap_or("x");
                    if k == 1 {
                        n.to_string()
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", mag, mono.join("*")),
            };
            parts.push((sign, body));
        }
        let mut s = String::new();
        for (i, (sign, body)) in parts.into_iter().enumerate() {
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(if sign == "-" { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        s
    }
}

/// Exponentiation helper for rationals.
trait RatPow {
    fn rpow(&self, k: u32) -> Rational;
}

impl RatPow for Rational {
    fn rpow(&self, k: u32) -> Rational {
        num_traits::pow::Pow::pow(self, k)
    }
}

impl fmt::Debug for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl<'a> Add<&'a MultivariatePolynomial> for &'a MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn add(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultivariatePolynomial> for &'a MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn sub(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultivariatePolynomial> for &'a MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn mul(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultivariatePolynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn neg(self) -> MultivariatePolynomial {
        self.scale(&-Rational::one())
    }
}

/// Dense univariate polynomial over the rationals, ascending coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    /// `prod (x - r)` for rational roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::new(vec![Rational::one()]), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64().iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    /// Coefficients as f64 after dividing by the largest magnitude, so huge
    /// exact coefficients convert without overflow.
    pub fn to_f64_normalized(&self) -> Vec<f64> {
        let Some(max) = self.coeffs.iter().map(|c| c.abs()).max() else {
            return Vec::new();
        };
        self.coeffs.iter().map(|c| rat_to_f64(&(c / &max))).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let l = l.clone();
                Self::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
            None => self.clone(),
        }
    }

    /// Integer-coefficient primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        Self::new(
            ints.into_iter()
                .map(|c| BigRational::from_integer(c / &g))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * c;
                }
            }
            quo[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quo), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            // keep coefficients from growing between steps
            b = r.primitive();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (characteristic zero).
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) < 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Strips the factor `x^k`; returns `k`.
    pub fn strip_zero_roots(&mut self) -> usize {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..k);
        k
    }

    pub fn display_var(&self, var: &str) -> String {
        let mp = MultivariatePolynomial::from_univariate(self, 1, 0);
        mp.display_with(&[var])
    }
}

impl fmt::Debug for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("x"))
    }
}

impl<'a> Mul<&'a UnivariatePolynomial> for &'a UnivariatePolynomial {
    type Output = UnivariatePolynomial;
    fn mul(self, rhs: &UnivariatePolynomial) -> UnivariatePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePolynomial::new(out)
    }
}
