//! Rational transfer functions `num(s)/den(s)` with a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Relative root distance under which a numerator and denominator root are
/// treated as a common factor.
pub const CANCEL_ROOT_TOL: f64 = 1e-8;

/// Root-based cancellation is skipped above this combined degree; companion
/// eigenvalues of very high degree polynomials are too inaccurate to match.
const CANCEL_DEGREE_LIMIT: usize = 260;

/// `|den(s)|` below this fraction of its coefficient scale counts as a pole hit.
pub const POLE_PROBE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalTf {
    num: Polynomial,
    den: Polynomial,
}

impl RationalTf {
    /// Normalized and reduced `num/den`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        let tf = Self::new_unreduced(num, den)?;
        Ok(tf.reduced())
    }

    /// Normalizes to a monic denominator without cancelling common factors.
    pub fn new_unreduced(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let lead = den.leading();
        Ok(Self {
            num: num.scaled(1.0 / lead),
            den: den.scaled(1.0 / lead),
        })
    }

    /// Convenience constructor from ascending coefficient slices.
    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn constant(c: f64) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// The Laplace variable `s` itself.
    pub fn s() -> Self {
        Self {
            num: Polynomial::monomial(1),
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Denominator degree (the order of a minimal realization, when reduced).
    pub fn order(&self) -> usize {
        self.den.degree()
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.den.roots()
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        self.num.roots()
    }

    /// Removes common powers of `s` and common roots.
    pub fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let k = self.num.lowest_order().min(self.den.lowest_order());
        if k > 0 {
            self.num = self.num.shift_down(k);
            self.den = self.den.shift_down(k);
        }
        if let Some(c) = proportional(&self.num, &self.den) {
            return Self::constant(c);
        }
        if self.num.degree() == 0
            || self.den.degree() == 0
            || self.num.degree() + self.den.degree() > CANCEL_DEGREE_LIMIT
        {
            return self.renormalized();
        }
        let common = common_roots(&self.num.roots(), &self.den.roots());
        for r in &common {
            self.num = self.num.deflate(*r);
            self.den = self.den.deflate(*r);
        }
        self.renormalized()
    }

    fn renormalized(self) -> Self {
        let lead = self.den.leading();
        if lead == 1.0 {
            return self;
        }
        Self {
            num: self.num.scaled(1.0 / lead),
            den: self.den.scaled(1.0 / lead),
        }
    }

    /// Numerator and denominator swapped.
    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroNumerator);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval_at(&self, s: Complex64) -> Result<Complex64> {
        let d = self.den.eval(s);
        if d.norm() <= POLE_PROBE_TOL * self.den.magnitude_scale(s) {
            return Err(Error::PoleAtProbe { re: s.re, im: s.im });
        }
        Ok(self.num.eval(s) / d)
    }

    /// Limit as `s → 0`, from the lowest-order nonzero coefficients once
    /// common powers of `s` are cancelled.
    pub fn dc_gain(&self) -> Result<f64> {
        if self.num.is_zero() {
            return Ok(0.0);
        }
        let kn = self.num.lowest_order();
        let kd = self.den.lowest_order();
        match kn.cmp(&kd) {
            std::cmp::Ordering::Less => Err(Error::InfiniteDcGain),
            std::cmp::Ordering::Greater => Ok(0.0),
            std::cmp::Ordering::Equal => Ok(self.num.coeffs()[kn] / self.den.coeffs()[kd]),
        }
    }
}

/// `Some(c)` when `num = c·den` coefficient-wise.
fn proportional(num: &Polynomial, den: &Polynomial) -> Option<f64> {
    if num.degree() != den.degree() {
        return None;
    }
    let c = num.leading() / den.leading();
    let scale = num.scale().max(den.scale() * c.abs());
    let close = num
        .coeffs()
        .iter()
        .zip(den.coeffs())
        .all(|(a, b)| (a - c * b).abs() <= 1e-12 * scale);
    close.then_some(c)
}

/// Roots shared by both lists to relative tolerance [`CANCEL_ROOT_TOL`].
/// Complex pairs are reported once, by the member with positive imaginary part.
fn common_roots(num_roots: &[Complex64], den_roots: &[Complex64]) -> Vec<Complex64> {
    let snap = |r: Complex64| {
        if r.im.abs() <= 1e-10 * r.norm().max(1.0) {
            Complex64::new(r.re, 0.0)
        } else {
            r
        }
    };
    let mut used = vec![false; den_roots.len()];
    let den: Vec<Complex64> = den_roots.iter().copied().map(snap).collect();
    let mut out = Vec::new();
    for r in num_roots.iter().copied().map(snap) {
        if r.im < 0.0 {
            continue;
        }
        let tol = CANCEL_ROOT_TOL * r.norm().max(1.0);
        let hit = den
            .iter()
            .enumerate()
            .filter(|(i, d)| !used[*i] && (**d - r).norm() <= tol)
            .min_by(|a, b| (*a.1 - r).norm().total_cmp(&(*b.1 - r).norm()))
            .map(|(i, _)| i);
        if let Some(i) = hit {
            used[i] = true;
            if r.im != 0.0 {
                // consume the conjugate partner too
                if let Some(j) = den
                    .iter()
                    .enumerate()
                    .filter(|(j, d)| !used[*j] && (**d - r.conj()).norm() <= tol)
                    .map(|(j, _)| j)
                    .next()
                {
                    used[j] = true;
                }
            }
            let mid = (r + den[i]) * 0.5;
            out.push(if r.im == 0.0 {
                Complex64::new(mid.re, 0.0)
            } else {
                mid
            });
        }
    }
    out
}

pub fn tf_add(a: &RationalTf, b: &RationalTf) -> RationalTf {
    a + b
}

pub fn tf_mul(a: &RationalTf, b: &RationalTf) -> RationalTf {
    a * b
}

pub fn tf_inv(a: &RationalTf) -> Result<RationalTf> {
    a.inv()
}

pub fn eval_at(a: &RationalTf, s: Complex64) -> Result<Complex64> {
    a.eval_at(s)
}

pub fn dc_gain(a: &RationalTf) -> Result<f64> {
    a.dc_gain()
}

impl Add for &RationalTf {
    type Output = RationalTf;
    fn add(self, rhs: &RationalTf) -> RationalTf {
        let (num, den) = if self.den == rhs.den {
            (&self.num + &rhs.num, self.den.clone())
        } else {
            (
                &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                &self.den * &rhs.den,
            )
        };
        RationalTf::new(num, den).expect("product of nonzero denominators is nonzero")
    }
}

impl Add<f64> for &RationalTf {
    type Output = RationalTf;
    fn add(self, rhs: f64) -> RationalTf {
        self + &RationalTf::constant(rhs)
    }
}

impl Sub for &RationalTf {
    type Output = RationalTf;
    fn sub(self, rhs: &RationalTf) -> RationalTf {
        self + &(-rhs)
    }
}

impl Sub<f64> for &RationalTf {
    type Output = RationalTf;
    fn sub(self, rhs: f64) -> RationalTf {
        self + (-rhs)
    }
}

impl Neg for &RationalTf {
    type Output = RationalTf;
    fn neg(self) -> RationalTf {
        RationalTf {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalTf {
    type Output = RationalTf;
    fn mul(self, rhs: &RationalTf) -> RationalTf {
        RationalTf::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators is nonzero")
    }
}

impl Mul<f64> for &RationalTf {
    type Output = RationalTf;
    fn mul(self, rhs: f64) -> RationalTf {
        if rhs == 0.0 {
            return RationalTf::zero();
        }
        RationalTf {
            num: self.num.scaled(rhs),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalTf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
