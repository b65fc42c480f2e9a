//! Real-coefficient polynomials in the Laplace variable, ascending powers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// A sum whose magnitude is below this multiple of machine epsilon times the
/// operand magnitudes is treated as exact cancellation.
const CANCEL_EPS: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, dropping zero leading
    /// terms. An empty or all-zero input yields the zero polynomial `[0]`.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `s^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { coeffs: c }
    }

    /// Monic polynomial with the given roots. Complex roots must come in
    /// conjugate pairs for the result to be real; imaginary residue is dropped.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            acc = next;
        }
        Self::new(acc.into_iter().map(|c| c.re).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn eval_real(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// Σ |c_i| |s|^i, the magnitude scale against which `eval` is compared.
    pub fn magnitude_scale(&self, s: Complex64) -> f64 {
        let r = s.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * r + c.abs())
    }

    /// Index of the lowest nonzero coefficient. The zero polynomial reports 0.
    pub fn lowest_order(&self) -> usize {
        self.coeffs.iter().position(|c| *c != 0.0).unwrap_or(0)
    }

    /// Divides by `s^k`, discarding the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k > self.degree() {
            return Self::zero();
        }
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Roots from the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.leading();
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        super::balance::balance_in_place(&mut comp);
        comp.complex_eigenvalues().iter().copied().collect()
    }

    /// Synthetic division by `(s - r)` (real root) or by the quadratic
    /// `(s - r)(s - conj r)` (complex root). The remainder is dropped.
    pub fn deflate(&self, r: Complex64) -> Self {
        if r.im == 0.0 {
            self.div_monic(&[-r.re, 1.0])
        } else {
            self.div_monic(&[r.norm_sqr(), -2.0 * r.re, 1.0])
        }
    }

    /// Quotient by a monic divisor (ascending coefficients).
    fn div_monic(&self, divisor: &[f64]) -> Self {
        let dn = divisor.len() - 1;
        let n = self.degree();
        if n < dn {
            return Self::zero();
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![0.0; n - dn + 1];
        for k in (0..=n - dn).rev() {
            let c = rem[k + dn];
            q[k] = c;
            for (j, d) in divisor.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
        Self::new(q)
    }
}

impl Default for Polynomial {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<f64> for Polynomial {
    fn from(c: f64) -> Self {
        Self::constant(c)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0.0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0.0);
                let sum = a + b;
                if sum.abs() <= CANCEL_EPS * (a.abs() + b.abs()) {
                    0.0
                } else {
                    sum
                }
            })
            .collect();
        Polynomial::new(c)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 && !(self.is_zero() && i == 0) {
                continue;
            }
            if !first {
                write!(f, " {} ", if *c < 0.0 { '-' } else { '+' })?;
            } else if *c < 0.0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}s")?,
                _ => write!(f, "{a}s^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_polynomial_is_single_zero() {
        assert_eq!(Polynomial::new(vec![]).coeffs(), &[0.0]);
        assert_eq!(Polynomial::new(vec![0.0, 0.0]).coeffs(), &[0.0]);
        assert!(Polynomial::zero().is_zero());
    }

    #[test]
    fn trims_leading_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.leading(), 2.0);
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::new(vec![1.0, 1.0]); // s+1
        let b = Polynomial::new(vec![2.0, 1.0]); // s+2
        assert_eq!((&a * &b).coeffs(), &[2.0, 3.0, 1.0]);
        assert_eq!((&a + &b).coeffs(), &[3.0, 2.0]);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn roots_and_deflation() {
        let p = Polynomial::from_roots(&[
            Complex64::new(-1.0, 0.0),
            Complex64::new(-2.0, 3.0),
            Complex64::new(-2.0, -3.0),
        ]);
        let mut r = p.roots();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - Complex64::new(-2.0, -3.0)).norm() < 1e-10);
        assert!((r[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-10);
        let q = p.deflate(Complex64::new(-2.0, 3.0));
        assert_eq!(q.degree(), 1);
        assert!((q.coeffs()[0] - 1.0).abs() < 1e-12);
        let q = p.deflate(Complex64::new(-1.0, 0.0));
        assert!((q.coeffs()[0] - 13.0).abs() < 1e-12);
    }

    #[test]
    fn addition_snaps_rounding_residue_to_zero() {
        let a = Polynomial::new(vec![0.1 + 0.2, 1.0]);
        let b = Polynomial::new(vec![-0.3, 2.0]);
        let c = &a + &b;
        assert_eq!(c.lowest_order(), 1);
        assert_eq!(c.shift_down(1).coeffs(), &[3.0]);
    }

    #[test]
    fn wide_dynamic_range_is_kept() {
        let p = Polynomial::new(vec![4e23, 1e12, 1.0]);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn display() {
        let p = Polynomial::new(vec![8.0, 8.0, 4.0, 1.0]);
        assert_eq!(p.to_string(), "1s^3 + 4s^2 + 8s + 8");
    }
}
