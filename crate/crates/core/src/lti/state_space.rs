//! Controllable canonical realizations and exact sampling of impulse responses.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::balance::balance_in_place;
use super::rational::RationalTf;
use crate::error::{Error, Result};

/// Real-part slack, relative to `max(1, |p|)`, used when classifying poles.
pub const POLE_REAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

/// Whether poles on the imaginary axis are acceptable for sampling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MarginalPoles {
    #[default]
    Forbid,
    Allow,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: RowDVector<f64>, d: f64) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.len() != n || c.len() != n {
            return Err(Error::InvalidConfig(format!(
                "state-space dimensions disagree: A {}x{}, B {}, C {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// `C (sI - A)^{-1} B + D`, solved on the balanced realization: companion
    /// matrices are badly conditioned well above their pole magnitudes.
    pub fn eval_at(&self, s: Complex64) -> Result<Complex64> {
        if self.order() == 0 {
            return Ok(Complex64::new(self.d, 0.0));
        }
        self.balanced().resolvent_at(s)
    }

    fn resolvent_at(&self, s: Complex64) -> Result<Complex64> {
        let n = self.order();
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let diag = if i == j { s } else { Complex64::new(0.0, 0.0) };
            diag - self.a[(i, j)]
        });
        let b = self.b.map(|x| Complex64::new(x, 0.0));
        let x = m
            .lu()
            .solve(&b)
            .ok_or(Error::PoleAtProbe { re: s.re, im: s.im })?;
        let y = self
            .c
            .iter()
            .zip(x.iter())
            .fold(Complex64::new(0.0, 0.0), |acc, (c, x)| acc + *c * x);
        Ok(y + self.d)
    }

    /// Diagonal similarity `D^{-1} A D` that equalizes row and column norms.
    pub fn balanced(&self) -> Self {
        let mut a = self.a.clone();
        let d = balance_in_place(&mut a);
        let b = DVector::from_fn(self.b.len(), |i, _| self.b[i] / d[i]);
        let c = RowDVector::from_fn(self.c.len(), |_, j| self.c[j] * d[j]);
        Self { a, b, c, d: self.d }
    }
}

/// Controllable canonical form: companion `A` with the negated denominator in
/// its last row, `B = e_n`, `C` holding the strictly proper numerator.
pub fn to_state_space(tf: &RationalTf) -> Result<StateSpace> {
    if !tf.is_proper() {
        return Err(Error::ImproperTf {
            num: tf.num().degree(),
            den: tf.den().degree(),
        });
    }
    let den = tf.den().coeffs();
    let n = den.len() - 1;
    let mut num = tf.num().coeffs().to_vec();
    num.resize(n + 1, 0.0);
    let d = num[n];
    let strict: Vec<f64> = (0..n).map(|i| num[i] - d * den[i]).collect();

    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        if n > 0 {
            a[(n - 1, j)] = -den[j];
        }
    }
    let mut b = DVector::<f64>::zeros(n);
    if n > 0 {
        b[n - 1] = 1.0;
    }
    let c = RowDVector::from_vec(strict);
    StateSpace::new(a, b, c, d)
}

/// Rejects poles that the policy does not admit.
fn check_poles(tf: &RationalTf, marginal: MarginalPoles) -> Result<()> {
    for p in tf.poles() {
        let slack = POLE_REAL_TOL * p.norm().max(1.0);
        let bad = match marginal {
            MarginalPoles::Forbid => p.re >= -slack,
            MarginalPoles::Allow => p.re > slack,
        };
        if bad {
            return Err(Error::UnstablePoles { real_part: p.re });
        }
    }
    Ok(())
}

/// Samples `h(k/fs)` for `k = 0..=floor(T fs)` of a strictly proper transfer
/// function, propagating the realization with `exp(A/fs)`.
pub fn impulse_response(
    tf: &RationalTf,
    fs: f64,
    horizon: f64,
    marginal: MarginalPoles,
) -> Result<Vec<f64>> {
    if !(fs > 0.0 && fs.is_finite()) || !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "sampling needs fs > 0 and T >= 0 (got fs={fs}, T={horizon})"
        )));
    }
    if !tf.is_strictly_proper() {
        return Err(Error::ImproperTf {
            num: tf.num().degree(),
            den: tf.den().degree(),
        });
    }
    let samples = (horizon * fs + 1e-9).floor() as usize + 1;
    if tf.is_zero() {
        return Ok(vec![0.0; samples]);
    }
    check_poles(tf, marginal)?;
    let ss = to_state_space(tf)?.balanced();
    let step = (&ss.a / fs).exp();
    let mut x = ss.b.clone();
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        out.push(ss.c.dot(&x.transpose()));
        x = &step * &x;
    }
    Ok(out)
}
