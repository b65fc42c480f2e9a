//! Continued-fraction rational approximation `G₁ˡ = 1/(α − G₁ˡ⁻¹)`, `G₁⁰ = 1`.

use num_complex::Complex64;

use super::alpha::AlphaTf;
use super::exact::WaveTransfer;
use crate::error::{Error, Result};
use crate::lti::RationalTf;

pub const DEFAULT_ITERATIONS: usize = 20;
/// Approximants whose denominator degree passes this are rejected.
pub const DEGREE_CAP: usize = 200;

#[derive(Clone, Debug)]
pub struct WaveTfApprox {
    approx: RationalTf,
    iterations: usize,
    alpha: AlphaTf,
}

pub fn g1_cf_approx(alpha: &AlphaTf, l: usize) -> Result<WaveTfApprox> {
    if l == 0 {
        return Err(Error::InvalidConfig(
            "iteration count must be at least 1".into(),
        ));
    }
    let mut g = RationalTf::one();
    for step in 1..=l {
        let d = alpha.tf() - &g;
        if d.is_zero() {
            return Err(Error::DegenerateDenominator { step });
        }
        g = d.inv()?;
        let degree = g.order().max(g.num().degree());
        if degree > DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree,
                cap: DEGREE_CAP,
            });
        }
    }
    Ok(WaveTfApprox {
        approx: g,
        iterations: l,
        alpha: alpha.clone(),
    })
}

impl WaveTfApprox {
    pub fn tf(&self) -> &RationalTf {
        &self.approx
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn alpha(&self) -> &AlphaTf {
        &self.alpha
    }

    /// Runs the recursion on the value `α(s)` instead of on polynomials.
    /// Agrees with the rational form and is better conditioned at large `l`.
    pub fn eval_recursive(&self, s: Complex64) -> Result<Complex64> {
        let a = self.alpha.eval(s)?;
        Ok(recurse_value(a, self.iterations))
    }
}

/// `l` steps of `g ← 1/(α − g)` from `g = 1`.
pub fn recurse_value(alpha: Complex64, l: usize) -> Complex64 {
    (0..l).fold(Complex64::new(1.0, 0.0), |g, _| 1.0 / (alpha - g))
}

impl WaveTransfer for WaveTfApprox {
    fn g1(&self, s: Complex64) -> Result<Complex64> {
        self.approx.eval_at(s)
    }
}
