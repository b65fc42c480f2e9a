//! Pointwise evaluation of the wave transfer function from `α(s)`.

use num_complex::Complex64;

use super::alpha::AlphaTf;
use crate::error::Result;

/// Anything that can produce `G₁(s)` at a complex frequency.
pub trait WaveTransfer: Sync {
    fn g1(&self, s: Complex64) -> Result<Complex64>;
}

/// Root of `G² − αG + 1 = 0` with `|G| ≤ 1`. When both roots lie on the unit
/// circle the one with non-positive imaginary part is returned.
pub fn g1_exact(alpha: Complex64) -> Complex64 {
    g1_from_excess(alpha - 2.0)
}

/// Same root, parameterized by `ε = α − 2`. The roots are
/// `1 + (ε ± √(ε(ε+4)))/2`; the small one is taken as the reciprocal of the
/// large one, which stays accurate as `ε → 0`.
pub fn g1_from_excess(eps: Complex64) -> Complex64 {
    let r = (eps * (eps + 4.0)).sqrt();
    let a = 1.0 + (eps + r) * 0.5;
    let b = 1.0 + (eps - r) * 0.5;
    let (na, nb) = (a.norm(), b.norm());
    if (na - nb).abs() <= 1e-12 * na.max(nb) {
        return if a.im <= b.im { a } else { b };
    }
    if na > nb {
        1.0 / a
    } else {
        1.0 / b
    }
}

/// `G₁ − 1` from `ε = α − 2` without subtracting nearly equal numbers.
pub fn g1_minus_one_from_excess(eps: Complex64) -> Complex64 {
    let r = (eps * (eps + 4.0)).sqrt();
    let da = (eps + r) * 0.5;
    let db = (eps - r) * 0.5;
    let (a, b) = (1.0 + da, 1.0 + db);
    let (na, nb) = (a.norm(), b.norm());
    if (na - nb).abs() <= 1e-12 * na.max(nb) {
        return if a.im <= b.im { da } else { db };
    }
    // 1/big − 1 = −(big − 1)/big
    if na > nb {
        -da / a
    } else {
        -db / b
    }
}

/// `G₂ = 1/G₁ = α − G₁`.
pub fn g2_exact(alpha: Complex64) -> Complex64 {
    1.0 / g1_exact(alpha)
}

/// `G₁(s)` evaluated through `α(s)` without any rational approximation.
#[derive(Clone, Debug)]
pub struct ExactWave {
    alpha: AlphaTf,
}

impl ExactWave {
    pub fn new(alpha: AlphaTf) -> Self {
        Self { alpha }
    }

    pub fn alpha(&self) -> &AlphaTf {
        &self.alpha
    }
}

impl WaveTransfer for ExactWave {
    fn g1(&self, s: Complex64) -> Result<Complex64> {
        Ok(g1_from_excess(self.alpha.excess_at(s)?))
    }
}
