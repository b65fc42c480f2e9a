//! Numeric limits at the origin for expressions with removable singularities.

use crate::error::{Error, Result};

pub const COARSE_PROBE: f64 = 1e-6;
pub const FINE_PROBE: f64 = 1e-7;
/// Largest accepted gap between the two probe values.
pub const SETTLE_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OriginLimit {
    pub value: f64,
    pub at_coarse: f64,
    pub at_fine: f64,
}

/// Linear Richardson extrapolation of `f(s)` to `s = 0` from `s = 1e-6` and
/// `s = 1e-7`.
pub fn origin_limit<F: Fn(f64) -> f64>(f: F) -> Result<OriginLimit> {
    origin_limit_at(f, COARSE_PROBE, FINE_PROBE)
}

pub fn origin_limit_at<F: Fn(f64) -> f64>(f: F, coarse: f64, fine: f64) -> Result<OriginLimit> {
    let (a, b) = (f(coarse), f(fine));
    if !(a.is_finite() && b.is_finite()) || (a - b).abs() > SETTLE_TOL * a.abs().max(1.0) {
        return Err(Error::ExtrapolationMismatch {
            at_coarse: a,
            at_fine: b,
        });
    }
    let value = (coarse * b - fine * a) / (coarse - fine);
    Ok(OriginLimit {
        value,
        at_coarse: a,
        at_fine: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_linear_term() {
        let lim = origin_limit(|s| 3.0 + 2.0 * s).unwrap();
        assert!((lim.value - 3.0).abs() < 1e-15);
    }

    #[test]
    fn sinc_like() {
        let lim = origin_limit(|s: f64| s.sin() / s).unwrap();
        assert!((lim.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn divergent_is_reported() {
        assert!(matches!(
            origin_limit(|s| 1.0 / s),
            Err(Error::ExtrapolationMismatch { .. })
        ));
    }
}
