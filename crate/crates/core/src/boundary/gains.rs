//! DC couplings between spacing references and end-vehicle velocities, and
//! the ramp slopes derived from them.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lti::limit::{origin_limit, origin_limit_at, OriginLimit};
use crate::wave::{g1_minus_one_from_excess, AlphaTf};

/// Real-axis values of `α(s) − 2` and `G₁(s) − 1`, exact rather than from the
/// approximant (which is flat to second order at the origin).
fn excess_and_deficit(alpha: &AlphaTf, s: f64) -> (f64, Complex64) {
    let eps = alpha
        .excess_at(Complex64::new(s, 0.0))
        .unwrap_or(Complex64::new(f64::NAN, 0.0));
    (eps.re, g1_minus_one_from_excess(eps))
}

/// Limit of `G₁ᴺ·s(G₁ − 1)/(α − 2)` as `s → 0`, the velocity the leader gains
/// per meter of reference spacing.
pub fn kappa_front(alpha: &AlphaTf, n: usize) -> Result<OriginLimit> {
    if n == 0 {
        return Err(Error::InvalidConfig("platoon needs N >= 1".into()));
    }
    origin_limit(|s| {
        let (eps, d) = excess_and_deficit(alpha, s);
        let g = 1.0 + d;
        (g.powi(n as i32) * s * d / eps).re
    })
}

/// Limit of `(1/s)(1 − G₁)` as `s → 0`.
pub fn kappa_rear(alpha: &AlphaTf) -> Result<OriginLimit> {
    origin_limit(|s| rear_integrand(alpha, s))
}

/// Same limit from probes one decade closer to the origin, to check that the
/// extrapolation has settled.
pub fn kappa_rear_refined(alpha: &AlphaTf) -> Result<OriginLimit> {
    origin_limit_at(|s| rear_integrand(alpha, s), 1e-7, 1e-8)
}

fn rear_integrand(alpha: &AlphaTf, s: f64) -> f64 {
    let (_, d) = excess_and_deficit(alpha, s);
    (-d / s).re
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GainReport {
    pub kappa_front: f64,
    pub kappa_rear: f64,
    pub v_ref: f64,
    pub d_ref: f64,
    pub w0: f64,
    pub wr: f64,
}

/// `w₀ = (v_ref − κ_f d_ref)/2` and `w_r = (v_ref − κ_r d_ref)/2`.
pub fn ramp_slopes(v_ref: f64, d_ref: f64, kappa_front: f64, kappa_rear: f64) -> GainReport {
    GainReport {
        kappa_front,
        kappa_rear,
        v_ref,
        d_ref,
        w0: 0.5 * (v_ref - kappa_front * d_ref),
        wr: 0.5 * (v_ref - kappa_rear * d_ref),
    }
}

/// Both κ values for a gain set.
pub fn kappas(alpha: &AlphaTf) -> Result<(f64, f64)> {
    Ok((kappa_front(alpha, 1)?.value, kappa_rear(alpha)?.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::VehicleGains;

    fn alpha(ki: f64, xi: f64) -> AlphaTf {
        VehicleGains::new(4.0, ki, xi).unwrap().alpha().unwrap()
    }

    #[test]
    fn front_gain_closed_form() {
        for (ki, xi) in [(4.0, 4.0), (1.0, 4.0), (9.0, 4.0)] {
            let k = kappa_front(&alpha(ki, xi), 1).unwrap().value;
            assert!((k + (ki / xi).sqrt()).abs() < 1e-3, "ki={ki} xi={xi}: {k}");
        }
    }

    #[test]
    fn front_gain_independent_of_length() {
        let a = alpha(4.0, 4.0);
        let k1 = kappa_front(&a, 1).unwrap().value;
        let k5 = kappa_front(&a, 5).unwrap().value;
        assert!((k1 - k5).abs() < 1e-6);
    }

    #[test]
    fn rear_gain() {
        assert!((kappa_rear(&alpha(4.0, 4.0)).unwrap().value - 1.0).abs() < 1e-3);
        assert!((kappa_rear(&alpha(1.0, 4.0)).unwrap().value - 2.0).abs() < 1e-2);
        let a = alpha(9.0, 4.0);
        let coarse = kappa_rear(&a).unwrap().value;
        let fine = kappa_rear_refined(&a).unwrap().value;
        assert!((coarse - fine).abs() < 1e-2);
    }

    #[test]
    fn slopes() {
        assert_eq!(ramp_slopes(1.0, 1.0, -1.0, 1.0).w0, 1.0);
        assert_eq!(ramp_slopes(1.0, 0.0, -1.0, 1.0).w0, 0.5);
        assert_eq!(ramp_slopes(1.0, 1.0, -1.0, 1.0).wr, 0.0);
    }
}
