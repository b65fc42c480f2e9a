//! Vehicle model, PI controller and the characteristic function `α = 1/(PC) + 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{Polynomial, RationalTf};

/// Gains of the double-integrator-with-damping plant `1/(s² + ξs)` and the PI
/// controller `(k_p s + k_i)/s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VehicleGains {
    pub kp: f64,
    pub ki: f64,
    pub xi: f64,
}

impl Default for VehicleGains {
    fn default() -> Self {
        Self {
            kp: 4.0,
            ki: 4.0,
            xi: 4.0,
        }
    }
}

impl VehicleGains {
    pub fn new(kp: f64, ki: f64, xi: f64) -> Result<Self> {
        let g = Self { kp, ki, xi };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kp.is_finite() && self.ki.is_finite() && self.xi.is_finite()) {
            return Err(Error::InvalidConfig("gains must be finite".into()));
        }
        if self.kp == 0.0 && self.ki == 0.0 {
            return Err(Error::ZeroNumerator);
        }
        Ok(())
    }

    pub fn plant(&self) -> RationalTf {
        RationalTf::new(Polynomial::one(), Polynomial::new(vec![0.0, self.xi, 1.0]))
            .expect("monic denominator")
    }

    pub fn controller(&self) -> RationalTf {
        RationalTf::new(
            Polynomial::new(vec![self.ki, self.kp]),
            Polynomial::monomial(1),
        )
        .expect("monic denominator")
    }

    pub fn alpha(&self) -> Result<AlphaTf> {
        self.validate()?;
        make_alpha(&self.plant(), &self.controller())
    }

    /// `√(ξ/k_i)`, the first-order time constant of `G₁ ≈ 1 − τs` near `s = 0`.
    pub fn tau(&self) -> f64 {
        (self.xi / self.ki).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTf {
    tf: RationalTf,
    excess: RationalTf,
    plant: RationalTf,
    controller: RationalTf,
}

/// `α = 1/(PC) + 2`.
pub fn make_alpha(plant: &RationalTf, controller: &RationalTf) -> Result<AlphaTf> {
    let excess = (plant * controller).inv()?;
    let tf = &excess + 2.0;
    Ok(AlphaTf {
        tf,
        excess,
        plant: plant.clone(),
        controller: controller.clone(),
    })
}

impl AlphaTf {
    pub fn tf(&self) -> &RationalTf {
        &self.tf
    }

    /// `α − 2 = 1/(PC)`, kept separately so that values near `α = 2` do not
    /// lose digits to cancellation.
    pub fn excess(&self) -> &RationalTf {
        &self.excess
    }

    pub fn plant(&self) -> &RationalTf {
        &self.plant
    }

    pub fn controller(&self) -> &RationalTf {
        &self.controller
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        self.tf.eval_at(s)
    }

    pub fn excess_at(&self, s: Complex64) -> Result<Complex64> {
        self.excess.eval_at(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nominal_alpha() {
        let a = VehicleGains::default().alpha().unwrap();
        let den_lead = a.tf().den().leading();
        assert_eq!(den_lead, 1.0);
        // (s³+4s²+8s+8)/(4s+4) after making the denominator monic
        let num: Vec<f64> = a.tf().num().coeffs().iter().map(|c| c * 4.0).collect();
        assert_eq!(num, vec![8.0, 8.0, 4.0, 1.0]);
        assert_eq!(a.tf().den().coeffs(), &[1.0, 1.0]);
        let one = Complex64::new(1.0, 0.0);
        assert!((a.eval(one).unwrap().re - 2.625).abs() < 1e-14);
        assert!((a.eval(Complex64::new(0.0, 0.0)).unwrap().re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unit_loop_gives_three() {
        let p = RationalTf::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
        let c = RationalTf::from_coeffs(&[1.0, 1.0], &[1.0]).unwrap();
        let a = make_alpha(&p, &c).unwrap();
        assert_eq!(a.tf(), &RationalTf::constant(3.0));
    }

    #[test]
    fn zero_loop_rejected() {
        let p = RationalTf::zero();
        let c = VehicleGains::default().controller();
        assert_eq!(make_alpha(&p, &c), Err(Error::ZeroNumerator));
    }
}
