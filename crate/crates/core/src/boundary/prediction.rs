//! Wave-model transfer functions from the platoon ends to vehicle `n`.

use num_complex::Complex64;
use serde::Serialize;

use super::variant::Variant;
use crate::error::{Error, Result};
use crate::lti::RationalTf;
use crate::wave::WaveTransfer;

/// `(Σ cᵢ G^{pᵢ}) / (1 + G^q)`, the denominator present only when `q` is set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaveExpr {
    pub terms: Vec<(f64, u32)>,
    pub denom_power: Option<u32>,
}

impl WaveExpr {
    fn poly(terms: Vec<(f64, u32)>) -> Self {
        Self {
            terms,
            denom_power: None,
        }
    }

    pub fn eval(&self, g: Complex64) -> Complex64 {
        let num = self
            .terms
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, (c, p)| {
                acc + *c * g.powu(*p)
            });
        match self.denom_power {
            Some(q) => num / (1.0 + g.powu(q)),
            None => num,
        }
    }

    pub fn eval_with(&self, g: &dyn WaveTransfer, s: Complex64) -> Result<Complex64> {
        Ok(self.eval(g.g1(s)?))
    }

    pub fn max_power(&self) -> u32 {
        let t = self.terms.iter().map(|(_, p)| *p).max().unwrap_or(0);
        t.max(self.denom_power.unwrap_or(0))
    }

    /// The expression as a rational function of a rational `G`. Fails when the
    /// resulting degree would pass `degree_cap`.
    pub fn to_rational(&self, g: &RationalTf, degree_cap: usize) -> Result<RationalTf> {
        let degree = g.order().max(g.num().degree()) * self.max_power() as usize;
        if degree > degree_cap {
            return Err(Error::DegreeOverflow {
                degree,
                cap: degree_cap,
            });
        }
        let mut powers = vec![RationalTf::one()];
        for _ in 0..self.max_power() {
            let next = powers.last().expect("non-empty") * g;
            powers.push(next);
        }
        let num = self.terms.iter().fold(RationalTf::zero(), |acc, (c, p)| {
            &acc + &(&powers[*p as usize] * *c)
        });
        match self.denom_power {
            Some(q) => Ok(&num * &(&powers[q as usize] + 1.0).inv()?),
            None => Ok(num),
        }
    }
}

/// Response of vehicle `n` to the front input (`X₀` or the leader reference)
/// and, when the rear is commanded, to the rear position `X_N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainPrediction {
    pub variant: Variant,
    pub n_last: usize,
    pub n: usize,
    pub from_front: WaveExpr,
    pub from_rear: Option<WaveExpr>,
}

/// Wave-model prediction for vehicle `n` of a platoon with last index `n_last`.
///
/// * none: `X_n/X₀ = (Gⁿ + G^{2N+1−n})/(1 + G^{2N+1})`
/// * front: `X_n/X_ref = Gⁿ + G^{2N+1−n}`
/// * rear: `X_n = GⁿX₀ + (G^{N−n} − G^{N+n})X_N`
/// * two-sided: `X_n = GⁿX₀ + G^{N−n}X_N`
pub fn chain_tf_prediction(n_last: usize, variant: Variant, n: usize) -> Result<ChainPrediction> {
    if n_last == 0 {
        return Err(Error::InvalidConfig("platoon needs N >= 1".into()));
    }
    if n > n_last {
        return Err(Error::IndexOutOfRange {
            index: n,
            last: n_last,
        });
    }
    let (nn, k) = (n_last as u32, n as u32);
    let (from_front, from_rear) = match variant {
        Variant::None => (
            WaveExpr {
                terms: vec![(1.0, k), (1.0, 2 * nn + 1 - k)],
                denom_power: Some(2 * nn + 1),
            },
            None,
        ),
        Variant::Front => (WaveExpr::poly(vec![(1.0, k), (1.0, 2 * nn + 1 - k)]), None),
        Variant::Rear => (
            WaveExpr::poly(vec![(1.0, k)]),
            Some(WaveExpr::poly(vec![(1.0, nn - k), (-1.0, nn + k)])),
        ),
        Variant::TwoSided => (
            WaveExpr::poly(vec![(1.0, k)]),
            Some(WaveExpr::poly(vec![(1.0, nn - k)])),
        ),
    };
    Ok(ChainPrediction {
        variant,
        n_last,
        n,
        from_front,
        from_rear,
    })
}
