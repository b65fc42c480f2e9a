//! End-of-platoon reflection laws as rational transfer functions.

use crate::error::{Error, Result};
use crate::lti::RationalTf;
use crate::wave::WaveTfApprox;

/// Forced (commanded) end: `A₁ = G₁X₀ − G₁²B₁`. Returns `(G₁, −G₁²)`.
pub fn forced_end_reflection_tf(approx: &WaveTfApprox) -> (RationalTf, RationalTf) {
    let g = approx.tf().clone();
    let reflected = -&(&g * &g);
    (g, reflected)
}

/// Free end with a spacing reference: `B_N = G₁A_N + (G₁ − 1)/(α − 2)·D_ref`.
/// Returns `(G₁, (G₁ − 1)/(α − 2))`.
pub fn free_end_reflection_tf(approx: &WaveTfApprox) -> Result<(RationalTf, RationalTf)> {
    let g = approx.tf().clone();
    let excess = approx.alpha().excess();
    if excess.is_zero() {
        return Err(Error::DegenerateDenominator { step: 0 });
    }
    let spacing = &(&g - 1.0) * &excess.inv()?;
    Ok((g, spacing))
}
