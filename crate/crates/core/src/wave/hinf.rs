//! Grid checks of `‖G₁‖∞ ≤ 1`.

use num_complex::Complex64;
use serde::Serialize;

use super::exact::WaveTransfer;
use crate::error::{Error, Result};
use crate::lti::freq::validate_grid;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HinfReport {
    /// Largest `|G₁(jω)|` on the grid and where it occurs.
    pub max_mag: f64,
    pub argmax: f64,
    /// Smallest `|G₂(jω)| = 1/|G₁(jω)|`.
    pub min_g2: f64,
    /// Magnitude at the lowest grid frequency.
    pub low_end_mag: f64,
    /// Same maximum for a comparison evaluator, typically the approximant.
    pub compare_max: Option<f64>,
}

pub fn check_hinf_bound(
    g: &dyn WaveTransfer,
    compare: Option<&dyn WaveTransfer>,
    omegas: &[f64],
) -> Result<HinfReport> {
    if omegas.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    validate_grid(omegas)?;
    let mags = magnitudes(g, omegas)?;
    let (argmax, max_mag) = omegas
        .iter()
        .copied()
        .zip(mags.iter().copied())
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    let min_g2 = mags.iter().map(|m| 1.0 / m).fold(f64::INFINITY, f64::min);
    let compare_max = compare
        .map(|c| magnitudes(c, omegas).map(|m| m.into_iter().fold(0.0, f64::max)))
        .transpose()?;
    Ok(HinfReport {
        max_mag,
        argmax,
        min_g2,
        low_end_mag: mags[0],
        compare_max,
    })
}

fn magnitudes(g: &dyn WaveTransfer, omegas: &[f64]) -> Result<Vec<f64>> {
    omegas
        .iter()
        .map(|&w| g.g1(Complex64::new(0.0, w)).map(|v| v.norm()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::log_grid;
    use crate::wave::{ExactWave, VehicleGains};

    #[test]
    fn nominal_bound() {
        let exact = ExactWave::new(VehicleGains::default().alpha().unwrap());
        let grid = log_grid(1e-3, 1e3, 1000).unwrap();
        let r = check_hinf_bound(&exact, None, &grid).unwrap();
        assert!(r.max_mag <= 1.0 + 1e-9);
        assert!(r.min_g2 >= 1.0 - 1e-9);
        assert!((r.low_end_mag - 1.0).abs() < 2e-3);
    }

    #[test]
    fn empty_grid() {
        let exact = ExactWave::new(VehicleGains::default().alpha().unwrap());
        assert!(check_hinf_bound(&exact, None, &[]).is_err());
    }
}
