//! Frequency responses on `jω` grids.

use num_complex::Complex64;

use super::rational::RationalTf;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyResponse {
    omegas: Vec<f64>,
    values: Vec<Complex64>,
}

impl FrequencyResponse {
    pub fn new(omegas: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        validate_grid(&omegas)?;
        if omegas.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} frequencies but {} values",
                omegas.len(),
                values.len()
            )));
        }
        Ok(Self { omegas, values })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.arg()).collect()
    }

    /// Peak magnitude and the frequency where it occurs.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.omegas
            .iter()
            .zip(&self.values)
            .map(|(w, v)| (*w, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

pub fn validate_grid(omegas: &[f64]) -> Result<()> {
    if let Some(w) = omegas.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidGrid(format!("frequency {w} is not positive")));
    }
    if let Some(pair) = omegas.windows(2).find(|p| p[1] <= p[0]) {
        return Err(Error::InvalidGrid(format!(
            "frequencies not strictly increasing at {} -> {}",
            pair[0], pair[1]
        )));
    }
    Ok(())
}

/// `n` log-spaced frequencies from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::InvalidGrid(format!(
            "log grid needs 0 < lo < hi and n >= 2 (got {lo}, {hi}, {n})"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    Ok(grid)
}

/// Evaluates any `s ↦ H(s)` map along the imaginary axis.
pub fn freq_response_with<F>(omegas: &[f64], mut h: F) -> Result<FrequencyResponse>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    validate_grid(omegas)?;
    let values = omegas
        .iter()
        .map(|&w| h(Complex64::new(0.0, w)))
        .collect::<Result<Vec<_>>>()?;
    FrequencyResponse::new(omegas.to_vec(), values)
}

pub fn freq_response(tf: &RationalTf, omegas: &[f64]) -> Result<FrequencyResponse> {
    freq_response_with(omegas, |s| tf.eval_at(s))
}
