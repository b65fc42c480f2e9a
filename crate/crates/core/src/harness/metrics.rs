//! Trace metrics: velocity MSE, platoon-wide settling time and noise statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SimulationTrace;

/// Default settling band as a fraction of the reference velocity.
pub const SETTLING_BAND: f64 = 0.05;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mse_velocity: f64,
    pub settling_time: Option<f64>,
    pub mse_pos: f64,
    pub mean_pos: f64,
    pub mse_dist: f64,
    pub max_dist: f64,
    pub collided: bool,
}

impl MetricsReport {
    pub fn from_trace(trace: &SimulationTrace) -> Result<Self> {
        let v_final = *trace.v_ref.last().ok_or(Error::EmptyTrace)?;
        let settling_time = if v_final != 0.0 {
            settling_time(trace, v_final, SETTLING_BAND)?
        } else {
            None
        };
        let noise = noise_metrics(trace)?;
        Ok(Self {
            mse_velocity: mse_velocity(trace)?,
            settling_time,
            ..noise
        })
    }
}

/// Mean over vehicles and samples of `(v_ref(t) − v_n(t))²`.
pub fn mse_velocity(trace: &SimulationTrace) -> Result<f64> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut acc = 0.0;
    for k in 0..trace.len() {
        let r = trace.v_ref[k];
        acc += trace
            .velocities_at(k)
            .iter()
            .map(|v| (r - v).powi(2))
            .sum::<f64>();
    }
    Ok(acc / (trace.len() * trace.vehicles()) as f64)
}

/// First time after which every velocity stays within `band·|v_ref|` of
/// `v_ref` until the end of the trace; `None` if the trace ends outside.
pub fn settling_time(trace: &SimulationTrace, v_ref: f64, band: f64) -> Result<Option<f64>> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if v_ref == 0.0 {
        return Err(Error::InvalidConfig(
            "settling band needs v_ref != 0".into(),
        ));
    }
    let tol = band * v_ref.abs();
    let outside = |k: usize| {
        trace
            .velocities_at(k)
            .iter()
            .any(|v| (v - v_ref).abs() > tol)
    };
    match (0..trace.len()).rev().find(|&k| outside(k)) {
        None => Ok(Some(trace.t[0])),
        Some(k) if k + 1 == trace.len() => Ok(None),
        Some(k) => Ok(Some(trace.t[k + 1])),
    }
}

/// Position and spacing statistics relative to the initial rest pose and the
/// spacing reference in force at each sample.
pub fn noise_metrics(trace: &SimulationTrace) -> Result<MetricsReport> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let n = trace.n_last;
    let rest = trace.positions_at(0).to_vec();
    let (mut sq, mut sum, mut dsq, mut max_dist) = (0.0, 0.0, 0.0, 0.0_f64);
    for k in 0..trace.len() {
        let x = trace.positions_at(k);
        for (xi, ri) in x.iter().zip(&rest) {
            let dev = xi - ri;
            sq += dev * dev;
            sum += dev;
        }
        let d_ref = trace.d_ref[k];
        for i in 0..n {
            dsq += (x[i] - x[i + 1] - d_ref).powi(2);
        }
        max_dist = max_dist.max((x[0] - x[n] - n as f64 * d_ref).abs());
    }
    let samples = (trace.len() * trace.vehicles()) as f64;
    Ok(MetricsReport {
        mse_velocity: 0.0,
        settling_time: None,
        mse_pos: sq / samples,
        mean_pos: sum / samples,
        mse_dist: dsq / (trace.len() * n) as f64,
        max_dist,
        collided: trace.collided,
    })
}
