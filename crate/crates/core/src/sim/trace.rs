use std::io::Write;

use super::state::PlatoonState;
use crate::boundary::WaveComponents;
use crate::error::{Error, Result};

/// Sampled run of a platoon. Positions and velocities are stored row-major,
/// one row of `n_last + 1` values per sample.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimulationTrace {
    pub n_last: usize,
    pub t: Vec<f64>,
    positions: Vec<f64>,
    velocities: Vec<f64>,
    /// Reference velocity in force at each sample.
    pub v_ref: Vec<f64>,
    /// Reference spacing in force at each sample.
    pub d_ref: Vec<f64>,
    /// Commanded leader and rear positions (NaN when the rear is not commanded).
    pub leader_cmd: Vec<f64>,
    pub rear_cmd: Vec<f64>,
    /// Absorber wave components at control rate.
    pub front_waves: Option<WaveComponents>,
    pub rear_waves: Option<WaveComponents>,
    /// A gap dropped to zero or below while the spacing reference was positive.
    pub collided: bool,
    pub final_state: Option<PlatoonState>,
}

impl SimulationTrace {
    pub fn new(n_last: usize) -> Self {
        Self {
            n_last,
            ..Self::default()
        }
    }

    pub fn vehicles(&self) -> usize {
        self.n_last + 1
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn push_sample(
        &mut self,
        t: f64,
        state: &PlatoonState,
        v_ref: f64,
        d_ref: f64,
        cmds: (f64, f64),
    ) {
        self.t.push(t);
        self.positions.extend_from_slice(&state.x);
        self.velocities.extend_from_slice(&state.v);
        self.v_ref.push(v_ref);
        self.d_ref.push(d_ref);
        self.leader_cmd.push(cmds.0);
        self.rear_cmd.push(cmds.1);
    }

    pub fn positions_at(&self, k: usize) -> &[f64] {
        let w = self.vehicles();
        &self.positions[k * w..(k + 1) * w]
    }

    pub fn velocities_at(&self, k: usize) -> &[f64] {
        let w = self.vehicles();
        &self.velocities[k * w..(k + 1) * w]
    }

    pub fn position(&self, k: usize, n: usize) -> f64 {
        self.positions[k * self.vehicles() + n]
    }

    pub fn velocity(&self, k: usize, n: usize) -> f64 {
        self.velocities[k * self.vehicles() + n]
    }

    /// `x_n − x_{n+1}` at sample `k`.
    pub fn distance(&self, k: usize, n: usize) -> f64 {
        self.position(k, n) - self.position(k, n + 1)
    }

    pub fn position_series(&self, n: usize) -> Vec<f64> {
        (0..self.len()).map(|k| self.position(k, n)).collect()
    }

    pub fn velocity_series(&self, n: usize) -> Vec<f64> {
        (0..self.len()).map(|k| self.velocity(k, n)).collect()
    }

    /// Index of the first sample at or after `t`.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        self.t.iter().position(|s| *s >= t - 1e-9)
    }

    /// CSV with columns `t, x0..xN, v0..vN, d0..d(N-1)`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let mut out = csv::Writer::from_writer(w);
        let n = self.n_last;
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((0..=n).map(|i| format!("x{i}")))
            .chain((0..=n).map(|i| format!("v{i}")))
            .chain((0..n).map(|i| format!("d{i}")))
            .collect();
        out.write_record(&header)?;
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for k in 0..self.len() {
            row.clear();
            row.push(self.t[k].to_string());
            row.extend(self.positions_at(k).iter().map(|v| v.to_string()));
            row.extend(self.velocities_at(k).iter().map(|v| v.to_string()));
            row.extend((0..n).map(|i| self.distance(k, i).to_string()));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}
