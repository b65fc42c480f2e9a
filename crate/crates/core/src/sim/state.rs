//! Platoon state and one fixed-step RK4 tick of the closed-loop dynamics.

use serde::Serialize;

use super::config::{EndServo, PlatoonConfig};
use crate::error::{Error, Result};

/// Divergence guard on vehicle speeds.
pub const MAX_SPEED: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VehicleState {
    pub x: f64,
    pub v: f64,
    /// Integral of the controller's error input.
    pub z: f64,
}

/// Structure-of-arrays state; index 0 is the leader.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlatoonState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub z: Vec<f64>,
}

impl PlatoonState {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn vehicle(&self, n: usize) -> VehicleState {
        VehicleState {
            x: self.x[n],
            v: self.v[n],
            z: self.z[n],
        }
    }

    pub fn distances(&self) -> Vec<f64> {
        self.x.windows(2).map(|w| w[0] - w[1]).collect()
    }
}

/// Evenly spaced vehicles moving at the common velocity `v_ref` with the
/// integrators holding the friction-compensating input. The rear vehicle
/// sits at 0.
pub fn build_platoon(cfg: &PlatoonConfig) -> Result<PlatoonState> {
    cfg.validate()?;
    let n = cfg.n;
    let z0 = if cfg.ki != 0.0 {
        cfg.xi * cfg.v_ref / cfg.ki
    } else {
        0.0
    };
    Ok(PlatoonState {
        x: (0..=n).map(|i| (n - i) as f64 * cfg.d_ref0).collect(),
        v: vec![cfg.v_ref; n + 1],
        z: vec![z0; n + 1],
    })
}

/// A position command that is linear over the current step window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub span: f64,
    pub from: f64,
    pub to: f64,
}

impl Segment {
    pub fn hold(x: f64) -> Self {
        Self {
            t0: 0.0,
            span: 1.0,
            from: x,
            to: x,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.from + (self.to - self.from) * (t - self.t0) / self.span
    }

    pub fn slope(&self) -> f64 {
        (self.to - self.from) / self.span
    }
}

/// What drives an end vehicle during one tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EndInput {
    /// Commanded position, followed according to the configured servo.
    Command(Segment),
    /// Rear-only: PI predecessor following toward the spacing reference.
    Follow { d_ref: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndCommands {
    pub leader: Segment,
    pub rear: EndInput,
}

/// Stage derivatives of one RK4 evaluation.
#[derive(Clone, Debug, Default)]
struct Slopes {
    dx: Vec<f64>,
    dv: Vec<f64>,
    dz: Vec<f64>,
}

impl Slopes {
    fn zeros(n: usize) -> Self {
        Self {
            dx: vec![0.0; n],
            dv: vec![0.0; n],
            dz: vec![0.0; n],
        }
    }
}

/// Reusable buffers for repeated ticks of the same platoon.
#[derive(Clone, Debug, Default)]
pub struct Integrator {
    k: [Slopes; 4],
    stage: Option<PlatoonState>,
}

impl Integrator {
    pub fn new(vehicles: usize) -> Self {
        Self {
            k: std::array::from_fn(|_| Slopes::zeros(vehicles)),
            stage: None,
        }
    }

    /// Advances `state` from `t` to `t + dt`.
    pub fn step(
        &mut self,
        state: &mut PlatoonState,
        cfg: &PlatoonConfig,
        ends: &EndCommands,
        noise: &[f64],
        t: f64,
        dt: f64,
    ) -> Result<()> {
        let len = state.len();
        if self.k[0].dx.len() != len {
            *self = Self::new(len);
        }
        let mut stage = self.stage.take().unwrap_or_else(|| state.clone());
        let offsets = [0.0, 0.5, 0.5, 1.0];
        for (i, offset) in offsets.into_iter().enumerate() {
            if i == 0 {
                stage.clone_from(state);
            } else {
                let h = dt * offset;
                let prev = &self.k[i - 1];
                for n in 0..len {
                    stage.x[n] = state.x[n] + h * prev.dx[n];
                    stage.v[n] = state.v[n] + h * prev.dv[n];
                    stage.z[n] = state.z[n] + h * prev.dz[n];
                }
            }
            derivative(&stage, cfg, ends, noise, t + dt * offset, &mut self.k[i]);
        }
        let [k1, k2, k3, k4] = &self.k;
        for n in 0..len {
            state.x[n] += dt / 6.0 * (k1.dx[n] + 2.0 * k2.dx[n] + 2.0 * k3.dx[n] + k4.dx[n]);
            state.v[n] += dt / 6.0 * (k1.dv[n] + 2.0 * k2.dv[n] + 2.0 * k3.dv[n] + k4.dv[n]);
            state.z[n] += dt / 6.0 * (k1.dz[n] + 2.0 * k2.dz[n] + 2.0 * k3.dz[n] + k4.dz[n]);
        }
        self.stage = Some(stage);

        // commanded ends sit exactly on their path
        let t1 = t + dt;
        if cfg.servo == EndServo::Ideal {
            pin(state, 0, &ends.leader, t1);
            if let EndInput::Command(seg) = ends.rear {
                pin(state, len - 1, &seg, t1);
            }
        }
        check_finite(state, t1)
    }
}

fn pin(state: &mut PlatoonState, n: usize, seg: &Segment, t: f64) {
    state.x[n] = seg.at(t);
    state.v[n] = seg.slope();
}

fn check_finite(state: &PlatoonState, t: f64) -> Result<()> {
    for (n, (x, v)) in state.x.iter().zip(&state.v).enumerate() {
        if !(x.is_finite() && v.is_finite() && v.abs() <= MAX_SPEED) {
            return Err(Error::NonFiniteState { t, vehicle: n });
        }
    }
    Ok(())
}

/// One tick with freshly allocated buffers.
pub fn step(
    state: &mut PlatoonState,
    cfg: &PlatoonConfig,
    ends: &EndCommands,
    noise: &[f64],
    t: f64,
    dt: f64,
) -> Result<()> {
    Integrator::new(state.len()).step(state, cfg, ends, noise, t, dt)
}

fn derivative(
    s: &PlatoonState,
    cfg: &PlatoonConfig,
    ends: &EndCommands,
    noise: &[f64],
    t: f64,
    out: &mut Slopes,
) {
    let last = s.len() - 1;
    let ideal = cfg.servo == EndServo::Ideal;
    let noise_at = |n: usize| noise.get(n).copied().unwrap_or(0.0);
    let pos = |n: usize| -> f64 {
        if ideal && n == 0 {
            return ends.leader.at(t);
        }
        if ideal && n == last {
            if let EndInput::Command(seg) = ends.rear {
                return seg.at(t);
            }
        }
        s.x[n]
    };
    let pi = |n: usize, e: f64, out: &mut Slopes| {
        let u = cfg.kp * e + cfg.ki * s.z[n];
        out.dx[n] = s.v[n];
        out.dv[n] = u - cfg.xi * s.v[n];
        out.dz[n] = e;
    };

    // leader
    if ideal {
        out.dx[0] = ends.leader.slope();
        out.dv[0] = 0.0;
        out.dz[0] = 0.0;
    } else {
        pi(0, ends.leader.at(t) - s.x[0], out);
    }

    for n in 1..last {
        let e = pos(n - 1) - 2.0 * s.x[n] + pos(n + 1) + noise_at(n);
        pi(n, e, out);
    }

    match ends.rear {
        EndInput::Follow { d_ref } => {
            let e = pos(last - 1) - s.x[last] - d_ref + noise_at(last);
            pi(last, e, out);
        }
        EndInput::Command(seg) if ideal => {
            out.dx[last] = seg.slope();
            out.dv[last] = 0.0;
            out.dz[last] = 0.0;
        }
        EndInput::Command(seg) => pi(last, seg.at(t) - s.x[last], out),
    }
}
