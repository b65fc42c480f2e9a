//! Scenario driver: control-rate absorber updates around RK4 integration.

use std::sync::Arc;

use super::config::PlatoonConfig;
use super::noise::{inject_noise, noise_rng};
use super::scenario::{Command, ScenarioSpec};
use super::state::{build_platoon, EndCommands, EndInput, Integrator, Segment};
use super::trace::SimulationTrace;
use crate::boundary::{kappas, FrontAbsorber, Ramp, RearAbsorber};
use crate::error::Result;
use crate::wave::{g1_cf_approx, g1_fir, WaveFir};

/// Everything an absorber needs that depends only on gains and filter settings.
#[derive(Clone, Debug)]
pub struct WaveFilters {
    pub fir: WaveFir,
    pub fir_squared: WaveFir,
    pub kappa_front: f64,
    pub kappa_rear: f64,
}

impl WaveFilters {
    pub fn build(cfg: &PlatoonConfig) -> Result<Self> {
        cfg.validate()?;
        let alpha = cfg.gains().alpha()?;
        let approx = g1_cf_approx(&alpha, cfg.l)?;
        let fir = g1_fir(&approx, cfg.fs_ctrl, cfg.truncate)?;
        let fir_squared = fir.squared()?;
        let (kappa_front, kappa_rear) = kappas(&alpha)?;
        Ok(Self {
            fir,
            fir_squared,
            kappa_front,
            kappa_rear,
        })
    }
}

pub fn run_scenario(cfg: &PlatoonConfig, scenario: &ScenarioSpec) -> Result<SimulationTrace> {
    let filters = if scenario.variant.front_absorbs() || scenario.variant.rear_absorbs() {
        Some(Arc::new(WaveFilters::build(cfg)?))
    } else {
        None
    };
    run_scenario_with(cfg, scenario, filters.as_deref())
}

/// As [`run_scenario`], reusing prebuilt filters (required for absorbing variants).
pub fn run_scenario_with(
    cfg: &PlatoonConfig,
    scenario: &ScenarioSpec,
    filters: Option<&WaveFilters>,
) -> Result<SimulationTrace> {
    cfg.validate()?;
    scenario.validate()?;
    let variant = scenario.variant;
    let needs_filters = variant.front_absorbs() || variant.rear_absorbs();
    let filters = match (needs_filters, filters) {
        (true, Some(f)) => Some(f),
        (true, None) => {
            return Err(crate::Error::InvalidConfig(
                "absorbing variants need wave filters".into(),
            ))
        }
        (false, _) => None,
    };
    let n = cfg.n;
    let dt = cfg.dt;
    let m = cfg.substeps();
    let tc = dt * m as f64;
    let ticks = (scenario.duration / tc).round() as usize;
    let record_every = scenario
        .record_interval
        .map(|r| ((r / dt).round() as usize).max(1))
        .unwrap_or(1);

    let mut state = build_platoon(cfg)?;
    let x_init = state.x.clone();
    let v0 = cfg.v_ref;
    let equilibrium = |i: usize, t: f64| x_init[i] + v0 * t;

    let mut front = filters
        .filter(|_| variant.front_absorbs())
        .map(|f| FrontAbsorber::with_squared(f.fir.clone(), f.fir_squared.clone()));
    let mut rear = filters
        .filter(|_| variant.rear_absorbs())
        .map(|f| RearAbsorber::new(f.fir.clone(), n));
    let mut leader_ramp = Ramp::new();

    let mut v_ref = cfg.v_ref;
    let mut d_ref = cfg.d_ref0;
    let mut events = scenario.events.iter().peekable();

    let mut rng = scenario.noise.map(|nz| (noise_rng(nz.seed), nz.sigma2));
    let mut noise = vec![0.0; n + 1];
    let mut integ = Integrator::new(n + 1);
    let mut trace = SimulationTrace::new(n);

    // end commands at the current control tick
    let mut c0_prev = equilibrium(0, 0.0);
    let mut cn_prev = rear.as_ref().map(|_| equilibrium(n, 0.0));
    trace.push_sample(
        0.0,
        &state,
        v_ref,
        d_ref,
        (c0_prev, cn_prev.unwrap_or(f64::NAN)),
    );

    for k in 0..ticks {
        let t_k = k as f64 * tc;
        let t_next = (k + 1) as f64 * tc;

        while let Some(e) = events.next_if(|e| e.t <= t_k + 1e-9) {
            let (dv, dd) = match e.command {
                Command::SetVRef(v) => (v - std::mem::replace(&mut v_ref, v), 0.0),
                Command::SetDRef(d) => (0.0, d - std::mem::replace(&mut d_ref, d)),
            };
            match (&mut front, filters) {
                (Some(a), Some(f)) => a.ramp_mut().add(t_k, 0.5 * (dv - f.kappa_front * dd)),
                _ => leader_ramp.add(t_k, dv),
            }
            if let (Some(a), Some(f)) = (&mut rear, filters) {
                a.ramp_mut().add(t_k, 0.5 * (dv - f.kappa_rear * dd));
            }
        }

        let mut c0_next = c0_prev;
        let mut cn_next = cn_prev;
        for sub in 0..m {
            if let Some((rng, sigma2)) = rng.as_mut() {
                inject_noise(rng, *sigma2, &mut noise);
            }
            if sub == 0 {
                c0_next = match front.as_mut() {
                    Some(a) => {
                        a.step(state.x[1] - equilibrium(1, t_k), t_k)? + equilibrium(0, t_next)
                    }
                    None => equilibrium(0, t_next) + leader_ramp.value(t_next),
                };
                if let Some(a) = rear.as_mut() {
                    // the rear measures its gap, so its noise lands on x_{N-1}
                    let measured = state.x[n - 1] + noise[n] - equilibrium(n - 1, t_k);
                    cn_next = Some(a.step(measured, t_k)? + equilibrium(n, t_next));
                }
            }
            let segment = |from: f64, to: f64| Segment {
                t0: t_k,
                span: tc,
                from,
                to,
            };
            let ends = EndCommands {
                leader: segment(c0_prev, c0_next),
                rear: match (cn_prev, cn_next) {
                    (Some(a), Some(b)) => EndInput::Command(segment(a, b)),
                    _ => EndInput::Follow { d_ref },
                },
            };
            let t = t_k + sub as f64 * dt;
            integ.step(&mut state, cfg, &ends, &noise, t, dt)?;
            if d_ref > 0.0 && state.x.windows(2).any(|w| w[0] - w[1] <= 0.0) {
                trace.collided = true;
            }
            if (k * m + sub + 1).is_multiple_of(record_every) {
                let t1 = t_k + (sub + 1) as f64 * dt;
                let rc = match ends.rear {
                    EndInput::Command(seg) => seg.at(t1),
                    EndInput::Follow { .. } => f64::NAN,
                };
                trace.push_sample(t1, &state, v_ref, d_ref, (ends.leader.at(t1), rc));
            }
        }
        c0_prev = c0_next;
        cn_prev = cn_next;
    }
    trace.front_waves = front.map(|a| a.components().clone());
    trace.rear_waves = rear.map(|a| a.components().clone());
    trace.final_state = Some(state);
    Ok(trace)
}
