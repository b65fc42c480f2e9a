//! Desk-scale experiments: acceleration sweeps, the noise study and the
//! wave-model cross-check of simulated velocities.

use serde::{Deserialize, Serialize};

use super::metrics::{noise_metrics, MetricsReport};
use crate::boundary::{chain_tf_prediction, Variant};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::sim::{run_scenario_with, PlatoonConfig, ScenarioSpec, WaveFilters};
use crate::wave::{fir_from_tf, g1_cf_approx};

/// Evaluation window of the velocity MSE in the scaling study.
pub const MSE_HORIZON: f64 = 500.0;

/// Long enough for the acceleration manoeuvre to settle: oscillations without
/// an absorber die out on a time scale quadratic in the platoon size.
pub fn acceleration_duration(variant: Variant, vehicles: usize) -> f64 {
    let n = vehicles as f64;
    match variant {
        Variant::None => 5.0 * n * n + 200.0,
        _ => 10.0 * n + 100.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizon {
    Fixed(f64),
    /// Per-cell duration from [`acceleration_duration`].
    UntilSettled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub v_ref: f64,
    pub horizon: Horizon,
    /// Trace sampling interval; coarser sampling bounds memory on long runs.
    pub record_interval: f64,
    pub mode: ExecMode,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            v_ref: 1.0,
            horizon: Horizon::Fixed(MSE_HORIZON),
            record_interval: 0.01,
            mode: ExecMode::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub vehicles: usize,
    pub variant: Variant,
    pub metrics: Option<MetricsReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub variant: Variant,
    /// Exponent `p` in `MSE ≈ c·sizeᵖ`.
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SlopeFit>,
}

impl SweepResult {
    pub fn row(&self, vehicles: usize, variant: Variant) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.vehicles == vehicles && r.variant == variant)
    }

    pub fn fit(&self, variant: Variant) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.variant == variant)
    }

    /// CSV with one line per cell.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "vehicles",
            "variant",
            "mse_velocity",
            "settling_time",
            "collided",
            "error",
        ])?;
        for r in &self.rows {
            let m = r.metrics.as_ref();
            out.write_record([
                r.vehicles.to_string(),
                r.variant.to_string(),
                m.map(|m| m.mse_velocity.to_string()).unwrap_or_default(),
                m.and_then(|m| m.settling_time)
                    .map(|t| t.to_string())
                    .unwrap_or_default(),
                m.map(|m| m.collided.to_string()).unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Least-squares line through `(ln x, ln y)`; returns `(slope, intercept)`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Acceleration manoeuvre for every `(size, variant)` cell. Cell failures are
/// recorded in the row rather than aborting the sweep.
pub fn sweep(
    base: &PlatoonConfig,
    sizes: &[usize],
    variants: &[Variant],
    opts: &SweepOptions,
) -> Result<SweepResult> {
    if sizes.is_empty() || variants.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs sizes and variants".into(),
        ));
    }
    if let Some(bad) = sizes.iter().find(|s| **s < 2) {
        return Err(Error::InvalidConfig(format!(
            "platoon size {bad} is below 2"
        )));
    }
    let filters = if variants.iter().any(|v| *v != Variant::None) {
        Some(WaveFilters::build(base)?)
    } else {
        None
    };
    let cells: Vec<(usize, Variant)> = sizes
        .iter()
        .flat_map(|s| variants.iter().map(move |v| (*s, *v)))
        .collect();
    let mut rows = par::map(opts.mode, &cells, |&(vehicles, variant)| {
        let cfg = PlatoonConfig {
            n: vehicles - 1,
            ..base.clone()
        };
        let duration = match opts.horizon {
            Horizon::Fixed(t) => t,
            Horizon::UntilSettled => acceleration_duration(variant, vehicles),
        };
        let scenario = ScenarioSpec::acceleration(variant, opts.v_ref, duration)
            .with_record_interval(opts.record_interval);
        let outcome = run_scenario_with(&cfg, &scenario, filters.as_ref())
            .and_then(|trace| MetricsReport::from_trace(&trace));
        let (metrics, error) = match outcome {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        };
        SweepRow {
            vehicles,
            variant,
            metrics,
            error,
        }
    });
    rows.sort_by_key(|r| (r.vehicles, r.variant));
    let fits = variants
        .iter()
        .filter_map(|&v| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.variant == v)
                .filter_map(|r| {
                    r.metrics
                        .as_ref()
                        .map(|m| (r.vehicles as f64, m.mse_velocity))
                })
                .unzip();
            fit_loglog(&xs, &ys).map(|(slope, intercept)| SlopeFit {
                variant: v,
                slope,
                intercept,
                points: xs.len(),
            })
        })
        .collect();
    Ok(SweepResult { rows, fits })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseStudy {
    pub vehicles: usize,
    pub duration: f64,
    pub sigma2: f64,
    pub seeds: Vec<u64>,
}

impl Default for NoiseStudy {
    fn default() -> Self {
        Self {
            vehicles: 20,
            duration: 2000.0,
            sigma2: 1.0,
            seeds: (1..=5).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub seed: u64,
    pub variant: Variant,
    pub metrics: MetricsReport,
}

/// All vehicles stacked at the origin with zero references, driven only by
/// distance-measurement noise.
pub fn noise_study(
    base: &PlatoonConfig,
    study: &NoiseStudy,
    variants: &[Variant],
    mode: ExecMode,
) -> Result<Vec<NoiseRow>> {
    if study.vehicles < 2 {
        return Err(Error::InvalidConfig(
            "noise study needs at least two vehicles".into(),
        ));
    }
    let cfg = PlatoonConfig {
        n: study.vehicles - 1,
        d_ref0: 0.0,
        v_ref: 0.0,
        ..base.clone()
    };
    let filters = WaveFilters::build(&cfg)?;
    let cells: Vec<(u64, Variant)> = study
        .seeds
        .iter()
        .flat_map(|s| variants.iter().map(move |v| (*s, *v)))
        .collect();
    let mut rows = par::map(mode, &cells, |&(seed, variant)| {
        let scenario = ScenarioSpec::new(variant, study.duration).with_noise(study.sigma2, seed);
        let trace = run_scenario_with(&cfg, &scenario, Some(&filters))?;
        Ok(NoiseRow {
            seed,
            variant,
            metrics: noise_metrics(&trace)?,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.seed, r.variant));
    Ok(rows)
}

/// Per-variant medians of the noise metrics over seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseMedians {
    pub variant: Variant,
    pub seeds: usize,
    pub mse_pos: f64,
    pub mean_pos: f64,
    /// Median of `|mean_pos|`.
    pub abs_mean_pos: f64,
    pub mse_dist: f64,
    pub max_dist: f64,
}

pub fn noise_medians(rows: &[NoiseRow]) -> Vec<NoiseMedians> {
    let mut variants: Vec<Variant> = rows.iter().map(|r| r.variant).collect();
    variants.sort();
    variants.dedup();
    variants
        .into_iter()
        .map(|variant| {
            let ms: Vec<&MetricsReport> = rows
                .iter()
                .filter(|r| r.variant == variant)
                .map(|r| &r.metrics)
                .collect();
            let med = |f: &dyn Fn(&MetricsReport) -> f64| {
                median(&mut ms.iter().map(|m| f(m)).collect::<Vec<_>>()).unwrap_or(f64::NAN)
            };
            NoiseMedians {
                variant,
                seeds: ms.len(),
                mse_pos: med(&|m| m.mse_pos),
                mean_pos: med(&|m| m.mean_pos),
                abs_mean_pos: med(&|m| m.mean_pos.abs()),
                mse_dist: med(&|m| m.mse_dist),
                max_dist: med(&|m| m.max_dist),
            }
        })
        .collect()
}

/// CSV with one line per `(seed, variant)`.
pub fn write_noise_csv<W: std::io::Write>(rows: &[NoiseRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "seed", "variant", "mse_pos", "mean_pos", "mse_dist", "max_dist", "collided",
    ])?;
    for r in rows {
        let m = &r.metrics;
        out.write_record([
            r.seed.to_string(),
            r.variant.to_string(),
            m.mse_pos.to_string(),
            m.mean_pos.to_string(),
            m.mse_dist.to_string(),
            m.max_dist.to_string(),
            m.collided.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    /// Largest `|predicted − simulated|` velocity over the platoon.
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveCheck {
    pub v_ref: f64,
    pub snapshots: Vec<Snapshot>,
    /// Largest `|v₀ − v_ref|` after `absorbed_after`.
    pub leader_residual: f64,
    pub absorbed_after: f64,
}

/// Front-sided acceleration from rest: simulated velocities against the wave
/// model `Xₙ = (Gⁿ + G^{2N+1−n})·X_ref` with `X_ref` a ramp of slope `w₀`.
/// Step responses of `Gᵖ` come from repeated convolution of the sampled
/// impulse response.
pub fn wave_cross_validation(
    cfg: &PlatoonConfig,
    v_ref: f64,
    snapshot_times: &[f64],
    absorbed_after: f64,
    duration: f64,
) -> Result<WaveCheck> {
    let horizon = snapshot_times.iter().copied().fold(0.0, f64::max);
    if horizon > duration || absorbed_after >= duration {
        return Err(Error::InvalidConfig(
            "snapshots must fall inside the run".into(),
        ));
    }
    let filters = WaveFilters::build(cfg)?;
    let scenario = ScenarioSpec::acceleration(Variant::Front, v_ref, duration);
    let trace = run_scenario_with(cfg, &scenario, Some(&filters))?;

    let alpha = cfg.gains().alpha()?;
    let approx = g1_cf_approx(&alpha, cfg.l)?;
    let kernel = fir_from_tf(approx.tf(), cfg.fs_ctrl, horizon + 1.0)?;
    let len = kernel.len();
    let n = cfg.n;
    let max_power = 2 * n + 1;
    // step responses of G^p for p = 0..=2N+1
    let mut steps = vec![vec![1.0; len]];
    let mut power = kernel.taps().to_vec();
    for p in 1..=max_power {
        if p > 1 {
            power = truncated_convolution(&power, kernel.taps());
        }
        steps.push(
            power
                .iter()
                .scan(0.0, |acc, v| {
                    *acc += v;
                    Some(*acc)
                })
                .collect(),
        );
    }
    // spacing is unchanged, so the ramp slope is half the velocity step
    let w0 = 0.5 * v_ref;
    let mut snapshots = Vec::with_capacity(snapshot_times.len());
    for &t in snapshot_times {
        let k_trace = trace.index_at(t).ok_or(Error::EmptyTrace)?;
        let k_kernel = ((t * cfg.fs_ctrl).round() as usize).min(len - 1);
        let mut max_error = 0.0_f64;
        for i in 0..=n {
            let pred = chain_tf_prediction(n, Variant::Front, i)?;
            let predicted: f64 = pred
                .from_front
                .terms
                .iter()
                .map(|(c, p)| c * w0 * steps[*p as usize][k_kernel])
                .sum();
            max_error = max_error.max((predicted - trace.velocity(k_trace, i)).abs());
        }
        snapshots.push(Snapshot { t, max_error });
    }
    let start = trace.index_at(absorbed_after).ok_or(Error::EmptyTrace)?;
    let leader_residual = (start..trace.len())
        .map(|k| (trace.velocity(k, 0) - v_ref).abs())
        .fold(0.0, f64::max);
    Ok(WaveCheck {
        v_ref,
        snapshots,
        leader_residual,
        absorbed_after,
    })
}

fn truncated_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (o, y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}
