use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use platoon_wave::boundary::Variant;
use platoon_wave::harness::{
    noise_medians, noise_study, sweep, verify, write_noise_csv, Horizon, Manifest, MetricsReport,
    Overrides, Suite, VerifyOptions,
};
use platoon_wave::lti::{freq_response_with, log_grid};
use platoon_wave::par::ExecMode;
use platoon_wave::sim::{run_scenario, Command as ScenarioCommand, NoiseSpec};
use platoon_wave::wave::{g1_cf_approx, g1_fir, write_bode_csv, ExactWave, WaveTransfer};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "platoon",
    version,
    about = "Wave-based analysis and control of vehicle platoons"
)]
struct Cli {
    /// TOML manifest with plant, controller, scenario and sweep tables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    common: CommonArgs,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    #[arg(long, global = true, allow_negative_numbers = true)]
    kp: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    ki: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    xi: Option<f64>,
    /// Index of the last vehicle.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Continued-fraction iterations.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Absorber sample rate in Hz.
    #[arg(long, global = true)]
    fs: Option<f64>,
    /// FIR truncation horizon in seconds.
    #[arg(long, global = true)]
    truncate: Option<f64>,
    /// Integration step in seconds.
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// none, front, rear or two_sided.
    #[arg(long, global = true)]
    variant: Option<Variant>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            kp: self.kp,
            ki: self.ki,
            xi: self.xi,
            n: self.n,
            l: self.l,
            fs: self.fs,
            truncate: self.truncate,
            dt: self.dt,
            seed: self.seed,
            variant: self.variant,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write the absorber FIR taps and Bode data of the exact and approximate G₁.
    Approx {
        #[arg(long, default_value_t = 1e-3)]
        omega_min: f64,
        #[arg(long, default_value_t = 1e3)]
        omega_max: f64,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
    /// Run one scenario and write its trace and metrics.
    Simulate {
        #[arg(long)]
        duration: Option<f64>,
        /// Velocity commanded at t = 0 (ignored when the manifest lists events).
        #[arg(long)]
        v_ref: Option<f64>,
        /// Distance-measurement noise variance.
        #[arg(long)]
        sigma2: Option<f64>,
        #[arg(long)]
        record_interval: Option<f64>,
    },
    /// Acceleration manoeuvre over platoon sizes and variants.
    Sweep {
        /// Platoon sizes as vehicle counts.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<Variant>>,
        /// Simulated seconds per cell.
        #[arg(long)]
        horizon: Option<f64>,
        /// Run each cell long enough to settle instead of a fixed horizon.
        #[arg(long)]
        until_settled: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Distance-measurement noise study over several seeds.
    Noise {
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<Variant>>,
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long)]
        sigma2: Option<f64>,
        #[arg(long)]
        sequential: bool,
    },
    /// Run invariant suites; exits non-zero if any check fails.
    Verify {
        /// Suites to run, or `all`; defaults to every suite except `approximant`.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 100)]
        probes: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    std::io::Write::write_all(&mut w, b"\n")?;
    Ok(())
}

fn mode(sequential: bool) -> ExecMode {
    if sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    }
}

/// Returns whether the run is clean: no cell errors and, for `verify`, no
/// failed checks.
fn run(cli: Cli) -> Result<bool> {
    let mut manifest = match &cli.config {
        Some(p) => Manifest::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => Manifest::default(),
    };
    manifest.apply(&cli.common.overrides());
    let out = &cli.common.out;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let cfg = manifest.platoon_config()?;

    match cli.command {
        Cmd::Approx {
            omega_min,
            omega_max,
            points,
        } => {
            let alpha = cfg.gains().alpha()?;
            let approx = g1_cf_approx(&alpha, cfg.l)?;
            let fir = g1_fir(&approx, cfg.fs_ctrl, cfg.truncate)?;
            fir.write_csv(create(out, "fir.csv")?)?;
            let grid = log_grid(omega_min, omega_max, points)?;
            let fr = freq_response_with(&grid, |s| approx.g1(s))?;
            write_bode_csv(&fr, create(out, "bode_approx.csv")?)?;
            let exact = ExactWave::new(alpha);
            let fr = freq_response_with(&grid, |s| exact.g1(s))?;
            write_bode_csv(&fr, create(out, "bode_exact.csv")?)?;
            println!(
                "approximant degree {}, {} taps (DC gain {:.6})",
                approx.tf().order(),
                fir.len(),
                fir.dc_gain()
            );
            Ok(true)
        }
        Cmd::Simulate {
            duration,
            v_ref,
            sigma2,
            record_interval,
        } => {
            let mut sc = manifest.scenario_spec()?;
            if let Some(d) = duration {
                sc.duration = d;
            }
            if let Some(v) = v_ref {
                for e in sc.events.iter_mut() {
                    if let ScenarioCommand::SetVRef(x) = &mut e.command {
                        *x = v;
                    }
                }
            }
            if let Some(s2) = sigma2 {
                sc.noise = Some(NoiseSpec {
                    sigma2: s2,
                    seed: manifest.scenario.seed.unwrap_or(0),
                });
            }
            if record_interval.is_some() {
                sc.record_interval = record_interval;
            }
            sc.validate()?;
            let trace = run_scenario(&cfg, &sc)?;
            trace.write_csv(create(out, "trace.csv")?)?;
            let metrics = MetricsReport::from_trace(&trace)?;
            write_json(out, "metrics.json", &metrics)?;
            println!("{}", serde_json::to_string(&metrics)?);
            Ok(true)
        }
        Cmd::Sweep {
            sizes,
            variants,
            horizon,
            until_settled,
            sequential,
        } => {
            let mut opts = manifest.sweep_options();
            opts.mode = mode(sequential);
            if let Some(h) = horizon {
                opts.horizon = Horizon::Fixed(h);
            }
            if until_settled {
                opts.horizon = Horizon::UntilSettled;
            }
            let sizes = sizes.unwrap_or_else(|| manifest.sweep_sizes());
            let variants = variants
                .or_else(|| cli.common.variant.map(|v| vec![v]))
                .unwrap_or_else(|| manifest.sweep_variants());
            let result = sweep(&cfg, &sizes, &variants, &opts)?;
            result.write_csv(create(out, "sweep.csv")?)?;
            write_json(out, "fits.json", &result.fits)?;
            for f in &result.fits {
                println!(
                    "{:<10} slope {:.3} over {} sizes",
                    f.variant, f.slope, f.points
                );
            }
            let errors: Vec<_> = result.rows.iter().filter(|r| r.error.is_some()).collect();
            for r in &errors {
                eprintln!(
                    "cell {} vehicles / {}: {}",
                    r.vehicles,
                    r.variant,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            Ok(errors.is_empty())
        }
        Cmd::Noise {
            seeds,
            variants,
            duration,
            sigma2,
            sequential,
        } => {
            let mut study = manifest.noise_study();
            if let Some(s) = seeds {
                study.seeds = s;
            } else if let Some(s) = cli.common.seed {
                study.seeds = vec![s];
            }
            if let Some(d) = duration {
                study.duration = d;
            }
            if let Some(s2) = sigma2 {
                study.sigma2 = s2;
            }
            let variants = variants
                .or_else(|| cli.common.variant.map(|v| vec![v]))
                .unwrap_or_else(|| Variant::ALL.to_vec());
            let rows = noise_study(&cfg, &study, &variants, mode(sequential))?;
            write_noise_csv(&rows, create(out, "noise.csv")?)?;
            let medians = noise_medians(&rows);
            write_json(
                out,
                "noise.json",
                &json!({ "study": study, "medians": medians }),
            )?;
            for m in &medians {
                println!(
                    "{:<10} mse_dist {:.4e}  max_dist {:.4e}  |mean_pos| {:.4e}",
                    m.variant, m.mse_dist, m.max_dist, m.abs_mean_pos
                );
            }
            Ok(true)
        }
        Cmd::Verify { suite, probes } => {
            let suites = parse_suites(&suite)?;
            let opts = VerifyOptions {
                gains: cfg.gains(),
                l: cfg.l,
                probes,
                seed: cli.common.seed.unwrap_or(VerifyOptions::default().seed),
            };
            let report = verify(&opts, &suites);
            write_json(out, "verify.json", &report)?;
            for c in &report.checks {
                println!(
                    "{} {}/{}: {:.3e} (threshold {:.1e}){}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.name,
                    c.measured,
                    c.threshold,
                    c.detail
                        .as_deref()
                        .map(|d| format!(" {d}"))
                        .unwrap_or_default()
                );
            }
            Ok(report.passed)
        }
    }
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>> {
    if names.is_empty() {
        return Ok(Suite::DEFAULT.to_vec());
    }
    if names.iter().any(|n| n == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    Ok(names
        .iter()
        .map(|n| n.parse())
        .collect::<Result<Vec<Suite>, _>>()?)
}
