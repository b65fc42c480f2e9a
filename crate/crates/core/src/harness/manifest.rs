//! Experiment manifests: a TOML file with `plant`, `controller`, `scenario`
//! and `sweep` tables. Every key is optional; missing keys fall back to the
//! library defaults, and command-line flags override both.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiments::{Horizon, NoiseStudy, SweepOptions, MSE_HORIZON};
use crate::boundary::Variant;
use crate::error::{Error, Result};
use crate::sim::{EndServo, Event, NoiseSpec, PlatoonConfig, ScenarioSpec};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantSection {
    pub xi: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerSection {
    pub kp: Option<f64>,
    pub ki: Option<f64>,
    pub l: Option<usize>,
    pub fs: Option<f64>,
    pub truncate: Option<f64>,
    pub servo: Option<EndServo>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    /// Index of the last vehicle.
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub d_ref: Option<f64>,
    /// Velocity commanded at `t = 0` when no events are listed.
    pub v_ref: Option<f64>,
    pub variant: Option<Variant>,
    pub duration: Option<f64>,
    pub record_interval: Option<f64>,
    pub sigma2: Option<f64>,
    pub seed: Option<u64>,
    pub events: Option<Vec<Event>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Platoon sizes as vehicle counts.
    pub sizes: Option<Vec<usize>>,
    pub variants: Option<Vec<Variant>>,
    /// Seconds, or absent for the fixed MSE window.
    pub horizon: Option<f64>,
    pub until_settled: Option<bool>,
    pub record_interval: Option<f64>,
    pub seeds: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Manifest {
    pub plant: PlantSection,
    pub controller: ControllerSection,
    pub scenario: ScenarioSection,
    pub sweep: SweepSection,
}

/// Values given on the command line; `Some` wins over the manifest.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub kp: Option<f64>,
    pub ki: Option<f64>,
    pub xi: Option<f64>,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub fs: Option<f64>,
    pub truncate: Option<f64>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub variant: Option<Variant>,
}

pub const DEFAULT_SIZES: [usize; 5] = [5, 10, 20, 40, 50];

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
            if v.is_some() {
                slot.clone_from(v);
            }
        }
        set(&mut self.controller.kp, &o.kp);
        set(&mut self.controller.ki, &o.ki);
        set(&mut self.plant.xi, &o.xi);
        set(&mut self.scenario.n, &o.n);
        set(&mut self.controller.l, &o.l);
        set(&mut self.controller.fs, &o.fs);
        set(&mut self.controller.truncate, &o.truncate);
        set(&mut self.scenario.dt, &o.dt);
        set(&mut self.scenario.seed, &o.seed);
        set(&mut self.scenario.variant, &o.variant);
    }

    pub fn platoon_config(&self) -> Result<PlatoonConfig> {
        let d = PlatoonConfig::default();
        let c = &self.controller;
        let s = &self.scenario;
        let cfg = PlatoonConfig {
            n: s.n.unwrap_or(d.n),
            kp: c.kp.unwrap_or(d.kp),
            ki: c.ki.unwrap_or(d.ki),
            xi: self.plant.xi.unwrap_or(d.xi),
            d_ref0: s.d_ref.unwrap_or(d.d_ref0),
            v_ref: d.v_ref,
            dt: s.dt.unwrap_or(d.dt),
            fs_ctrl: c.fs.unwrap_or(d.fs_ctrl),
            l: c.l.unwrap_or(d.l),
            truncate: c.truncate.unwrap_or(d.truncate),
            servo: c.servo.unwrap_or(d.servo),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Events from the manifest, or an acceleration to `v_ref` (default 1).
    pub fn scenario_spec(&self) -> Result<ScenarioSpec> {
        let s = &self.scenario;
        let variant = s.variant.unwrap_or(Variant::None);
        let duration = s.duration.unwrap_or(MSE_HORIZON);
        let mut spec = match &s.events {
            Some(events) => {
                let mut spec = ScenarioSpec::new(variant, duration);
                spec.events = events.clone();
                spec
            }
            None => ScenarioSpec::acceleration(variant, s.v_ref.unwrap_or(1.0), duration),
        };
        if let Some(sigma2) = s.sigma2 {
            spec.noise = Some(NoiseSpec {
                sigma2,
                seed: s.seed.unwrap_or(0),
            });
        }
        spec.record_interval = s.record_interval;
        spec.validate()?;
        Ok(spec)
    }

    pub fn sweep_options(&self) -> SweepOptions {
        let d = SweepOptions::default();
        let w = &self.sweep;
        let horizon = if w.until_settled.unwrap_or(false) {
            Horizon::UntilSettled
        } else {
            Horizon::Fixed(w.horizon.unwrap_or(MSE_HORIZON))
        };
        SweepOptions {
            v_ref: self.scenario.v_ref.unwrap_or(d.v_ref),
            horizon,
            record_interval: w.record_interval.unwrap_or(d.record_interval),
            mode: d.mode,
        }
    }

    pub fn sweep_sizes(&self) -> Vec<usize> {
        self.sweep
            .sizes
            .clone()
            .unwrap_or_else(|| DEFAULT_SIZES.to_vec())
    }

    /// Requested variants: the sweep list, else the scenario variant, else all.
    pub fn sweep_variants(&self) -> Vec<Variant> {
        self.sweep
            .variants
            .clone()
            .or_else(|| self.scenario.variant.map(|v| vec![v]))
            .unwrap_or_else(|| Variant::ALL.to_vec())
    }

    pub fn noise_study(&self) -> NoiseStudy {
        let d = NoiseStudy::default();
        let s = &self.scenario;
        NoiseStudy {
            vehicles: s.n.map(|n| n + 1).unwrap_or(d.vehicles),
            duration: s.duration.unwrap_or(d.duration),
            sigma2: s.sigma2.unwrap_or(d.sigma2),
            seeds: self
                .sweep
                .seeds
                .clone()
                .or_else(|| s.seed.map(|x| vec![x]))
                .unwrap_or(d.seeds),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Command;

    const SAMPLE: &str = r#"
[plant]
xi = 2.0

[controller]
kp = 3.0
ki = 1.5
servo = "pi"

[scenario]
n = 7
variant = "two_sided"
duration = 60.0
events = [
  { t = 0.0, command = "set_v_ref", value = 1.0 },
  { t = 20.0, command = "set_d_ref", value = 2.0 },
]

[sweep]
sizes = [5, 10]
variants = ["none", "front"]
"#;

    #[test]
    fn parses_all_sections() {
        let m = Manifest::parse(SAMPLE).unwrap();
        let cfg = m.platoon_config().unwrap();
        assert_eq!((cfg.kp, cfg.ki, cfg.xi, cfg.n), (3.0, 1.5, 2.0, 7));
        assert_eq!(cfg.servo, EndServo::Pi);
        let sc = m.scenario_spec().unwrap();
        assert_eq!(sc.variant, Variant::TwoSided);
        assert_eq!(sc.events[1].command, Command::SetDRef(2.0));
        assert_eq!(m.sweep_sizes(), vec![5, 10]);
        assert_eq!(m.sweep_variants(), vec![Variant::None, Variant::Front]);
    }

    #[test]
    fn flags_override_file() {
        let mut m = Manifest::parse(SAMPLE).unwrap();
        m.apply(&Overrides {
            kp: Some(5.0),
            n: Some(3),
            variant: Some(Variant::Rear),
            ..Default::default()
        });
        let cfg = m.platoon_config().unwrap();
        assert_eq!((cfg.kp, cfg.ki, cfg.n), (5.0, 1.5, 3));
        assert_eq!(m.scenario_spec().unwrap().variant, Variant::Rear);
    }

    #[test]
    fn empty_manifest_gives_defaults() {
        let m = Manifest::parse("").unwrap();
        assert_eq!(m.platoon_config().unwrap(), PlatoonConfig::default());
        assert_eq!(m.sweep_options(), SweepOptions::default());
        assert_eq!(m.noise_study(), NoiseStudy::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            Manifest::parse("[plant]\nmass = 1.0\n"),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn round_trip() {
        let m = Manifest::parse(SAMPLE).unwrap();
        assert_eq!(Manifest::parse(&m.to_toml().unwrap()).unwrap(), m);
    }
}
