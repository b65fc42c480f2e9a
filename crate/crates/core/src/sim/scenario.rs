use serde::{Deserialize, Serialize};

use crate::boundary::Variant;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "value", rename_all = "snake_case")]
pub enum Command {
    SetVRef(f64),
    SetDRef(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub command: Command,
}

/// Zero-mean Gaussian noise on every follower's distance measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma2: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub duration: f64,
    #[serde(default)]
    pub events: Vec<Event>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    pub variant: Variant,
    /// Trace sampling interval in seconds; `None` records every integration step.
    #[serde(default)]
    pub record_interval: Option<f64>,
}

impl ScenarioSpec {
    pub fn new(variant: Variant, duration: f64) -> Self {
        Self {
            duration,
            events: Vec::new(),
            noise: None,
            variant,
            record_interval: None,
        }
    }

    /// Platoon at rest, commanded at `t = 0` to reach `v_ref`.
    pub fn acceleration(variant: Variant, v_ref: f64, duration: f64) -> Self {
        Self::new(variant, duration).with_event(0.0, Command::SetVRef(v_ref))
    }

    pub fn with_event(mut self, t: f64, command: Command) -> Self {
        self.events.push(Event { t, command });
        self
    }

    pub fn with_noise(mut self, sigma2: f64, seed: u64) -> Self {
        self.noise = Some(NoiseSpec { sigma2, seed });
        self
    }

    pub fn with_record_interval(mut self, dt: f64) -> Self {
        self.record_interval = Some(dt);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        let mut last = 0.0;
        for e in &self.events {
            if !(e.t >= last && e.t <= self.duration) {
                return Err(Error::InvalidConfig(format!(
                    "event at t = {} is out of order or outside [0, {}]",
                    e.t, self.duration
                )));
            }
            last = e.t;
            let v = match e.command {
                Command::SetVRef(v) | Command::SetDRef(v) => v,
            };
            if !v.is_finite() {
                return Err(Error::InvalidConfig("event value must be finite".into()));
            }
        }
        if let Some(n) = &self.noise {
            if !(n.sigma2 >= 0.0 && n.sigma2.is_finite()) {
                return Err(Error::InvalidConfig("noise variance must be >= 0".into()));
            }
        }
        if let Some(r) = self.record_interval {
            if r.is_nan() || r <= 0.0 {
                return Err(Error::InvalidConfig(
                    "record interval must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}
