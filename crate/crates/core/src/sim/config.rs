use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wave::{VehicleGains, DEFAULT_FS, DEFAULT_HORIZON, DEFAULT_ITERATIONS};

/// How a commanded end vehicle follows its position command.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndServo {
    /// The vehicle moves along the piecewise-linear command exactly.
    #[default]
    Ideal,
    /// The vehicle runs the platoon PI controller on `command − position`.
    Pi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlatoonConfig {
    /// Index of the last vehicle; the platoon has `n + 1` vehicles.
    pub n: usize,
    pub kp: f64,
    pub ki: f64,
    pub xi: f64,
    pub d_ref0: f64,
    /// Common initial velocity.
    pub v_ref: f64,
    pub dt: f64,
    /// Absorber update rate, also the FIR sample rate.
    pub fs_ctrl: f64,
    /// Continued-fraction iterations behind the FIR.
    pub l: usize,
    /// FIR truncation horizon in seconds.
    pub truncate: f64,
    pub servo: EndServo,
}

impl Default for PlatoonConfig {
    fn default() -> Self {
        let g = VehicleGains::default();
        Self {
            n: 10,
            kp: g.kp,
            ki: g.ki,
            xi: g.xi,
            d_ref0: 1.0,
            v_ref: 0.0,
            dt: 0.01,
            fs_ctrl: DEFAULT_FS,
            l: DEFAULT_ITERATIONS,
            truncate: DEFAULT_HORIZON,
            servo: EndServo::Ideal,
        }
    }
}

impl PlatoonConfig {
    /// Default configuration with `vehicles` vehicles.
    pub fn with_vehicles(vehicles: usize) -> Self {
        Self {
            n: vehicles.saturating_sub(1),
            ..Self::default()
        }
    }

    pub fn gains(&self) -> VehicleGains {
        VehicleGains {
            kp: self.kp,
            ki: self.ki,
            xi: self.xi,
        }
    }

    pub fn vehicles(&self) -> usize {
        self.n + 1
    }

    /// Integration steps per control period.
    pub fn substeps(&self) -> usize {
        (1.0 / (self.fs_ctrl * self.dt)).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n < 1 {
            return bad("platoon needs at least two vehicles (N >= 1)".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.fs_ctrl > 0.0 && self.fs_ctrl.is_finite()) {
            return bad(format!("fs_ctrl must be positive, got {}", self.fs_ctrl));
        }
        let ratio = 1.0 / (self.fs_ctrl * self.dt);
        if ratio < 1.0 - 1e-9 || (ratio - ratio.round()).abs() > 1e-6 {
            return bad(format!(
                "control period 1/{} s is not an integer multiple of dt = {}",
                self.fs_ctrl, self.dt
            ));
        }
        if !(self.d_ref0.is_finite() && self.v_ref.is_finite()) {
            return bad("references must be finite".into());
        }
        if self.l == 0 || self.truncate.is_nan() || self.truncate <= 0.0 {
            return bad("need l >= 1 and a positive truncation horizon".into());
        }
        self.gains().validate()
    }
}
