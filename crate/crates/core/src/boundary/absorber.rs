//! Online wave-absorbing end-vehicle controllers.
//!
//! Signals are deviations from the vehicles' initial equilibrium positions.
//! Each `step` consumes the measurement taken at control tick `k` and returns
//! the commanded position for tick `k + 1`.

use crate::error::{Error, Result};
use crate::wave::{History, WaveFir};

/// Sum of ramps `slope·max(0, t − start)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ramp {
    segments: Vec<(f64, f64)>,
}

impl Ramp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, start: f64, slope: f64) {
        if slope != 0.0 {
            self.segments.push((start, slope));
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.segments
            .iter()
            .map(|(t0, w)| w * (t - t0).max(0.0))
            .sum()
    }

    pub fn slope(&self, t: f64) -> f64 {
        self.segments
            .iter()
            .filter(|(t0, _)| t >= *t0)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Recorded forward (`a`) and backward (`b`) wave components of one vehicle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WaveComponents {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl WaveComponents {
    fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    fn push(&mut self, a: f64, b: f64) {
        self.a.push(a);
        self.b.push(b);
    }

    /// Position samples `a + b`.
    pub fn positions(&self) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(a, b)| a + b).collect()
    }
}

#[derive(Clone, Debug)]
struct Clock {
    dt: f64,
    last: Option<f64>,
}

impl Clock {
    fn tick(&mut self, t: f64) -> Result<f64> {
        if let Some(last) = self.last {
            if t <= last {
                return Err(Error::NonMonotonicTime { t, last });
            }
        }
        self.last = Some(t);
        Ok(t + self.dt)
    }
}

/// Leader controller: `X_f = ramp + B₀` with `B₀ = G₁X₁ − G₁²A₀`, `A₀ = ramp`.
#[derive(Clone, Debug)]
pub struct FrontAbsorber {
    fir: WaveFir,
    fir_squared: WaveFir,
    x1: History,
    a0: History,
    ramp: Ramp,
    clock: Clock,
    b_pending: f64,
    own: WaveComponents,
}

impl FrontAbsorber {
    pub fn new(fir: WaveFir) -> Result<Self> {
        let fir_squared = fir.squared()?;
        Ok(Self::with_squared(fir, fir_squared))
    }

    pub fn with_squared(fir: WaveFir, fir_squared: WaveFir) -> Self {
        let clock = Clock {
            dt: 1.0 / fir.fs(),
            last: None,
        };
        Self {
            x1: History::for_filter(&fir),
            a0: History::for_filter(&fir_squared),
            fir,
            fir_squared,
            ramp: Ramp::new(),
            clock,
            b_pending: 0.0,
            own: WaveComponents::new(0),
        }
    }

    pub fn ramp_mut(&mut self) -> &mut Ramp {
        &mut self.ramp
    }

    pub fn ramp(&self) -> &Ramp {
        &self.ramp
    }

    /// Wave components of the leader, one entry per step.
    pub fn components(&self) -> &WaveComponents {
        &self.own
    }

    /// Feeds the follower's position at `t` and returns the leader command for
    /// `t + 1/fs`.
    pub fn step(&mut self, x1: f64, t: f64) -> Result<f64> {
        let next = self.clock.tick(t)?;
        let a_now = self.ramp.value(t);
        self.x1.push(x1);
        self.a0.push(a_now);
        self.own.push(a_now, self.b_pending);
        self.b_pending =
            self.fir.convolve_ahead(&self.x1)? - self.fir_squared.convolve_ahead(&self.a0)?;
        Ok(self.ramp.value(next) + self.b_pending)
    }
}

/// Rear controller: `X_r = ramp_r + G₁A_{N−1}` where `A_{N−1}` is the measured
/// `X_{N−1}` minus the rear's own outgoing wave `B_{N−1} = G₁B_N`, `B_N = ramp_r`.
#[derive(Clone, Debug)]
pub struct RearAbsorber {
    fir: WaveFir,
    b_rear: History,
    a_ahead: History,
    ramp: Ramp,
    clock: Clock,
    ahead: WaveComponents,
}

impl RearAbsorber {
    pub fn new(fir: WaveFir, n_last: usize) -> Self {
        let clock = Clock {
            dt: 1.0 / fir.fs(),
            last: None,
        };
        Self {
            b_rear: History::for_filter(&fir),
            a_ahead: History::for_filter(&fir),
            fir,
            ramp: Ramp::new(),
            clock,
            ahead: WaveComponents::new(n_last.saturating_sub(1)),
        }
    }

    pub fn ramp_mut(&mut self) -> &mut Ramp {
        &mut self.ramp
    }

    pub fn ramp(&self) -> &Ramp {
        &self.ramp
    }

    /// Reconstructed wave components of vehicle `N − 1`.
    pub fn components(&self) -> &WaveComponents {
        &self.ahead
    }

    /// Feeds the position of vehicle `N − 1` at `t` and returns the rear
    /// command for `t + 1/fs`.
    pub fn step(&mut self, x_ahead: f64, t: f64) -> Result<f64> {
        let next = self.clock.tick(t)?;
        self.b_rear.push(self.ramp.value(t));
        let b = self.fir.convolve(&self.b_rear)?;
        let a = x_ahead - b;
        self.a_ahead.push(a);
        self.ahead.push(a, b);
        Ok(self.ramp.value(next) + self.fir.convolve_ahead(&self.a_ahead)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::{g1_cf_approx, g1_fir, VehicleGains};

    fn fir() -> WaveFir {
        let alpha = VehicleGains::default().alpha().unwrap();
        g1_fir(&g1_cf_approx(&alpha, 20).unwrap(), 100.0, 15.0).unwrap()
    }

    #[test]
    fn ramp_sums_segments() {
        let mut r = Ramp::new();
        r.add(1.0, 0.5);
        r.add(3.0, -0.5);
        assert_eq!(r.value(0.5), 0.0);
        assert_eq!(r.value(2.0), 0.5);
        assert_eq!(r.value(5.0), 1.0);
        assert_eq!(r.slope(2.0), 0.5);
        assert_eq!(r.slope(4.0), 0.0);
    }

    #[test]
    fn quiet_inputs_give_zero_commands() {
        let f = fir();
        let mut front = FrontAbsorber::new(f.clone()).unwrap();
        let mut rear = RearAbsorber::new(f, 5);
        for k in 0..50 {
            let t = k as f64 * 0.01;
            assert_eq!(front.step(0.0, t).unwrap(), 0.0);
            assert_eq!(rear.step(0.0, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn leader_starts_at_ramp_slope() {
        let mut front = FrontAbsorber::new(fir()).unwrap();
        front.ramp_mut().add(0.0, 0.5);
        let mut prev = 0.0;
        for k in 0..5 {
            let cmd = front.step(0.0, k as f64 * 0.01).unwrap();
            let v = (cmd - prev) / 0.01;
            assert!((v - 0.5).abs() < 1e-3, "tick {k}: {v}");
            prev = cmd;
        }
    }

    #[test]
    fn time_must_advance() {
        let mut front = FrontAbsorber::new(fir()).unwrap();
        front.step(0.0, 1.0).unwrap();
        assert!(matches!(
            front.step(0.0, 1.0),
            Err(Error::NonMonotonicTime { .. })
        ));
        let mut rear = RearAbsorber::new(fir(), 3);
        rear.step(0.0, 1.0).unwrap();
        assert!(matches!(
            rear.step(0.0, 0.5),
            Err(Error::NonMonotonicTime { .. })
        ));
    }
}
