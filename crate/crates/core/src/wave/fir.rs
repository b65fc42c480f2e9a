//! Sampled, truncated impulse responses used as online filters.

use std::collections::VecDeque;

use super::approx::WaveTfApprox;
use crate::error::{Error, Result};
use crate::lti::{impulse_response, MarginalPoles, RationalTf};

pub const DEFAULT_FS: f64 = 100.0;
pub const DEFAULT_HORIZON: f64 = 15.0;
/// Largest share of absolute mass a re-truncated self-convolution may drop.
pub const MAX_TAIL_RATIO: f64 = 0.01;

/// Taps are `h(k/fs)/fs`, so a plain sum is the DC gain and a dot product with
/// position samples approximates the continuous convolution.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFir {
    taps: Vec<f64>,
    fs: f64,
    horizon: f64,
}

pub fn g1_fir(approx: &WaveTfApprox, fs: f64, horizon: f64) -> Result<WaveFir> {
    fir_from_tf(approx.tf(), fs, horizon)
}

/// Filter from any strictly proper, stable transfer function.
pub fn fir_from_tf(tf: &RationalTf, fs: f64, horizon: f64) -> Result<WaveFir> {
    let h = impulse_response(tf, fs, horizon, MarginalPoles::Forbid)?;
    Ok(WaveFir {
        taps: h.into_iter().map(|v| v / fs).collect(),
        fs,
        horizon,
    })
}

impl WaveFir {
    pub fn from_taps(taps: Vec<f64>, fs: f64) -> Result<Self> {
        if taps.is_empty() || !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidConfig("filter needs taps and fs > 0".into()));
        }
        let horizon = (taps.len() - 1) as f64 / fs;
        Ok(Self { taps, fs, horizon })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn dc_gain(&self) -> f64 {
        self.taps.iter().sum()
    }

    /// Discrete self-convolution cut back to the original length. Fails when
    /// the discarded part holds more than [`MAX_TAIL_RATIO`] of the mass.
    pub fn squared(&self) -> Result<WaveFir> {
        let n = self.taps.len();
        let mut full = vec![0.0; 2 * n - 1];
        for (i, a) in self.taps.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in self.taps.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        let total: f64 = full.iter().map(|v| v.abs()).sum();
        let tail: f64 = full[n..].iter().map(|v| v.abs()).sum();
        let ratio = if total > 0.0 { tail / total } else { 0.0 };
        if ratio > MAX_TAIL_RATIO {
            return Err(Error::TruncationTail { ratio });
        }
        full.truncate(n);
        Ok(WaveFir {
            taps: full,
            fs: self.fs,
            horizon: self.horizon,
        })
    }

    /// `Σ_k taps[k]·x[newest − k]`, with samples older than the history
    /// treated as zero.
    pub fn convolve(&self, history: &History) -> Result<f64> {
        self.check_rate(history)?;
        Ok(self
            .taps
            .iter()
            .zip(history.samples.iter())
            .map(|(t, x)| t * x)
            .sum())
    }

    /// `Σ_{j≥1} taps[j]·x[newest + 1 − j]`: the output one sample after the
    /// newest entry, which is exact when `taps[0] = 0`.
    pub fn convolve_ahead(&self, history: &History) -> Result<f64> {
        self.check_rate(history)?;
        Ok(self
            .taps
            .iter()
            .skip(1)
            .zip(history.samples.iter())
            .map(|(t, x)| t * x)
            .sum())
    }

    fn check_rate(&self, history: &History) -> Result<()> {
        if (history.fs - self.fs).abs() > 1e-9 * self.fs {
            return Err(Error::SampleRateMismatch {
                filter: self.fs,
                history: history.fs,
            });
        }
        Ok(())
    }

    /// Samples of the step response, `Σ_{j≤k} taps[j]`.
    pub fn step_response(&self) -> Vec<f64> {
        self.taps
            .iter()
            .scan(0.0, |acc, t| {
                *acc += t;
                Some(*acc)
            })
            .collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["k", "t", "tap"])?;
        for (k, tap) in self.taps.iter().enumerate() {
            out.serialize((k, k as f64 / self.fs, tap))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Most recent samples of one signal, newest first, bounded by a capacity.
#[derive(Clone, Debug)]
pub struct History {
    fs: f64,
    capacity: usize,
    samples: VecDeque<f64>,
}

impl History {
    pub fn new(fs: f64, capacity: usize) -> Self {
        Self {
            fs,
            capacity: capacity.max(1),
            samples: VecDeque::with_capacity(capacity.max(1)),
        }
    }

    /// History sized to match a filter.
    pub fn for_filter(fir: &WaveFir) -> Self {
        Self::new(fir.fs, fir.len())
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn push(&mut self, x: f64) {
        if self.samples.len() == self.capacity {
            self.samples.pop_back();
        }
        self.samples.push_front(x);
    }

    pub fn newest(&self) -> Option<f64> {
        self.samples.front().copied()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::{g1_cf_approx, VehicleGains};

    fn nominal_fir() -> WaveFir {
        let alpha = VehicleGains::default().alpha().unwrap();
        let approx = g1_cf_approx(&alpha, 20).unwrap();
        g1_fir(&approx, DEFAULT_FS, DEFAULT_HORIZON).unwrap()
    }

    #[test]
    fn nominal_filter_shape() {
        let fir = nominal_fir();
        assert_eq!(fir.len(), 1501);
        assert!((fir.dc_gain() - 1.0).abs() < 0.02);
        let peak = fir.taps().iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        assert!(fir.taps()[0].abs() < 1e-4 * peak);
    }

    #[test]
    fn constant_rejected() {
        assert!(matches!(
            fir_from_tf(&RationalTf::one(), 100.0, 15.0),
            Err(Error::ImproperTf { .. })
        ));
    }

    #[test]
    fn convolution_basics() {
        let fir = WaveFir::from_taps(vec![0.25; 4], 10.0).unwrap();
        let mut h = History::for_filter(&fir);
        assert_eq!(fir.convolve(&h).unwrap(), 0.0);
        let mut out = Vec::new();
        for _ in 0..6 {
            h.push(1.0);
            out.push(fir.convolve(&h).unwrap());
        }
        assert_eq!(out, vec![0.25, 0.5, 0.75, 1.0, 1.0, 1.0]);
        assert_eq!(fir.convolve_ahead(&h).unwrap(), 0.75);
        let other = History::new(20.0, 4);
        assert!(matches!(
            fir.convolve(&other),
            Err(Error::SampleRateMismatch { .. })
        ));
    }

    #[test]
    fn unit_step_matches_cumulative_sum() {
        let fir = nominal_fir();
        let step = fir.step_response();
        let mut h = History::for_filter(&fir);
        for (k, want) in step.iter().enumerate().step_by(50) {
            while h.len() <= k {
                h.push(1.0);
            }
            assert!((fir.convolve(&h).unwrap() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn squared_filter_keeps_length_and_mass() {
        let fir = nominal_fir();
        let sq = fir.squared().unwrap();
        assert_eq!(sq.len(), fir.len());
        assert!((sq.dc_gain() - fir.dc_gain().powi(2)).abs() < 1e-3);
        let short = WaveFir::from_taps(vec![0.5, 0.5], 1.0).unwrap();
        assert!(matches!(short.squared(), Err(Error::TruncationTail { .. })));
    }

    #[test]
    fn csv_layout() {
        let fir = WaveFir::from_taps(vec![0.0, 0.5], 2.0).unwrap();
        let mut buf = Vec::new();
        fir.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,t,tap\n0,0.0,0.0\n1,0.5,0.5\n"
        );
    }
}
