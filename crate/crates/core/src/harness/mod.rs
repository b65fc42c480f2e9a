//! Metrics, experiments, sweeps and verification suites.

mod experiments;
mod manifest;
mod metrics;
mod verify;

pub use experiments::{
    acceleration_duration, fit_loglog, median, noise_medians, noise_study, sweep,
    wave_cross_validation, write_noise_csv, Horizon, NoiseMedians, NoiseRow, NoiseStudy, SlopeFit,
    Snapshot, SweepOptions, SweepResult, SweepRow, WaveCheck, MSE_HORIZON,
};
pub use manifest::{
    ControllerSection, Manifest, Overrides, PlantSection, ScenarioSection, SweepSection,
    DEFAULT_SIZES,
};
pub use metrics::{mse_velocity, noise_metrics, settling_time, MetricsReport, SETTLING_BAND};
pub use verify::{
    approximant_error, chain_prediction_error, verify, Check, Suite, VerifyOptions, VerifyReport,
};
