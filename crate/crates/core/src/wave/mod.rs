//! The wave transfer function `G₁` and its approximations.

mod alpha;
mod approx;
mod exact;
mod export;
mod fir;
mod hinf;

pub use alpha::{make_alpha, AlphaTf, VehicleGains};
pub use approx::{g1_cf_approx, recurse_value, WaveTfApprox, DEFAULT_ITERATIONS, DEGREE_CAP};
pub use exact::{
    g1_exact, g1_from_excess, g1_minus_one_from_excess, g2_exact, ExactWave, WaveTransfer,
};
pub use export::write_bode_csv;
pub use fir::{fir_from_tf, g1_fir, History, WaveFir, DEFAULT_FS, DEFAULT_HORIZON, MAX_TAIL_RATIO};
pub use hinf::{check_hinf_bound, HinfReport};
