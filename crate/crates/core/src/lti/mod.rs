//! Rational transfer functions, realizations, sampling and frequency response.

mod balance;
pub mod freq;
pub mod limit;
pub mod poly;
pub mod rational;
pub mod state_space;

pub use freq::{freq_response, freq_response_with, log_grid, FrequencyResponse};
pub use limit::{origin_limit, OriginLimit};
pub use poly::Polynomial;
pub use rational::{dc_gain, eval_at, tf_add, tf_inv, tf_mul, RationalTf};
pub use state_space::{impulse_response, to_state_space, MarginalPoles, StateSpace};
