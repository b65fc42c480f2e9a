//! Boundary reflection laws, absorber controllers and end-vehicle gains.

mod absorber;
mod gains;
mod prediction;
mod reflection;
mod variant;

pub use absorber::{FrontAbsorber, Ramp, RearAbsorber, WaveComponents};
pub use gains::{kappa_front, kappa_rear, kappa_rear_refined, kappas, ramp_slopes, GainReport};
pub use prediction::{chain_tf_prediction, ChainPrediction, WaveExpr};
pub use reflection::{forced_end_reflection_tf, free_end_reflection_tf};
pub use variant::Variant;
