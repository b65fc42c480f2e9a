pub mod boundary;
pub mod error;
pub mod harness;
pub mod lti;
pub mod par;
pub mod sim;
pub mod wave;

pub use error::{Error, Result};
