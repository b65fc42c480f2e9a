//! Fixed-step time-domain simulation of the platoon.

mod chain;
mod config;
mod engine;
mod noise;
mod scenario;
mod state;
mod trace;

pub use chain::chain_state_space;
pub use config::{EndServo, PlatoonConfig};
pub use engine::{run_scenario, run_scenario_with, WaveFilters};
pub use noise::{inject_noise, noise_rng};
pub use scenario::{Command, Event, NoiseSpec, ScenarioSpec};
pub use state::{
    build_platoon, step, EndCommands, EndInput, Integrator, PlatoonState, Segment, VehicleState,
    MAX_SPEED,
};
pub use trace::SimulationTrace;
