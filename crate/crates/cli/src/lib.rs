//! Configuration, controller files and the command implementations behind
//! the `cablesea` binary.

pub mod artifact;
pub mod commands;
pub mod config;

pub use commands::{simulate, synthesize, tune_velocity, ControllerChoice, CONTROLLER_FILE};
pub use config::Config;
