//! File formats, batch harness, scorer gateway and session server around
//! `omninav-core`.

pub mod config;
pub mod cps;
pub mod episode;
pub mod error;
pub mod export;
pub mod gateway;
pub mod harness;
pub mod imageio;
pub mod scenario;
pub mod world_file;

pub use error::{Error, Result, EXIT_IO, EXIT_SCENARIO};
