//! Fused evaluations to body motion.

mod direction;
mod gate;
mod reflex;
mod velocity;

pub use direction::{ranked_slices, select_direction, DirectionCommand};
pub use gate::{obstacle_gate, RangeScan};
pub use reflex::{reflex_step, ReflexConfig, ReflexOutput, ReflexState, Strategy};
pub use velocity::{diff_drive_command, omni_command, VelocityCommand};

use thiserror::Error;

use crate::scoring::ScoringError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("N_extract = {n_extract} must lie in [1, {n_split}]")]
    ExtractOutOfRange { n_extract: usize, n_split: usize },
    #[error("evaluation and direction counts differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("evaluation value at slice {0} is not finite")]
    NonFinite(usize),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}
