//! From instruction plus slices to the fused per-slice evaluation.

mod embed;
mod scorer;
mod sentence;
mod transform;

pub use embed::{bag_of_words, cosine, embed_text, normalize, EMBED_DIM};
pub use scorer::{score_slices, Scorer, ScorerError, ScorerSlot, SliceContext};
pub use sentence::{
    detections_to_sentence, split_detections, BBox, Detection, DEFAULT_MIN_CONFIDENCE,
};
pub use transform::{fuse, transform_scores, FusedProfile, A_MAX, A_MIN};

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoringError {
    #[error("score vector is empty")]
    Empty,
    #[error("score vector contains a non-finite value at slice {0}")]
    NonFinite(usize),
    #[error("profile lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("instruction text is empty")]
    EmptyInstruction,
}

/// Natural-language instruction issued to the robot.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Instruction {
    pub text: String,
    /// Seconds since episode start.
    pub issued_at: f64,
}

impl Instruction {
    pub fn new(text: impl Into<String>, issued_at: f64) -> Result<Self, ScoringError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(ScoringError::EmptyInstruction);
        }
        Ok(Instruction { text, issued_at })
    }
}

/// Raw and normalized per-slice scores from one scorer.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreProfile {
    pub scorer_id: String,
    pub raw: Vec<f64>,
    pub transformed: Vec<f64>,
    /// Reused from an earlier tick because the scorer failed.
    pub stale: bool,
}

impl ScoreProfile {
    pub fn from_raw(scorer_id: impl Into<String>, raw: Vec<f64>) -> Result<Self, ScoringError> {
        let transformed = transform_scores(&raw)?;
        Ok(ScoreProfile {
            scorer_id: scorer_id.into(),
            raw,
            transformed,
            stale: false,
        })
    }

    /// Neutral profile used before any scorer result exists.
    pub fn uniform(scorer_id: impl Into<String>, n: usize) -> Self {
        ScoreProfile {
            scorer_id: scorer_id.into(),
            raw: alloc::vec![0.0; n],
            transformed: alloc::vec![A_MAX; n],
            stale: true,
        }
    }
}
