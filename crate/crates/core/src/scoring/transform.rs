use alloc::vec::Vec;

use super::ScoringError;

pub const A_MIN: f64 = 0.1;
pub const A_MAX: f64 = 1.0;

/// Affinely rescale raw similarities so the minimum maps to 0.1 and the
/// maximum to 1.0. If all scores are equal every slice gets 1.0.
pub fn transform_scores(raw: &[f64]) -> Result<Vec<f64>, ScoringError> {
    if raw.is_empty() {
        return Err(ScoringError::Empty);
    }
    if let Some(i) = raw.iter().position(|s| !s.is_finite()) {
        return Err(ScoringError::NonFinite(i));
    }
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Ok(alloc::vec![A_MAX; raw.len()]);
    }
    let span = max - min;
    Ok(raw
        .iter()
        .map(|&s| {
            if s == max {
                A_MAX
            } else {
                A_MIN + (A_MAX - A_MIN) * ((s - min) / span)
            }
        })
        .collect())
}

/// Per-slice evaluation `e`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FusedProfile {
    pub e: Vec<f64>,
}

impl FusedProfile {
    /// Single-scorer strategies use the transformed scores directly.
    pub fn single(a: &[f64]) -> Self {
        FusedProfile { e: a.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }
}

/// Elementwise product of two transformed profiles.
pub fn fuse(first: &[f64], second: &[f64]) -> Result<FusedProfile, ScoringError> {
    if first.len() != second.len() {
        return Err(ScoringError::LengthMismatch(first.len(), second.len()));
    }
    Ok(FusedProfile {
        e: first.iter().zip(second).map(|(a, b)| a * b).collect(),
    })
}
