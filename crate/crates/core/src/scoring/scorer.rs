use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::ScoreProfile;
use crate::image::Image;
use crate::panorama::{Panorama, SliceSet};
use crate::sim::VisibilitySummary;

/// What a scorer gets to look at for one tick.
#[derive(Debug, Clone, Copy)]
pub enum SliceContext<'a> {
    /// Camera pipeline: per-slice crops plus the expanded band (for
    /// detectors that run once on the whole image and split afterwards).
    Pixels {
        slices: &'a SliceSet,
        crops: &'a [Image],
        expanded: &'a Panorama,
    },
    /// Simulator: what each slice's angular window sees.
    Visibility(&'a VisibilitySummary),
}

impl SliceContext<'_> {
    pub fn n_slices(&self) -> usize {
        match self {
            SliceContext::Pixels { slices, .. } => slices.len(),
            SliceContext::Visibility(v) => v.slices.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScorerError {
    #[error("scorer timed out")]
    Timeout,
    #[error("scorer returned {got} scores for {expected} slices")]
    WrongLength { expected: usize, got: usize },
    #[error("scorer cannot handle this context")]
    Unsupported,
    #[error("scorer failed: {0}")]
    Failed(String),
}

/// Produces one raw similarity per slice for an instruction.
pub trait Scorer {
    fn id(&self) -> &str;

    fn raw_scores(&mut self, instruction: &str, ctx: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError>;

    /// The last successful `raw_scores` came from a substitute source
    /// (e.g. a local oracle standing in for an unreachable remote model).
    fn degraded(&self) -> bool {
        false
    }
}

impl<S: Scorer + ?Sized> Scorer for &mut S {
    fn id(&self) -> &str {
        (**self).id()
    }

    fn raw_scores(&mut self, instruction: &str, ctx: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError> {
        (**self).raw_scores(instruction, ctx)
    }

    fn degraded(&self) -> bool {
        (**self).degraded()
    }
}

/// Latest complete profile of one scorer, reused when the scorer fails.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScorerSlot {
    last: Option<ScoreProfile>,
    pub last_error: Option<ScorerError>,
}

impl ScorerSlot {
    pub fn latest(&self) -> Option<&ScoreProfile> {
        self.last.as_ref()
    }

    pub fn clear(&mut self) {
        self.last = None;
        self.last_error = None;
    }
}

/// Score every slice and normalize. On failure the previous profile is
/// returned flagged stale; with no previous profile, a uniform one. Scores
/// from a degraded scorer are used but flagged stale too.
pub fn score_slices(
    scorer: &mut dyn Scorer,
    instruction: &str,
    ctx: &SliceContext<'_>,
    slot: &mut ScorerSlot,
) -> ScoreProfile {
    let n = ctx.n_slices();
    let result = scorer.raw_scores(instruction, ctx).and_then(|raw| {
        if raw.len() != n {
            return Err(ScorerError::WrongLength {
                expected: n,
                got: raw.len(),
            });
        }
        ScoreProfile::from_raw(scorer.id(), raw).map_err(|e| ScorerError::Failed(alloc::format!("{e}")))
    });
    match result {
        Ok(mut profile) => {
            profile.stale = scorer.degraded();
            slot.last = Some(profile.clone());
            slot.last_error = None;
            profile
        }
        Err(err) => {
            slot.last_error = Some(err);
            match &slot.last {
                Some(p) if p.raw.len() == n => ScoreProfile {
                    stale: true,
                    ..p.clone()
                },
                _ => ScoreProfile::uniform(scorer.id(), n),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{SliceVisibility, VisibilitySummary};
    use alloc::vec;

    struct Scripted {
        replies: Vec<Result<Vec<f64>, ScorerError>>,
    }

    impl Scorer for Scripted {
        fn id(&self) -> &str {
            "scripted"
        }
        fn raw_scores(&mut self, _: &str, _: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError> {
            self.replies.remove(0)
        }
    }

    fn summary(n: usize) -> VisibilitySummary {
        VisibilitySummary {
            slices: vec![SliceVisibility::default(); n],
            background: Vec::new(),
        }
    }

    #[test]
    fn failure_without_history_is_uniform() {
        let vis = summary(3);
        let mut s = Scripted {
            replies: vec![Err(ScorerError::Timeout)],
        };
        let mut slot = ScorerSlot::default();
        let p = score_slices(&mut s, "go", &SliceContext::Visibility(&vis), &mut slot);
        assert!(p.stale);
        assert_eq!(p.transformed, [1.0; 3]);
        assert_eq!(slot.last_error, Some(ScorerError::Timeout));
    }

    #[test]
    fn failure_reuses_last_profile() {
        let vis = summary(3);
        let mut s = Scripted {
            replies: vec![Ok(vec![0.0, 0.5, 1.0]), Err(ScorerError::Timeout), Ok(vec![0.3, 0.1])],
        };
        let mut slot = ScorerSlot::default();
        let ctx = SliceContext::Visibility(&vis);
        let first = score_slices(&mut s, "go", &ctx, &mut slot);
        assert!(!first.stale);
        let second = score_slices(&mut s, "go", &ctx, &mut slot);
        assert!(second.stale);
        assert_eq!(second.transformed, first.transformed);
        // wrong length counts as a failure too
        let third = score_slices(&mut s, "go", &ctx, &mut slot);
        assert!(third.stale);
        assert_eq!(slot.last_error, Some(ScorerError::WrongLength { expected: 3, got: 2 }));
    }

    #[test]
    fn constant_scores_are_neutral() {
        let vis = summary(4);
        let mut s = Scripted {
            replies: vec![Ok(vec![0.3; 4])],
        };
        let p = score_slices(&mut s, "go", &SliceContext::Visibility(&vis), &mut ScorerSlot::default());
        assert_eq!(p.transformed, [1.0; 4]);
    }
}
