use alloc::string::String;
use alloc::vec::Vec;

use super::VisibilitySummary;
use crate::scoring::{
    bag_of_words, cosine, detections_to_sentence, embed_text, normalize, BBox, Detection, Scorer, ScorerError,
    SliceContext, EMBED_DIM,
};

fn vocab_bag(words: &[String]) -> Vec<f64> {
    let mut bag = alloc::vec![0.0; EMBED_DIM];
    for w in words {
        for (b, x) in bag.iter_mut().zip(bag_of_words(w)) {
            *b += x;
        }
    }
    normalize(&mut bag);
    bag
}

/// Weight of a visible object's label in the whole-view mix, per unit of
/// slice width it fills.
pub const OBJECT_SHARE: f64 = 0.5;

/// Whole-view scorer: each slice is described by the vocabularies of the
/// regions it covers, mixed by coverage, with the world's background words
/// filling the uncovered share. Visible objects add their labels at
/// `OBJECT_SHARE` times their share of the slice.
pub fn region_oracle_score(instruction: &str, vis: &VisibilitySummary) -> Vec<f64> {
    let q = embed_text(instruction);
    let background = vocab_bag(&vis.background);
    vis.slices
        .iter()
        .map(|s| {
            let mut mix = alloc::vec![0.0; EMBED_DIM];
            for r in &s.regions {
                for (m, x) in mix.iter_mut().zip(vocab_bag(&r.vocab)) {
                    *m += r.fraction * x;
                }
            }
            let rest = (1.0 - s.covered()).max(0.0);
            for (m, x) in mix.iter_mut().zip(&background) {
                *m += rest * x;
            }
            for e in &s.entities {
                let w = OBJECT_SHARE * (e.apparent_size / s.width).min(1.0);
                for (m, x) in mix.iter_mut().zip(bag_of_words(&e.label)) {
                    *m += w * x;
                }
            }
            cosine(&q, &mix)
        })
        .collect()
}

/// Per-object scorer: each slice becomes the sentence of its visible
/// labels, largest apparent size first.
pub fn object_oracle_score(instruction: &str, vis: &VisibilitySummary) -> Vec<f64> {
    let q = embed_text(instruction);
    vis.slices
        .iter()
        .map(|s| {
            let dets: Vec<Detection> = s
                .entities
                .iter()
                .filter_map(|e| {
                    let bbox = BBox {
                        x: 0.0,
                        y: 0.0,
                        w: e.apparent_size,
                        h: 1.0,
                    };
                    Detection::new(e.label.clone(), bbox, 1.0)
                })
                .collect();
            cosine(&q, &embed_text(&detections_to_sentence(&dets)))
        })
        .collect()
}

/// Built-in stand-in for the image-text model.
#[derive(Debug, Clone, Default)]
pub struct RegionOracle;

impl RegionOracle {
    pub const ID: &'static str = "clip";
}

impl Scorer for RegionOracle {
    fn id(&self) -> &str {
        Self::ID
    }

    fn raw_scores(&mut self, instruction: &str, ctx: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError> {
        match ctx {
            SliceContext::Visibility(v) => Ok(region_oracle_score(instruction, v)),
            SliceContext::Pixels { .. } => Err(ScorerError::Unsupported),
        }
    }
}

/// Built-in stand-in for the detector plus sentence embedder.
#[derive(Debug, Clone, Default)]
pub struct ObjectOracle;

impl ObjectOracle {
    pub const ID: &'static str = "detic";
}

impl Scorer for ObjectOracle {
    fn id(&self) -> &str {
        Self::ID
    }

    fn raw_scores(&mut self, instruction: &str, ctx: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError> {
        match ctx {
            SliceContext::Visibility(v) => Ok(object_oracle_score(instruction, v)),
            SliceContext::Pixels { .. } => Err(ScorerError::Unsupported),
        }
    }
}
