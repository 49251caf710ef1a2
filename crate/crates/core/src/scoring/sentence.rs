use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::panorama::SliceSet;

/// Detections below this confidence are dropped before sentence building.
pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.5;

/// Axis-aligned box `(x, y, w, h)` in expanded-panorama pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center_x(&self) -> f64 {
        self.x + 0.5 * self.w
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Detection {
    pub label: String,
    pub bbox: BBox,
    pub confidence: f64,
}

impl Detection {
    pub fn new(label: impl Into<String>, bbox: BBox, confidence: f64) -> Option<Self> {
        (bbox.w > 0.0 && bbox.h > 0.0 && (0.0..=1.0).contains(&confidence)).then(|| Detection {
            label: label.into(),
            bbox,
            confidence,
        })
    }
}

/// Labels sorted by box area (largest first, stable on ties) joined with
/// `", "`.
pub fn detections_to_sentence(dets: &[Detection]) -> String {
    let mut order: Vec<&Detection> = dets.iter().collect();
    order.sort_by(|a, b| {
        b.bbox
            .area()
            .partial_cmp(&a.bbox.area())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut out = String::new();
    for (i, d) in order.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&d.label);
    }
    out
}

/// Assign each detection to every slice whose column range holds its box
/// center column (taken modulo the panorama width).
pub fn split_detections(dets: &[Detection], slices: &SliceSet) -> Vec<Vec<Detection>> {
    let mut out = alloc::vec![Vec::new(); slices.len()];
    let w = slices.width as f64;
    for d in dets {
        let c = d.bbox.center_x();
        let c = c - (c / w).floor() * w;
        let column = (c.floor() as usize).min(slices.width - 1);
        for i in slices.slices_containing(column) {
            out[i].push(d.clone());
        }
    }
    out
}
