//! Image-space geometry: dual-fisheye stitching into an equirectangular
//! band, cropping, and cyclic slicing.
//!
//! Camera frame: `+x` forward, `+y` left, `+z` up. Azimuth is measured
//! counterclockwise from `+x` (robot yaw convention) while panorama columns
//! run clockwise, so azimuth decreases as the column index grows.

mod align;
mod blend;
mod equirect;
mod lens;
mod slices;
mod stitch;

pub use align::{align_halves, Alignment, ControlPointSet};
pub use blend::blend_halves;
pub use equirect::{centered_band, crop_band, Panorama};
pub use lens::{
    compensate_vignette, unwarp_fisheye, Facing, FisheyePair, LensModel, Projection, Unwarped,
    Vignette,
};
pub use slices::{make_slices, ColumnRange, Slice, SliceSet};
pub use stitch::{apply_vignette, render_fisheye, stitch_pair, Stitched};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("fisheye image must be square, got {width}x{height}")]
    NotSquare { width: usize, height: usize },
    #[error("image sizes differ: {0:?} vs {1:?}")]
    SizeMismatch((usize, usize), (usize, usize)),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("crop band is empty or outside the image")]
    EmptyBand,
    #[error("need at least 3 control point pairs, got {0}")]
    TooFewControlPoints(usize),
    #[error("control point pair {0} lies outside the overlap band")]
    ControlPointOutsideOverlap(usize),
    #[error("the two halves do not overlap after alignment")]
    NoOverlap,
}
