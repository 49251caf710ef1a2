//! Reflex-based open-vocabulary navigation core.
//!
//! The crate is `no_std` (with `alloc`) and holds every pure piece of the
//! pipeline:
//!
//! - [`panorama`]: dual-fisheye stitching into an equirectangular band,
//!   cropping, and cyclic slicing into `N_split` angular windows.
//! - [`scoring`]: per-slice similarity normalization into `[0.1, 1.0]`,
//!   detection sentences, a deterministic text embedding and the
//!   multiplicative fusion of two scorers.
//! - [`control`]: weighted top-N direction selection, the two-wheel and
//!   omnidirectional velocity laws, the range-scan obstacle gate and the
//!   composed reflex tick.
//! - [`sim`]: a 2D semantic world with differential-drive kinematics,
//!   ray-cast range scans, slice visibility and the two oracle scorers.
//!
//! File formats, networking and the CLI live in the `omninav` crate.
#![no_std]
#![forbid(unsafe_code)]
// float methods come from `num_traits::Float`; when std is anywhere in the
// build graph (dev-dependencies) its inherent methods win and the imports
// look unused
#![allow(unused_imports)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod control;
pub mod image;
pub mod math;
pub mod panorama;
pub mod scoring;
pub mod sim;

pub use control::{
    diff_drive_command, obstacle_gate, omni_command, reflex_step, select_direction,
    ControlError, DirectionCommand, ReflexConfig, ReflexOutput, ReflexState, Strategy,
    VelocityCommand,
};
pub use image::Image;
pub use math::{wrap_angle, Rotation, Vec2, Vec3};
pub use panorama::{
    align_halves, blend_halves, compensate_vignette, crop_band, make_slices, unwarp_fisheye,
    Alignment, ColumnRange, ControlPointSet, FisheyePair, GeometryError, LensModel, Panorama,
    Slice, SliceSet, Unwarped, Vignette,
};
pub use scoring::{
    detections_to_sentence, embed_text, fuse, score_slices, split_detections, transform_scores,
    Detection, FusedProfile, Instruction, ScoreProfile, Scorer, ScorerError, ScorerSlot,
    ScoringError, SliceContext,
};
pub use sim::{
    object_oracle_score, ray_scan, region_oracle_score, step_kinematics, visibility, Entity,
    HeightClass, ObjectOracle, Pose, RangeScan, Region, RegionOracle, RobotState, Segment, Shape,
    StepOutcome, VisibilitySummary, WorldModel,
};
