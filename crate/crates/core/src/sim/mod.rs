//! Desk-scale 2D semantic world standing in for the robot and its camera.

mod geom;
mod kinematics;
mod oracle;
mod raycast;
mod visibility;
mod world;

pub use crate::control::RangeScan;
pub use kinematics::{step_kinematics, Pose, RobotState, StepOutcome, DEFAULT_FOOTPRINT};
pub use oracle::{object_oracle_score, region_oracle_score, ObjectOracle, RegionOracle};
pub use raycast::{ray_scan, DEFAULT_MAX_RANGE, DEFAULT_RAYS};
pub use visibility::{
    visibility, EntitySighting, RegionCoverage, SliceVisibility, VisibilitySummary, DEFAULT_RAYS_PER_SLICE,
};
pub use world::{Bounds, Entity, HeightClass, HitTarget, Region, Segment, Shape, WorldError, WorldModel};
