use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use super::{RobotState, WorldModel};
use crate::control::RangeScan;
use crate::math::Vec2;

pub const DEFAULT_RAYS: usize = 360;
pub const DEFAULT_MAX_RANGE: f64 = 5.0;

/// Emulated laser scan from the robot center: `n_rays` evenly spaced
/// bearings starting at `-PI` in the robot frame, ranges capped at
/// `max_range`.
pub fn ray_scan(world: &WorldModel, state: &RobotState, n_rays: usize, max_range: f64) -> RangeScan {
    debug_assert!(n_rays >= 8);
    let origin = state.pose.position();
    let ranges: Vec<(f64, f64)> = (0..n_rays)
        .map(|j| {
            let bearing = -PI + TAU * j as f64 / n_rays as f64;
            let dir = Vec2::from_angle(state.pose.yaw + bearing);
            let d = world
                .first_obstacle(origin, dir, max_range)
                .map_or(max_range, |(t, _)| t);
            (bearing, d)
        })
        .collect();
    RangeScan { ranges, max_range }
}
