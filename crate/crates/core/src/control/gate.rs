use alloc::vec::Vec;


use super::{DirectionCommand, VelocityCommand};
use crate::math::wrap_angle;

/// Planar range scan around the robot.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RangeScan {
    /// `(bearing rad in robot frame, distance m)`.
    pub ranges: Vec<(f64, f64)>,
    pub max_range: f64,
}

impl RangeScan {
    /// Closest return with bearing within `cone` of `heading`.
    pub fn min_in_cone(&self, heading: f64, cone: f64) -> Option<f64> {
        self.ranges
            .iter()
            .filter(|(bearing, _)| wrap_angle(bearing - heading).abs() <= cone)
            .map(|&(_, d)| d)
            .fold(None, |m, d| Some(m.map_or(d, |m: f64| m.min(d))))
    }
}

/// Zero the linear velocity when an obstacle closer than `stop_dist` lies
/// within `cone` of the commanded heading. Turning is left untouched. An
/// empty scan always gates.
pub fn obstacle_gate(
    v: &VelocityCommand,
    d: &DirectionCommand,
    scan: &RangeScan,
    stop_dist: f64,
    cone: f64,
) -> VelocityCommand {
    let blocked = scan.ranges.is_empty()
        || scan
            .min_in_cone(d.theta, cone)
            .is_some_and(|nearest| nearest < stop_dist);
    if blocked {
        VelocityCommand {
            linear: 0.0,
            rotate: v.rotate,
            gated: true,
        }
    } else {
        *v
    }
}
