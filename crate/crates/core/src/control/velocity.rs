
use super::DirectionCommand;
use crate::math::Vec2;

/// Two-wheel base command.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VelocityCommand {
    /// m/s, `|linear| <= 1`.
    pub linear: f64,
    /// rad/s, counterclockwise positive.
    pub rotate: f64,
    /// The obstacle gate zeroed `linear`.
    pub gated: bool,
}

impl VelocityCommand {
    pub const STOP: VelocityCommand = VelocityCommand {
        linear: 0.0,
        rotate: 0.0,
        gated: false,
    };
}

/// `rotate = k * theta`; full speed ahead only while `|theta| < c_thre`,
/// otherwise turn in place.
pub fn diff_drive_command(d: &DirectionCommand, k: f64, c_thre: f64) -> VelocityCommand {
    VelocityCommand {
        linear: if d.theta.abs() < c_thre { 1.0 } else { 0.0 },
        rotate: k * d.theta,
        gated: false,
    }
}

/// Planar translation along `b` for holonomic bases.
pub fn omni_command(d: &DirectionCommand, speed: f64) -> Vec2 {
    let n = d.b.norm();
    if n < 1e-6 {
        Vec2::ZERO
    } else {
        d.b * (speed / n)
    }
}
