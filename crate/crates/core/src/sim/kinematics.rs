
use super::WorldModel;
use crate::control::VelocityCommand;
use crate::math::{wrap_angle, Vec2};

pub const DEFAULT_FOOTPRINT: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Pose {
            x,
            y,
            yaw: wrap_angle(yaw),
        }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Robot-frame vector to world frame.
    pub fn to_world(&self, v: Vec2) -> Vec2 {
        v.rotate(self.yaw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RobotState {
    pub pose: Pose,
    /// Side of the square base. Collisions use a disc of this diameter.
    pub footprint: f64,
    pub commanded: VelocityCommand,
}

impl RobotState {
    pub fn new(pose: Pose) -> Self {
        RobotState {
            pose,
            footprint: DEFAULT_FOOTPRINT,
            commanded: VelocityCommand::STOP,
        }
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.footprint
    }

    /// Disc footprint clear of every wall and entity and inside the bounds.
    pub fn is_clear(&self, world: &WorldModel) -> bool {
        let p = self.pose.position();
        world.bounds.contains_disc(p, self.radius()) && world.clearance_along(p, p) >= self.radius()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: RobotState,
    pub collided: bool,
}

/// One Euler step of the differential drive. When the disc swept along the
/// translation would touch a wall, an entity or leave the bounds, the
/// position is kept and the step reports a collision; the heading still
/// integrates.
pub fn step_kinematics(world: &WorldModel, state: &RobotState, cmd: &VelocityCommand, dt: f64) -> StepOutcome {
    debug_assert!(dt > 0.0);
    let p = state.pose;
    let from = p.position();
    let to = from + Vec2::from_angle(p.yaw) * (cmd.linear * dt);
    let yaw = wrap_angle(p.yaw + cmd.rotate * dt);
    let r = state.radius();
    let collided = cmd.linear != 0.0 && (!world.bounds.contains_disc(to, r) || world.clearance_along(from, to) < r);
    let position = if collided { from } else { to };
    StepOutcome {
        state: RobotState {
            pose: Pose {
                x: position.x,
                y: position.y,
                yaw,
            },
            footprint: state.footprint,
            commanded: *cmd,
        },
        collided,
    }
}
