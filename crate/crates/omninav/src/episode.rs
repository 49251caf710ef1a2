//! Single-owner simulation stepper shared by the batch harness and the live
//! session server.

use omninav_core::control::VelocityCommand;
use omninav_core::panorama::SliceSet;
use omninav_core::scoring::{ScoreProfile, Scorer, SliceContext};
use omninav_core::sim::{
    ray_scan, step_kinematics, visibility, ObjectOracle, Pose, RegionOracle, RobotState, WorldModel,
    DEFAULT_MAX_RANGE, DEFAULT_RAYS, DEFAULT_RAYS_PER_SLICE,
};
use omninav_core::{reflex_step, ControlError, ReflexConfig, ReflexState};

/// Equirect width the slice geometry is laid out on.
pub const PANORAMA_WIDTH: usize = 2000;

/// The scorer pair feeding the reflex.
pub struct Scorers {
    pub clip: Box<dyn Scorer + Send>,
    pub detic: Box<dyn Scorer + Send>,
}

impl Scorers {
    pub fn oracles() -> Self {
        Scorers {
            clip: Box::new(RegionOracle),
            detic: Box::new(ObjectOracle),
        }
    }
}

impl Default for Scorers {
    fn default() -> Self {
        Scorers::oracles()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TickRecord {
    /// Time at the end of the tick.
    pub t: f64,
    /// Pose after the step.
    pub pose: Pose,
    pub velocity: VelocityCommand,
    pub theta: f64,
    pub e: Vec<f64>,
    pub contributors: Vec<(usize, f64)>,
    pub clip: Option<ScoreProfile>,
    pub detic: Option<ScoreProfile>,
    pub instruction: Option<String>,
    /// The swept footprint hit something; position was held.
    pub collided: bool,
    /// The gate held back a forward command: the square body is touching.
    pub contact: bool,
}


pub struct Episode {
    pub world: WorldModel,
    pub config: ReflexConfig,
    pub slices: SliceSet,
    pub state: RobotState,
    pub origin: Pose,
    pub reflex: ReflexState,
    pub ticks: u64,
    pub rays_per_slice: usize,
    pub n_rays: usize,
    pub max_range: f64,
}

impl Episode {
    pub fn new(world: WorldModel, config: ReflexConfig, origin: Pose) -> Result<Self, omninav_core::GeometryError> {
        let slices = SliceSet::for_width(PANORAMA_WIDTH, config.n_split, config.overlap_frac)?;
        Ok(Episode {
            world,
            config,
            slices,
            state: RobotState::new(origin),
            origin,
            reflex: ReflexState::default(),
            ticks: 0,
            rays_per_slice: DEFAULT_RAYS_PER_SLICE,
            n_rays: DEFAULT_RAYS,
            max_range: DEFAULT_MAX_RANGE,
        })
    }

    pub fn t(&self) -> f64 {
        self.ticks as f64 * self.config.tick_s
    }

    pub fn reset(&mut self) {
        self.state = RobotState::new(self.origin);
        self.reflex.reset();
        self.ticks = 0;
    }

    /// One control period. Without an instruction the robot holds still.
    pub fn tick(&mut self, instruction: Option<&str>, scorers: &mut Scorers) -> Result<TickRecord, ControlError> {
        let n = self.slices.len();
        let (velocity, theta, e, contributors, clip, detic) = match instruction {
            Some(text) => {
                let vis = visibility(&self.world, &self.state, &self.slices, self.rays_per_slice);
                let scan = ray_scan(&self.world, &self.state, self.n_rays, self.max_range);
                let out = reflex_step(
                    &self.config,
                    &mut self.reflex,
                    text,
                    &SliceContext::Visibility(&vis),
                    &self.slices.directions(),
                    scorers.clip.as_mut(),
                    scorers.detic.as_mut(),
                    &scan,
                )?;
                (
                    out.velocity,
                    out.direction.theta,
                    out.fused.e,
                    out.direction.contributors,
                    out.clip,
                    out.detic,
                )
            }
            None => (
                VelocityCommand::STOP,
                self.reflex.previous_theta,
                vec![1.0; n],
                Vec::new(),
                None,
                None,
            ),
        };
        let contact = velocity.gated && theta.abs() < self.config.c_thre;
        let step = step_kinematics(&self.world, &self.state, &velocity, self.config.tick_s);
        self.state = step.state;
        self.ticks += 1;
        Ok(TickRecord {
            t: self.t(),
            pose: self.state.pose,
            velocity,
            theta,
            e,
            contributors,
            clip,
            detic,
            instruction: instruction.map(str::to_owned),
            collided: step.collided,
            contact,
        })
    }
}
