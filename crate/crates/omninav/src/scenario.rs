//! Scenario and suite files (JSON).

use std::fs;
use std::path::{Path, PathBuf};

use omninav_core::sim::{Pose, WorldModel};
use omninav_core::{ReflexConfig, Strategy, Vec2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::world_file::load_world;

pub const DEFAULT_TIMEOUT_S: f64 = 30.0;
pub const DEFAULT_JITTER_M: f64 = 0.05;
pub const DEFAULT_JITTER_RAD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub yaw: f64,
}

impl From<PoseSpec> for Pose {
    fn from(p: PoseSpec) -> Pose {
        Pose::new(p.x, p.y, p.yaw)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub label: String,
    pub point: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    /// Seconds from episode start.
    pub t: f64,
    pub instruction: String,
}

/// Something the robot should pass near, by entity label or region name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Checkpoint {
    Entity(String),
    Region(String),
}

impl Checkpoint {
    pub fn name(&self) -> &str {
        match self {
            Checkpoint::Entity(s) | Checkpoint::Region(s) => s,
        }
    }

    /// Distance from `p` to the footprint or region; 0 inside.
    pub fn distance(&self, world: &WorldModel, p: Vec2) -> Option<f64> {
        match self {
            Checkpoint::Entity(label) => world.entity(label).map(|e| e.shape.distance_to(p)),
            Checkpoint::Region(name) => world.region(name).map(|r| r.distance_to(p)),
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_trials() -> usize {
    1
}

fn default_timeout() -> f64 {
    DEFAULT_TIMEOUT_S
}

fn default_jitter() -> [f64; 2] {
    [DEFAULT_JITTER_M, DEFAULT_JITTER_RAD]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// World file, relative to the scenario file.
    pub world: PathBuf,
    pub origin: PoseSpec,
    pub target: Target,
    pub schedule: Vec<ScheduleEntry>,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
    /// Uniform origin jitter half-widths `[m, rad]`.
    #[serde(default = "default_jitter")]
    pub jitter: [f64; 2],
    #[serde(default)]
    pub reflex: ReflexConfig,
    #[serde(default)]
    pub checkpoints: Vec<Checkpoint>,
    /// End the trial when the gate holds the robot against an obstacle.
    /// Off for multi-instruction runs that wait for the next instruction.
    #[serde(default = "default_true")]
    pub stop_on_contact: bool,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Scenario(format!("{}: {m}", self.name)));
        if self.trials == 0 {
            return bad("trial count must be at least 1");
        }
        match self.schedule.first() {
            Some(first) if first.t == 0.0 => {}
            Some(_) => return bad("schedule must start at t = 0"),
            None => return bad("schedule is empty"),
        }
        if self.schedule.windows(2).any(|w| w[1].t < w[0].t) {
            return bad("schedule times must be nondecreasing");
        }
        if self.schedule.iter().any(|e| e.instruction.trim().is_empty()) {
            return bad("empty instruction in schedule");
        }
        if !(self.timeout_s >= 0.0 && self.timeout_s.is_finite()) {
            return bad("timeout must be a finite nonnegative number");
        }
        if self.jitter.iter().any(|j| !(*j >= 0.0)) {
            return bad("jitter must be nonnegative");
        }
        let r = &self.reflex;
        if !(r.tick_s > 0.0) || r.n_split < 2 || r.n_extract == 0 || r.n_extract > r.n_split {
            return bad("reflex parameters out of range");
        }
        Ok(())
    }

    /// Instruction in force at time `t`.
    pub fn instruction_at(&self, t: f64) -> Option<&str> {
        schedule_instruction(&self.schedule, t)
    }

    pub fn with_strategy(&self, strategy: Strategy) -> Scenario {
        let mut s = self.clone();
        s.strategy = strategy;
        s.reflex.strategy = strategy;
        s
    }
}

/// Parse a scenario and resolve its world path against `base`.
/// Latest entry of a time-sorted schedule that has started by `t`.
pub fn schedule_instruction(schedule: &[ScheduleEntry], t: f64) -> Option<&str> {
    schedule
        .iter()
        .rev()
        .find(|e| e.t <= t + 1e-9)
        .map(|e| e.instruction.as_str())
}

pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario> {
    let mut s: Scenario = serde_json::from_str(text).map_err(|e| Error::parse(origin, &e))?;
    s.reflex.strategy = s.strategy;
    if s.world.is_relative() {
        if let Some(dir) = origin.parent() {
            s.world = dir.join(&s.world);
        }
    }
    s.validate()?;
    Ok(s)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, path)
}

/// Scenario plus its loaded world.
pub fn load_scenario_world(s: &Scenario) -> Result<WorldModel> {
    load_world(&s.world)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Path(PathBuf),
    Inline(Box<Scenario>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFile {
    pub name: String,
    pub scenarios: Vec<SuiteEntry>,
    pub strategies: Vec<Strategy>,
    /// Overrides each scenario's trial count when set.
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub name: String,
    pub scenarios: Vec<Scenario>,
    pub strategies: Vec<Strategy>,
}

pub fn load_suite(path: impl AsRef<Path>) -> Result<Suite> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: SuiteFile = serde_json::from_str(&text).map_err(|e| Error::parse(path, &e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut scenarios = Vec::new();
    for entry in file.scenarios {
        let mut s = match entry {
            SuiteEntry::Path(p) => load_scenario(dir.join(p))?,
            SuiteEntry::Inline(s) => {
                let text = serde_json::to_string(&s).expect("scenario serializes");
                parse_scenario(&text, &dir.join("inline.json"))?
            }
        };
        if let Some(n) = file.trials {
            s.trials = n;
        }
        if let Some(seed) = file.seed {
            s.seed = seed;
        }
        s.validate()?;
        scenarios.push(s);
    }
    if file.strategies.is_empty() {
        return Err(Error::Scenario(format!("{}: no strategies", file.name)));
    }
    Ok(Suite {
        name: file.name,
        scenarios,
        strategies: file.strategies,
    })
}
