//! Batch trials, strategy comparison and summary statistics.

use std::fmt;

use omninav_core::sim::{Pose, WorldModel};
use omninav_core::Strategy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::episode::{Episode, Scorers, TickRecord};
use crate::error::{Error, Result};
use crate::scenario::{Checkpoint, Scenario, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    Collision,
    Timeout,
    Operator,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Collision => "collision",
            Termination::Timeout => "timeout",
            Termination::Operator => "operator",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub scenario: String,
    pub strategy: Strategy,
    pub trial: usize,
    pub origin: Pose,
    pub ticks: Vec<TickRecord>,
    pub final_pose: Pose,
    pub final_error: f64,
    pub termination: Termination,
    pub duration: f64,
}

impl TrialResult {
    pub fn path(&self) -> impl Iterator<Item = omninav_core::Vec2> + '_ {
        std::iter::once(self.origin.position()).chain(self.ticks.iter().map(|t| t.pose.position()))
    }
}

/// Origin for one trial: the scenario origin shifted by seeded uniform
/// jitter.
pub fn trial_origin(s: &Scenario, trial: usize) -> Pose {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial as u64));
    let [dm, da] = s.jitter;
    let mut u = |h: f64| if h > 0.0 { rng.random_range(-h..=h) } else { 0.0 };
    let (dx, dy, dyaw) = (u(dm), u(dm), u(da));
    Pose::new(s.origin.x + dx, s.origin.y + dy, s.origin.yaw + dyaw)
}

pub fn run_trial(s: &Scenario, world: &WorldModel, trial: usize, scorers: &mut Scorers) -> Result<TrialResult> {
    let origin = trial_origin(s, trial);
    let mut ep = Episode::new(world.clone(), s.reflex, origin)?;
    if !ep.state.is_clear(world) {
        return Err(Error::Scenario(format!(
            "{}: trial {trial} starts in contact at ({:.3}, {:.3})",
            s.name, origin.x, origin.y
        )));
    }
    let max_ticks = (s.timeout_s / s.reflex.tick_s).round() as u64;
    let mut ticks = Vec::with_capacity(max_ticks as usize);
    let mut termination = Termination::Timeout;
    while ep.ticks < max_ticks {
        let rec = ep.tick(s.instruction_at(ep.t()), scorers)?;
        let stop = rec.collided || (s.stop_on_contact && rec.contact);
        ticks.push(rec);
        if stop {
            termination = Termination::Collision;
            break;
        }
    }
    let final_pose = ep.state.pose;
    Ok(TrialResult {
        scenario: s.name.clone(),
        strategy: s.strategy,
        trial,
        origin,
        final_error: final_pose.position().distance(s.target.point),
        final_pose,
        termination,
        duration: ep.t(),
        ticks,
    })
}

pub fn run_trials(s: &Scenario, world: &WorldModel, scorers: &mut Scorers) -> Result<Vec<TrialResult>> {
    (0..s.trials).map(|i| run_trial(s, world, i, scorers)).collect()
}

/// Mean and population variance.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub target: String,
    pub strategy: Strategy,
    pub trials: usize,
    pub mean_error: f64,
    pub var_error: f64,
    pub collisions: usize,
    pub timeouts: usize,
}

pub fn summarize(results: &[TrialResult], target: &str) -> SummaryRow {
    let errors: Vec<f64> = results.iter().map(|r| r.final_error).collect();
    let (mean_error, var_error) = mean_variance(&errors);
    let count = |t: Termination| results.iter().filter(|r| r.termination == t).count();
    SummaryRow {
        scenario: results[0].scenario.clone(),
        target: target.to_owned(),
        strategy: results[0].strategy,
        trials: results.len(),
        mean_error,
        var_error,
        collisions: count(Termination::Collision),
        timeouts: count(Termination::Timeout),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<SummaryRow>,
    pub trials: Vec<TrialResult>,
}

impl Comparison {
    pub fn row(&self, scenario: &str, strategy: Strategy) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.scenario == scenario && r.strategy == strategy)
    }
}

/// Every scenario under every strategy. Cells run in parallel, each with
/// scorers from `make_scorers`; output is sorted by scenario order then
/// strategy order.
pub fn run_comparison<F>(suite: &Suite, make_scorers: F) -> Result<Comparison>
where
    F: Fn() -> Scorers + Sync,
{
    let mut worlds = Vec::new();
    for s in &suite.scenarios {
        worlds.push(crate::world_file::load_world(&s.world)?);
    }
    let cells: Vec<(usize, Strategy)> = (0..suite.scenarios.len())
        .flat_map(|i| suite.strategies.iter().map(move |&st| (i, st)))
        .collect();
    let outcomes: Vec<Result<Vec<TrialResult>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .map(|&(i, st)| {
                let s = suite.scenarios[i].with_strategy(st);
                let world = &worlds[i];
                let make = &make_scorers;
                scope.spawn(move || run_trials(&s, world, &mut make()))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("trial thread panicked")).collect()
    });
    let mut rows = Vec::new();
    let mut trials = Vec::new();
    for ((i, _), out) in cells.iter().zip(outcomes) {
        let out = out?;
        rows.push(summarize(&out, &suite.scenarios[*i].target.label));
        trials.extend(out);
    }
    Ok(Comparison { rows, trials })
}

/// For each checkpoint in order, the first tick index (after the previous
/// checkpoint's) where the robot center came within `within` of it.
pub fn checkpoint_ticks(world: &WorldModel, ticks: &[TickRecord], checkpoints: &[Checkpoint], within: f64) -> Vec<Option<usize>> {
    let mut from = 0;
    let mut out = Vec::new();
    for cp in checkpoints {
        let hit = (from..ticks.len()).find(|&k| {
            cp.distance(world, ticks[k].pose.position())
                .is_some_and(|d| d <= within)
        });
        out.push(hit);
        match hit {
            Some(k) => from = k,
            None => from = ticks.len(),
        }
    }
    out
}
