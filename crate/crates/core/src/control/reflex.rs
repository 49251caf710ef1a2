use alloc::string::String;

use super::{diff_drive_command, obstacle_gate, select_direction, ControlError, DirectionCommand, RangeScan, VelocityCommand};
use crate::math::Vec2;
use crate::scoring::{fuse, score_slices, FusedProfile, ScoreProfile, Scorer, ScorerSlot, SliceContext};

/// Which scorers feed the evaluation `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Strategy {
    /// `e = a_clip * a_detic`
    #[default]
    All,
    /// `e = a_clip`
    Clip,
    /// `e = a_detic`
    Detic,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::All, Strategy::Clip, Strategy::Detic];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::All => "all",
            Strategy::Clip => "clip",
            Strategy::Detic => "detic",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Some(Strategy::All),
            "clip" => Some(Strategy::Clip),
            "detic" => Some(Strategy::Detic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ReflexConfig {
    pub n_split: usize,
    pub overlap_frac: f64,
    pub n_extract: usize,
    /// Heading threshold for driving forward (rad).
    pub c_thre: f64,
    /// Rotational gain.
    pub k: f64,
    pub tick_s: f64,
    pub stop_dist: f64,
    /// Half-angle of the obstacle gate cone (rad).
    pub cone: f64,
    pub strategy: Strategy,
}

impl Default for ReflexConfig {
    fn default() -> Self {
        ReflexConfig {
            n_split: 8,
            overlap_frac: 0.25,
            n_extract: 2,
            c_thre: 0.6,
            k: 0.5,
            tick_s: 0.1,
            stop_dist: 0.4,
            cone: 0.5,
            strategy: Strategy::All,
        }
    }
}

/// Loop state carried between ticks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReflexState {
    pub previous_theta: f64,
    pub clip: ScorerSlot,
    pub detic: ScorerSlot,
    instruction: String,
}

impl ReflexState {
    pub fn reset(&mut self) {
        *self = ReflexState::default();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflexOutput {
    pub velocity: VelocityCommand,
    pub direction: DirectionCommand,
    pub clip: Option<ScoreProfile>,
    pub detic: Option<ScoreProfile>,
    pub fused: FusedProfile,
}

impl ReflexOutput {
    pub fn any_stale(&self) -> bool {
        self.clip.iter().chain(self.detic.iter()).any(|p| p.stale)
    }
}

/// One control tick: score, normalize, fuse, select a direction, map it to
/// two-wheel velocity and gate it against the range scan.
///
/// Scorers not used by the configured strategy are not called.
#[allow(clippy::too_many_arguments)]
pub fn reflex_step(
    cfg: &ReflexConfig,
    state: &mut ReflexState,
    instruction: &str,
    ctx: &SliceContext<'_>,
    directions: &[Vec2],
    clip: &mut dyn Scorer,
    detic: &mut dyn Scorer,
    scan: &RangeScan,
) -> Result<ReflexOutput, ControlError> {
    if ctx.n_slices() != directions.len() {
        return Err(ControlError::LengthMismatch(ctx.n_slices(), directions.len()));
    }
    if state.instruction != instruction {
        // profiles scored against an old instruction must not be reused
        state.clip.clear();
        state.detic.clear();
        state.instruction = String::from(instruction);
    }
    let clip_profile = matches!(cfg.strategy, Strategy::All | Strategy::Clip)
        .then(|| score_slices(clip, instruction, ctx, &mut state.clip));
    let detic_profile = matches!(cfg.strategy, Strategy::All | Strategy::Detic)
        .then(|| score_slices(detic, instruction, ctx, &mut state.detic));
    let fused = match (&clip_profile, &detic_profile) {
        (Some(c), Some(d)) => fuse(&c.transformed, &d.transformed)?,
        (Some(p), None) | (None, Some(p)) => FusedProfile::single(&p.transformed),
        (None, None) => unreachable!("every strategy uses at least one scorer"),
    };
    let direction = select_direction(&fused.e, directions, cfg.n_extract, state.previous_theta)?;
    state.previous_theta = direction.theta;
    let velocity = obstacle_gate(
        &diff_drive_command(&direction, cfg.k, cfg.c_thre),
        &direction,
        scan,
        cfg.stop_dist,
        cfg.cone,
    );
    Ok(ReflexOutput {
        velocity,
        direction,
        clip: clip_profile,
        detic: detic_profile,
        fused,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panorama::SliceSet;
    use crate::scoring::ScorerError;
    use crate::sim::{SliceVisibility, VisibilitySummary};
    use alloc::vec;
    use alloc::vec::Vec;

    struct Fixed(&'static str, Vec<f64>, usize);

    impl Scorer for Fixed {
        fn id(&self) -> &str {
            self.0
        }
        fn raw_scores(&mut self, _: &str, _: &SliceContext<'_>) -> Result<Vec<f64>, ScorerError> {
            self.2 += 1;
            Ok(self.1.clone())
        }
    }

    fn open_scan() -> RangeScan {
        RangeScan {
            ranges: (0..36).map(|i| (-3.1 + i as f64 * 0.174, 5.0)).collect(),
            max_range: 5.0,
        }
    }

    fn run(strategy: Strategy, clip: &mut Fixed, detic: &mut Fixed) -> ReflexOutput {
        let slices = SliceSet::for_width(2000, 4, 0.0).unwrap();
        let vis = VisibilitySummary {
            slices: vec![SliceVisibility::default(); 4],
            background: Vec::new(),
        };
        let cfg = ReflexConfig {
            strategy,
            ..ReflexConfig::default()
        };
        reflex_step(
            &cfg,
            &mut ReflexState::default(),
            "go",
            &SliceContext::Visibility(&vis),
            &slices.directions(),
            clip,
            detic,
            &open_scan(),
        )
        .unwrap()
    }

    #[test]
    fn single_scorer_strategies_bypass_fusion() {
        let mut c = Fixed("clip", vec![0.0, 1.0, 0.5, 0.2], 0);
        let mut d = Fixed("detic", vec![1.0, 0.0, 0.0, 0.3], 0);
        let out = run(Strategy::Clip, &mut c, &mut d);
        assert_eq!(out.fused.e, out.clip.as_ref().unwrap().transformed);
        assert!(out.detic.is_none());
        assert_eq!(d.2, 0);

        let out = run(Strategy::Detic, &mut c, &mut d);
        assert_eq!(out.fused.e, out.detic.as_ref().unwrap().transformed);
        assert!(out.clip.is_none());

        let out = run(Strategy::All, &mut c, &mut d);
        let (a, b) = (&out.clip.unwrap().transformed, &out.detic.unwrap().transformed);
        for i in 0..4 {
            assert_eq!(out.fused.e[i], a[i] * b[i]);
        }
    }

    #[test]
    fn uniform_scores_follow_tie_break() {
        let mut c = Fixed("clip", vec![0.2; 4], 0);
        let mut d = Fixed("detic", vec![0.0; 4], 0);
        let out = run(Strategy::All, &mut c, &mut d);
        assert_eq!(out.fused.e, [1.0; 4]);
        assert_eq!(out.direction.contributors, [(0, 2.0), (1, 1.0)]);
        assert!(!out.velocity.gated);
    }
}
