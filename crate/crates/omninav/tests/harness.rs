mod common;

use common::manifest;
use omninav::episode::Scorers;
use omninav::export::{episode_csv, export_artifacts};
use omninav::harness::{mean_variance, run_comparison, run_trial, run_trials, summarize, Termination};
use omninav::scenario::{load_scenario, load_suite};
use omninav::world_file::{load_world, parse_world, world_to_string};
use omninav_core::Strategy;

#[test]
fn zero_timeout_stays_at_origin() {
    let mut s = load_scenario(manifest("scenarios/basic_kitchen.json")).unwrap();
    s.timeout_s = 0.0;
    s.jitter = [0.0, 0.0];
    let world = load_world(&s.world).unwrap();
    let r = run_trial(&s, &world, 0, &mut Scorers::oracles()).unwrap();
    assert!(r.ticks.is_empty());
    assert_eq!(r.termination, Termination::Timeout);
    assert_eq!(r.final_pose, s.origin.into());
    let want = (s.origin.x - s.target.point.x).hypot(s.origin.y - s.target.point.y);
    assert!((r.final_error - want).abs() < 1e-12);
}

#[test]
fn trials_end_by_collision_or_timeout_within_budget() {
    let s = load_scenario(manifest("scenarios/basic_microwave.json")).unwrap();
    let world = load_world(&s.world).unwrap();
    for st in [Strategy::All, Strategy::Clip, Strategy::Detic] {
        for r in run_trials(&s.with_strategy(st), &world, &mut Scorers::oracles()).unwrap() {
            assert_ne!(r.termination, Termination::Operator);
            assert!(r.duration <= s.timeout_s + s.reflex.tick_s + 1e-9);
            assert!(r.final_error >= 0.0);
            assert_eq!(r.ticks.len() as f64, (r.duration / s.reflex.tick_s).round());
        }
    }
}

/// Final error recomputed from the last row of each exported CSV.
fn error_from_csv(csv: &str, target: omninav_core::Vec2) -> f64 {
    let last = csv.lines().last().unwrap();
    let f: Vec<f64> = last.split(',').take(3).map(|v| v.parse().unwrap()).collect();
    (f[1] - target.x).hypot(f[2] - target.y)
}

#[test]
fn exported_files_agree_with_summary() {
    let s = load_scenario(manifest("scenarios/basic_kitchen.json")).unwrap();
    let world = load_world(&s.world).unwrap();
    let results = run_trials(&s, &world, &mut Scorers::oracles()).unwrap();
    let row = summarize(&results, &s.target.label);
    let dir = tempfile::tempdir().unwrap();
    let written = export_artifacts(dir.path(), &[(s.clone(), world.clone())], &results, &[row.clone()]).unwrap();
    assert_eq!(written.len(), s.trials + 2);

    let mut errors = Vec::new();
    for r in &results {
        let csv = std::fs::read_to_string(dir.path().join(format!("basic_kitchen_all_trial{}.csv", r.trial))).unwrap();
        assert_eq!(csv.lines().count(), r.ticks.len() + 1);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 8 + s.reflex.n_split);
        errors.push(error_from_csv(&csv, s.target.point));
    }
    let (mean, var) = mean_variance(&errors);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let cells: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    // CSV positions carry 6 decimals
    assert!((cells[4].parse::<f64>().unwrap() - mean).abs() < 1e-5);
    assert!((cells[5].parse::<f64>().unwrap() - var).abs() < 1e-5);
    assert_eq!(cells[3], s.trials.to_string());

    let svg = std::fs::read_to_string(dir.path().join("basic_kitchen.svg")).unwrap();
    // 2.5 x 1.6 m at 200 px/m
    assert!(svg.contains(r#"<rect id="bounds" x="20" y="20" width="500.0" height="320.0""#));
    assert_eq!(svg.matches(r#"class="trial""#).count(), s.trials);
}

#[test]
fn one_trial_gives_one_csv_and_one_svg() {
    let mut s = load_scenario(manifest("scenarios/basic_desk.json")).unwrap();
    s.trials = 1;
    let world = load_world(&s.world).unwrap();
    let results = run_trials(&s, &world, &mut Scorers::oracles()).unwrap();
    let row = summarize(&results, &s.target.label);
    assert_eq!(row.var_error, 0.0);
    let dir = tempfile::tempdir().unwrap();
    let written = export_artifacts(dir.path(), &[(s, world)], &results, &[row]).unwrap();
    let ext = |e: &str| written.iter().filter(|p| p.extension().unwrap() == e).count();
    assert_eq!((ext("csv"), ext("svg")), (2, 1));
    assert!(export_artifacts(dir.path(), &[], &[], &[]).is_err());
}

#[test]
fn seeded_runs_repeat_byte_for_byte() {
    let mut suite = load_suite(manifest("scenarios/basic_suite.json")).unwrap();
    for s in &mut suite.scenarios {
        s.trials = 2;
    }
    let a = run_comparison(&suite, Scorers::oracles).unwrap();
    let b = run_comparison(&suite, Scorers::oracles).unwrap();
    assert_eq!(a.rows, b.rows);
    for (x, y) in a.trials.iter().zip(&b.trials) {
        assert_eq!(episode_csv(&x.ticks, 8), episode_csv(&y.ticks, 8));
    }
    // a different seed moves the origins
    let mut other = suite.clone();
    other.scenarios[0].seed += 1;
    let c = run_comparison(&other, Scorers::oracles).unwrap();
    assert_ne!(a.trials[0].origin, c.trials[0].origin);
}

#[test]
fn worlds_round_trip() {
    for name in ["worlds/basic.world", "worlds/advanced.world"] {
        let w = load_world(manifest(name)).unwrap();
        let again = parse_world(&world_to_string(&w), std::path::Path::new(name)).unwrap();
        assert_eq!(w, again);
    }
}

#[test]
fn checkpoints_of_advanced_tour_are_ordered() {
    let s = load_scenario(manifest("scenarios/advanced_tour.json")).unwrap();
    let world = load_world(&s.world).unwrap();
    for cp in &s.checkpoints {
        assert!(cp.distance(&world, omninav_core::Vec2::new(4.0, 2.5)).is_some(), "{} unknown", cp.name());
    }
    assert!(!s.stop_on_contact);
}
