mod common;

use std::io::Read;
use std::time::{Duration, Instant};

use common::*;
use omninav::gateway::frame::{read_frame, write_frame};
use omninav::gateway::{GatewayScorer, ScorerMessage, SlicePayload};
use omninav::world_file::load_world;
use omninav_core::{
    region_oracle_score, SliceSet, score_slices, visibility, ObjectOracle, Pose, RegionOracle, RobotState,
    ScorerSlot, SliceContext, VisibilitySummary,
};

fn basic_view() -> VisibilitySummary {
    let world = load_world(manifest("worlds/basic.world")).unwrap();
    let slices = SliceSet::for_width(2000, 8, 0.25).unwrap();
    visibility(&world, &RobotState::new(Pose::new(1.25, 0.8, 0.0)), &slices, 32)
}

#[test]
fn zero_scores_become_uniform_a() {
    let (addr, registry) = scorer_endpoint();
    spawn_stub(addr, "clip", Duration::ZERO, |_, _, n| vec![0.0; n]);
    wait_until(|| registry.get("clip").is_some());
    let vis = basic_view();
    let mut g = GatewayScorer::new(Box::new(RegionOracle), registry);
    let p = score_slices(&mut g, "Go to the kitchen", &SliceContext::Visibility(&vis), &mut ScorerSlot::default());
    assert_eq!(p.raw, vec![0.0; 8]);
    assert_eq!(p.transformed, vec![1.0; 8]);
    assert!(!p.stale);
}

#[test]
fn request_carries_visibility_payload() {
    let (addr, registry) = scorer_endpoint();
    let vis = basic_view();
    let expect = vis.clone();
    spawn_stub(addr, "clip", Duration::ZERO, move |instr, payload, n| {
        assert_eq!(instr, "Go to the kitchen");
        assert_eq!(n, 8);
        match payload {
            SlicePayload::Visibility { summary } => region_oracle_score(instr, summary),
            _ => panic!("expected visibility"),
        }
    });
    wait_until(|| registry.get("clip").is_some());
    let mut g = GatewayScorer::new(Box::new(RegionOracle), registry);
    let p = score_slices(&mut g, "Go to the kitchen", &SliceContext::Visibility(&vis), &mut ScorerSlot::default());
    assert_eq!(p.raw, region_oracle_score("Go to the kitchen", &expect));
}

#[test]
fn slow_scorer_falls_back_and_marks_stale() {
    let (addr, registry) = scorer_endpoint();
    spawn_stub(addr, "clip", Duration::from_millis(200), |_, _, n| vec![7.0; n]);
    wait_until(|| registry.get("clip").is_some());
    let vis = basic_view();
    let mut g = GatewayScorer::new(Box::new(RegionOracle), registry);
    let start = Instant::now();
    let p = score_slices(&mut g, "Go to the kitchen", &SliceContext::Visibility(&vis), &mut ScorerSlot::default());
    let took = start.elapsed();
    assert!(took < Duration::from_millis(180), "{took:?}");
    assert!(p.stale);
    assert_eq!(p.raw, region_oracle_score("Go to the kitchen", &vis));
    assert_eq!(g.last_failure.as_deref(), Some("timed out"));
}

#[test]
fn repeated_timeouts_evict() {
    let (addr, registry) = scorer_endpoint();
    spawn_stub(addr, "detic", Duration::from_millis(150), |_, _, n| vec![0.0; n]);
    wait_until(|| registry.get("detic").is_some());
    let vis = basic_view();
    let mut g = GatewayScorer::new(Box::new(ObjectOracle), registry.clone()).with_timeout(Duration::from_millis(20));
    let mut slot = ScorerSlot::default();
    for _ in 0..3 {
        assert!(score_slices(&mut g, "desk", &SliceContext::Visibility(&vis), &mut slot).stale);
    }
    assert!(registry.get("detic").is_none());
    // no remote left: plain oracle, not degraded
    assert!(!score_slices(&mut g, "desk", &SliceContext::Visibility(&vis), &mut slot).stale);
}

#[test]
fn routes_by_scorer_id() {
    let (addr, registry) = scorer_endpoint();
    spawn_stub(addr, "clip", Duration::ZERO, |_, _, n| (0..n).map(|i| i as f64).collect());
    spawn_stub(addr, "detic", Duration::ZERO, |_, _, n| (0..n).map(|i| -(i as f64)).collect());
    wait_until(|| registry.ids() == ["clip", "detic"]);
    let vis = basic_view();
    let ctx = SliceContext::Visibility(&vis);
    let mut clip = GatewayScorer::new(Box::new(RegionOracle), registry.clone());
    let mut detic = GatewayScorer::new(Box::new(ObjectOracle), registry);
    let a = score_slices(&mut clip, "x", &ctx, &mut ScorerSlot::default());
    let b = score_slices(&mut detic, "x", &ctx, &mut ScorerSlot::default());
    assert_eq!(a.raw[7], 7.0);
    assert_eq!(b.raw[7], -7.0);
    assert_eq!(a.scorer_id, "clip");
    assert_eq!(b.scorer_id, "detic");
}

#[test]
fn wrong_length_answer_falls_back_without_eviction() {
    let (addr, registry) = scorer_endpoint();
    spawn_stub(addr, "clip", Duration::ZERO, |_, _, _| vec![1.0]);
    wait_until(|| registry.get("clip").is_some());
    let vis = basic_view();
    let mut g = GatewayScorer::new(Box::new(RegionOracle), registry.clone());
    let p = score_slices(&mut g, "kitchen", &SliceContext::Visibility(&vis), &mut ScorerSlot::default());
    assert!(p.stale);
    assert_eq!(p.raw.len(), 8);
    assert!(registry.get("clip").is_some());
}

#[test]
fn disconnect_evicts() {
    let (addr, registry) = scorer_endpoint();
    let s = stub_connect(addr, "clip");
    wait_until(|| registry.get("clip").is_some());
    drop(s);
    wait_until(|| registry.get("clip").is_none());
}

#[test]
fn version_mismatch_rejected() {
    let (addr, registry) = scorer_endpoint();
    let mut s = std::net::TcpStream::connect(addr).unwrap();
    write_frame(
        &mut s,
        &ScorerMessage::Hello {
            v: 2,
            scorer_id: "clip".into(),
        },
    )
    .unwrap();
    match read_frame::<ScorerMessage>(&mut s).unwrap() {
        ScorerMessage::Error { message, .. } => assert!(message.contains("version"), "{message}"),
        other => panic!("{other:?}"),
    }
    let mut rest = Vec::new();
    s.read_to_end(&mut rest).unwrap();
    assert!(rest.is_empty());
    assert!(registry.ids().is_empty());
}

#[test]
fn malformed_frame_closes_with_error() {
    let (addr, registry) = scorer_endpoint();
    let mut s = stub_connect(addr, "clip");
    wait_until(|| registry.get("clip").is_some());
    use std::io::Write;
    s.write_all(&5u32.to_be_bytes()).unwrap();
    s.write_all(b"nope!").unwrap();
    match read_frame::<ScorerMessage>(&mut s).unwrap() {
        ScorerMessage::Error { message, .. } => assert!(message.contains("malformed"), "{message}"),
        other => panic!("{other:?}"),
    }
    wait_until(|| registry.get("clip").is_none());
}

#[test]
fn scorer_error_reply_falls_back() {
    let (addr, registry) = scorer_endpoint();
    let mut s = stub_connect(addr, "clip");
    wait_until(|| registry.get("clip").is_some());
    let h = std::thread::spawn(move || {
        if let Ok(ScorerMessage::ScoreReq { id, .. }) = read_frame::<ScorerMessage>(&mut s) {
            write_frame(
                &mut s,
                &ScorerMessage::Error {
                    id: Some(id),
                    message: "model not loaded".into(),
                },
            )
            .unwrap();
        }
        s
    });
    let vis = basic_view();
    let mut g = GatewayScorer::new(Box::new(RegionOracle), registry);
    let p = score_slices(&mut g, "kitchen", &SliceContext::Visibility(&vis), &mut ScorerSlot::default());
    assert!(p.stale);
    assert_eq!(g.last_failure.as_deref(), Some("scorer error: model not loaded"));
    drop(h.join().unwrap());
}
