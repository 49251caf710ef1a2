use std::f64::consts::PI;

use omninav_core::control::{diff_drive_command, omni_command, DirectionCommand};
use omninav_core::Vec2;

fn heading(theta: f64) -> DirectionCommand {
    DirectionCommand {
        b: Vec2::from_angle(theta),
        theta,
        contributors: vec![],
    }
}

#[test]
fn two_wheel_law_sweep() {
    let n = 10_000;
    for i in 0..=n {
        let theta = -PI + 2.0 * PI * i as f64 / n as f64;
        let v = diff_drive_command(&heading(theta), 0.5, 0.6);
        let expect = if theta.abs() < 0.6 { 1.0 } else { 0.0 };
        assert_eq!(v.linear, expect, "theta {theta}");
        assert_eq!(v.rotate, 0.5 * theta);
        let mirrored = diff_drive_command(&heading(-theta), 0.5, 0.6);
        assert_eq!(mirrored.rotate, -v.rotate);
        assert_eq!(mirrored.linear, v.linear);
    }
}

#[test]
fn threshold_is_exclusive() {
    assert_eq!(diff_drive_command(&heading(0.6), 0.5, 0.6).linear, 0.0);
    assert_eq!(diff_drive_command(&heading(0.5999), 0.5, 0.6).linear, 1.0);
}

#[test]
fn omni_translation_follows_b() {
    let d = DirectionCommand {
        b: Vec2::new(0.3, 0.4),
        theta: 0.4f64.atan2(0.3),
        contributors: vec![],
    };
    let v = omni_command(&d, 0.5);
    assert!((v.x - 0.3).abs() < 1e-12 && (v.y - 0.4).abs() < 1e-12);
}
