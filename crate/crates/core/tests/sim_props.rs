use omninav_core::control::VelocityCommand;
use omninav_core::panorama::SliceSet;
use omninav_core::sim::{
    object_oracle_score, region_oracle_score, step_kinematics, visibility, Entity, HeightClass, Pose, Region,
    RobotState, Segment, Shape, WorldModel,
};
use omninav_core::Vec2;
use proptest::prelude::*;

fn room() -> WorldModel {
    let mut w = WorldModel::walled_box(2.5, 1.6);
    w.entities.push(Entity {
        label: "microwave oven".into(),
        shape: Shape::rect(Vec2::new(0.5, 1.3), Vec2::new(0.9, 1.6)),
        height: HeightClass::Tall,
    });
    w.entities.push(Entity {
        label: "stool".into(),
        shape: Shape::Disc {
            center: Vec2::new(1.8, 0.5),
            radius: 0.15,
        },
        height: HeightClass::Low,
    });
    w.regions.push(Region {
        name: "kitchen".into(),
        polygon: vec![Vec2::new(0.0, 0.0), Vec2::new(0.45, 0.0), Vec2::new(0.45, 1.6), Vec2::new(0.0, 1.6)],
        vocab: vec!["kitchen".into(), "sink".into(), "microwave".into(), "oven".into()],
    });
    w
}

fn velocity(linear: f64, rotate: f64) -> VelocityCommand {
    VelocityCommand {
        linear,
        rotate,
        gated: false,
    }
}

proptest! {
    #[test]
    fn no_step_ends_in_contact(
        x in 0.3f64..2.2, y in 0.3f64..1.3, yaw in -3.1f64..3.1,
        v in 0.0f64..1.0, w in -1.0f64..1.0, steps in 1usize..40,
    ) {
        let world = room();
        let mut s = RobotState::new(Pose::new(x, y, yaw));
        prop_assume!(s.is_clear(&world));
        for _ in 0..steps {
            let out = step_kinematics(&world, &s, &velocity(v, w), 0.1);
            s = out.state;
            prop_assert!(s.is_clear(&world));
        }
    }

    #[test]
    fn straight_run_covers_v_t(v in 0.0f64..1.0, steps in 1usize..50) {
        let mut world = WorldModel::walled_box(100.0, 10.0);
        world.walls.clear();
        let mut s = RobotState::new(Pose::new(1.0, 5.0, 0.0));
        for _ in 0..steps {
            s = step_kinematics(&world, &s, &velocity(v, 0.0), 0.1).state;
        }
        prop_assert!((s.pose.x - 1.0 - v * 0.1 * steps as f64).abs() < 1e-9);
        prop_assert_eq!(s.pose.y, 5.0);
    }

    #[test]
    fn removing_a_wall_never_shrinks_sightings(x in 0.6f64..1.9, y in 0.4f64..1.2, yaw in -3.1f64..3.1) {
        let mut world = room();
        world.walls.push(Segment::new(Vec2::new(1.2, 0.9), Vec2::new(0.6, 1.25)));
        let s = RobotState::new(Pose::new(x, y, yaw));
        let slices = SliceSet::for_width(2000, 8, 0.25).unwrap();
        let before = visibility(&world, &s, &slices, 32);
        world.walls.pop();
        let after = visibility(&world, &s, &slices, 32);
        for (b, a) in before.slices.iter().zip(&after.slices) {
            for e in &b.entities {
                let kept = a.entities.iter().find(|o| o.label == e.label);
                prop_assert!(kept.is_some_and(|o| o.apparent_size >= e.apparent_size));
            }
        }
    }

    #[test]
    fn sightings_fit_their_slice(x in 0.4f64..2.1, y in 0.4f64..1.2, yaw in -3.1f64..3.1) {
        let s = RobotState::new(Pose::new(x, y, yaw));
        let slices = SliceSet::for_width(2000, 8, 0.25).unwrap();
        let v = visibility(&room(), &s, &slices, 32);
        for sl in &v.slices {
            prop_assert!(sl.covered() <= 1.0 + 1e-12);
            for e in &sl.entities {
                prop_assert!(e.apparent_size <= sl.width + 1e-12);
            }
        }
    }

    #[test]
    fn oracles_ignore_irrelevant_structure(x in 0.6f64..2.0, y in 0.4f64..1.2, yaw in -3.1f64..3.1) {
        let s = RobotState::new(Pose::new(x, y, yaw));
        let slices = SliceSet::for_width(2000, 8, 0.25).unwrap();
        let world = room();
        let base = visibility(&world, &s, &slices, 32);

        let mut shuffled = world.clone();
        shuffled.regions[0].vocab.reverse();
        let v = visibility(&shuffled, &s, &slices, 32);
        let q = "please look at the microwave oven";
        prop_assert_eq!(region_oracle_score(q, &base), region_oracle_score(q, &v));

        let mut no_regions = world.clone();
        no_regions.regions.clear();
        let v = visibility(&no_regions, &s, &slices, 32);
        prop_assert_eq!(object_oracle_score(q, &base), object_oracle_score(q, &v));
    }
}
