use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use super::{geom, RobotState, WorldModel};
use crate::math::Vec2;
use crate::panorama::SliceSet;

pub const DEFAULT_RAYS_PER_SLICE: usize = 32;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntitySighting {
    pub label: String,
    /// Angular extent inside the slice window (rad).
    pub apparent_size: f64,
    /// Nearest hit distance (m).
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegionCoverage {
    pub name: String,
    pub vocab: Vec<String>,
    /// Share of the slice's rays attributed to this region.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SliceVisibility {
    pub azimuth: f64,
    /// Full angular width of the window (rad).
    pub width: f64,
    /// Largest apparent size first.
    pub entities: Vec<EntitySighting>,
    pub regions: Vec<RegionCoverage>,
}

impl SliceVisibility {
    pub fn covered(&self) -> f64 {
        self.regions.iter().map(|r| r.fraction).sum()
    }
}

/// What each slice of the panorama would show, reduced to labels and
/// region shares.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VisibilitySummary {
    pub slices: Vec<SliceVisibility>,
    /// Scene words for the uncovered part of each window.
    #[cfg_attr(feature = "serde", serde(default))]
    pub background: Vec<String>,
}

/// Cast `rays_per_slice` rays across every slice window from the robot
/// center.
///
/// A ray stops at the first wall or tall entity; every entity hit up to
/// that point counts as seen on that ray. The ray's free segment is
/// attributed to the region it traverses longest, if any.
pub fn visibility(world: &WorldModel, state: &RobotState, slices: &SliceSet, rays_per_slice: usize) -> VisibilitySummary {
    debug_assert!(rays_per_slice >= 8);
    let origin = state.pose.position();
    let far = world.bounds.width().hypot(world.bounds.height()) * 2.0;
    let mut out = Vec::with_capacity(slices.len());
    for slice in &slices.slices {
        let width = 2.0 * slice.half_width;
        let mut hits = alloc::vec![0usize; world.entities.len()];
        let mut nearest = alloc::vec![f64::INFINITY; world.entities.len()];
        let mut region_rays = alloc::vec![0usize; world.regions.len()];
        for k in 0..rays_per_slice {
            let bearing = slice.azimuth + slice.half_width - (k as f64 + 0.5) * width / rays_per_slice as f64;
            let dir = Vec2::from_angle(state.pose.yaw + bearing);
            let mut stop = world
                .walls
                .iter()
                .filter_map(|w| geom::ray_segment(origin, dir, w.a, w.b))
                .fold(far, f64::min);
            let entity_t: Vec<Option<f64>> = world.entities.iter().map(|e| e.shape.ray_hit(origin, dir)).collect();
            for (e, t) in world.entities.iter().zip(&entity_t) {
                if let (super::HeightClass::Tall, Some(t)) = (e.height, t) {
                    stop = stop.min(*t);
                }
            }
            for (i, t) in entity_t.iter().enumerate() {
                if let Some(t) = *t {
                    if t <= stop {
                        hits[i] += 1;
                        nearest[i] = nearest[i].min(t);
                    }
                }
            }
            let mut best: Option<(usize, f64)> = None;
            for (i, r) in world.regions.iter().enumerate() {
                let len = geom::ray_length_inside(origin, dir, stop, &r.polygon);
                if len > 0.0 && best.is_none_or(|(_, b)| len > b) {
                    best = Some((i, len));
                }
            }
            if let Some((i, _)) = best {
                region_rays[i] += 1;
            }
        }
        let mut entities: Vec<EntitySighting> = world
            .entities
            .iter()
            .enumerate()
            .filter(|&(i, _)| hits[i] > 0)
            .map(|(i, e)| EntitySighting {
                label: e.label.clone(),
                apparent_size: hits[i] as f64 / rays_per_slice as f64 * width,
                distance: nearest[i],
            })
            .collect();
        entities.sort_by(|a, b| b.apparent_size.partial_cmp(&a.apparent_size).unwrap_or(core::cmp::Ordering::Equal));
        let regions = world
            .regions
            .iter()
            .enumerate()
            .filter(|&(i, _)| region_rays[i] > 0)
            .map(|(i, r)| RegionCoverage {
                name: r.name.clone(),
                vocab: r.vocab.clone(),
                fraction: region_rays[i] as f64 / rays_per_slice as f64,
            })
            .collect();
        out.push(SliceVisibility {
            azimuth: slice.azimuth,
            width,
            entities,
            regions,
        });
    }
    VisibilitySummary {
        slices: out,
        background: world.background.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Bounds, Entity, HeightClass, Pose, Region, Segment, Shape};
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn world_with(entities: Vec<Entity>) -> WorldModel {
        let mut w = WorldModel::walled_box(1.0, 1.0);
        w.walls.clear();
        w.bounds = Bounds::new(Vec2::new(-10.0, -10.0), Vec2::new(10.0, 10.0));
        w.entities = entities;
        w
    }

    fn post(x: f64, y: f64, label: &str) -> Entity {
        Entity {
            label: label.into(),
            shape: Shape::Disc {
                center: Vec2::new(x, y),
                radius: 0.1,
            },
            height: HeightClass::Tall,
        }
    }

    fn slices() -> SliceSet {
        SliceSet::for_width(2000, 8, 0.0).unwrap()
    }

    // slices 3 and 4 meet at azimuth 0 with no overlap; slice 4 spans [-pi/4, 0)
    fn ahead_slices(v: &VisibilitySummary) -> Vec<usize> {
        (0..v.slices.len()).filter(|&i| !v.slices[i].entities.is_empty()).collect()
    }

    #[test]
    fn entity_ahead_is_seen_forward() {
        let w = world_with(vec![post(2.0, 0.05, "vase")]);
        let s = RobotState::new(Pose::new(0.0, 0.0, 0.0));
        let v = visibility(&w, &s, &slices(), 32);
        assert_eq!(ahead_slices(&v), [3, 4]);
        assert_eq!(v.slices[3].entities[0].label, "vase");
    }

    #[test]
    fn wall_occludes() {
        let mut w = world_with(vec![post(2.0, 0.0, "vase")]);
        w.walls.push(Segment::new(Vec2::new(1.0, -1.0), Vec2::new(1.0, 1.0)));
        let s = RobotState::new(Pose::new(0.0, 0.0, 0.0));
        let v = visibility(&w, &s, &slices(), 32);
        assert!(ahead_slices(&v).is_empty());
    }

    #[test]
    fn low_entities_do_not_occlude() {
        let mut table = post(1.0, 0.0, "table");
        table.height = HeightClass::Low;
        let w = world_with(vec![table, post(2.0, 0.0, "tv")]);
        let s = RobotState::new(Pose::new(0.0, 0.0, 0.0));
        let v = visibility(&w, &s, &slices(), 32);
        let labels: Vec<&str> = v.slices[3].entities.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["table", "tv"]);
    }

    #[test]
    fn apparent_size_halves_with_distance() {
        let s = RobotState::new(Pose::new(0.0, 0.0, 0.0));
        let wide = SliceSet::for_width(2000, 4, 0.0).unwrap();
        let big = |d: f64| {
            let w = world_with(vec![Entity {
                label: "board".into(),
                shape: Shape::rect(Vec2::new(d, 0.05), Vec2::new(d + 0.05, 0.15)),
                height: HeightClass::Tall,
            }]);
            let v = visibility(&w, &s, &wide, 256);
            v.slices[1].entities[0].apparent_size
        };
        let quantum = 2.0 * wide.slices[1].half_width / 256.0;
        let (near, far) = (big(1.0), big(2.0));
        assert!((near - 2.0 * far).abs() <= 2.0 * quantum, "{near} {far}");
    }

    #[test]
    fn coverage_sums_at_most_one() {
        let mut w = world_with(vec![]);
        w.walls.push(Segment::new(Vec2::new(2.0, -5.0), Vec2::new(2.0, 5.0)));
        w.regions.push(Region {
            name: "kitchen".into(),
            polygon: Bounds::new(Vec2::new(1.0, -5.0), Vec2::new(2.0, 5.0)).corners().to_vec(),
            vocab: vec!["kitchen".into()],
        });
        let s = RobotState::new(Pose::new(0.0, 0.0, 0.0));
        let v = visibility(&w, &s, &slices(), 32);
        for sl in &v.slices {
            assert!(sl.covered() <= 1.0 + 1e-12);
        }
        assert_abs_diff_eq!(v.slices[3].covered(), 1.0);
        assert_eq!(v.slices[0].covered(), 0.0);
    }
}
