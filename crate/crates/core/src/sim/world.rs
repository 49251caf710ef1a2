use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::geom;
use crate::math::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("bounds are empty or not finite")]
    BadBounds,
    #[error("entity {0} lies outside the bounds")]
    EntityOutOfBounds(usize),
    #[error("entity {0} has a degenerate shape")]
    BadShape(usize),
    #[error("region {0} lies outside the bounds")]
    RegionOutOfBounds(usize),
    #[error("region {0} polygon is not simple")]
    RegionNotSimple(usize),
    #[error("region {0} has an empty vocabulary")]
    EmptyVocabulary(usize),
    #[error("wall {0} has a non-finite endpoint")]
    BadWall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bounds {
    pub min: Vec2,
    pub max: Vec2,
}

impl Bounds {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Bounds { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Vec2) -> bool {
        (self.min.x..=self.max.x).contains(&p.x) && (self.min.y..=self.max.y).contains(&p.y)
    }

    /// Whole disc inside.
    pub fn contains_disc(&self, c: Vec2, r: f64) -> bool {
        c.x - r >= self.min.x && c.x + r <= self.max.x && c.y - r >= self.min.y && c.y + r <= self.max.y
    }

    pub fn corners(&self) -> [Vec2; 4] {
        [
            self.min,
            Vec2::new(self.max.x, self.min.y),
            self.max,
            Vec2::new(self.min.x, self.max.y),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

impl Segment {
    pub fn new(a: Vec2, b: Vec2) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Shape {
    Disc { center: Vec2, radius: f64 },
    Polygon { vertices: Vec<Vec2> },
}

impl Shape {
    pub fn rect(min: Vec2, max: Vec2) -> Shape {
        Shape::Polygon {
            vertices: Bounds::new(min, max).corners().to_vec(),
        }
    }

    pub fn centroid(&self) -> Vec2 {
        match self {
            Shape::Disc { center, .. } => *center,
            Shape::Polygon { vertices } => {
                // area-weighted; falls back to the vertex mean when flat
                let mut area = 0.0;
                let mut c = Vec2::ZERO;
                for (a, b) in geom::edges(vertices) {
                    let w = a.cross(b);
                    area += w;
                    c += (a + b) * w;
                }
                if area.abs() < 1e-12 {
                    let n = vertices.len().max(1) as f64;
                    return vertices.iter().fold(Vec2::ZERO, |s, &v| s + v) * (1.0 / n);
                }
                c * (1.0 / (3.0 * area))
            }
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        match self {
            Shape::Disc { center, radius } => p.distance(*center) <= *radius,
            Shape::Polygon { vertices } => geom::point_in_polygon(p, vertices),
        }
    }

    /// Distance from `p` to the shape; 0 inside.
    pub fn distance_to(&self, p: Vec2) -> f64 {
        match self {
            Shape::Disc { center, radius } => (p.distance(*center) - radius).max(0.0),
            Shape::Polygon { vertices } => {
                if geom::point_in_polygon(p, vertices) {
                    return 0.0;
                }
                geom::edges(vertices)
                    .map(|(a, b)| geom::point_segment_distance(p, a, b))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Distance from segment `pq` to the shape; 0 when they touch.
    pub fn distance_to_segment(&self, p: Vec2, q: Vec2) -> f64 {
        match self {
            Shape::Disc { center, radius } => (geom::point_segment_distance(*center, p, q) - radius).max(0.0),
            Shape::Polygon { vertices } => {
                if geom::point_in_polygon(p, vertices) {
                    return 0.0;
                }
                geom::edges(vertices)
                    .map(|(a, b)| geom::segment_segment_distance(p, q, a, b))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// First ray parameter hitting the shape.
    pub fn ray_hit(&self, origin: Vec2, dir: Vec2) -> Option<f64> {
        match self {
            Shape::Disc { center, radius } => geom::ray_disc(origin, dir, *center, *radius),
            Shape::Polygon { vertices } => {
                if geom::point_in_polygon(origin, vertices) {
                    return Some(0.0);
                }
                geom::edges(vertices)
                    .filter_map(|(a, b)| geom::ray_segment(origin, dir, a, b))
                    .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t))))
            }
        }
    }

    fn within(&self, b: &Bounds) -> bool {
        match self {
            Shape::Disc { center, radius } => b.contains_disc(*center, *radius),
            Shape::Polygon { vertices } => vertices.iter().all(|&v| b.contains(v)),
        }
    }

    fn is_degenerate(&self) -> bool {
        match self {
            Shape::Disc { center, radius } => {
                !(*radius > 0.0 && radius.is_finite() && center.x.is_finite() && center.y.is_finite())
            }
            Shape::Polygon { vertices } => !geom::polygon_is_simple(vertices),
        }
    }
}

/// Whether an entity hides what stands behind it from the camera.
///
/// Every entity blocks motion and the range scanner. `Low` ones (tables,
/// counters) are seen over by the mast-mounted camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum HeightClass {
    Low,
    #[default]
    Tall,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Entity {
    pub label: String,
    pub shape: Shape,
    #[cfg_attr(feature = "serde", serde(default))]
    pub height: HeightClass,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Region {
    pub name: String,
    pub polygon: Vec<Vec2>,
    pub vocab: Vec<String>,
}

impl Region {
    pub fn contains(&self, p: Vec2) -> bool {
        geom::point_in_polygon(p, &self.polygon)
    }

    pub fn distance_to(&self, p: Vec2) -> f64 {
        Shape::Polygon {
            vertices: self.polygon.clone(),
        }
        .distance_to(p)
    }

    pub fn centroid(&self) -> Vec2 {
        Shape::Polygon {
            vertices: self.polygon.clone(),
        }
        .centroid()
    }
}

/// What a ray ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitTarget {
    Wall(usize),
    Entity(usize),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorldModel {
    pub bounds: Bounds,
    #[cfg_attr(feature = "serde", serde(default))]
    pub walls: Vec<Segment>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub entities: Vec<Entity>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub regions: Vec<Region>,
    /// Scene words for the part of a view not covered by any region.
    #[cfg_attr(feature = "serde", serde(default = "default_background"))]
    pub background: Vec<String>,
}

fn default_background() -> Vec<String> {
    ["room", "wall", "floor"].iter().map(|s| String::from(*s)).collect()
}

impl WorldModel {
    /// Empty box world with its four boundary walls.
    pub fn walled_box(width: f64, height: f64) -> Self {
        let bounds = Bounds::new(Vec2::ZERO, Vec2::new(width, height));
        let c = bounds.corners();
        WorldModel {
            bounds,
            walls: (0..4).map(|i| Segment::new(c[i], c[(i + 1) % 4])).collect(),
            entities: Vec::new(),
            regions: Vec::new(),
            background: default_background(),
        }
    }

    pub fn validate(&self) -> Result<(), WorldError> {
        let b = &self.bounds;
        let finite = |v: Vec2| v.x.is_finite() && v.y.is_finite();
        if !(finite(b.min) && finite(b.max) && b.width() > 0.0 && b.height() > 0.0) {
            return Err(WorldError::BadBounds);
        }
        if let Some(i) = self.walls.iter().position(|w| !(finite(w.a) && finite(w.b))) {
            return Err(WorldError::BadWall(i));
        }
        for (i, e) in self.entities.iter().enumerate() {
            if e.shape.is_degenerate() {
                return Err(WorldError::BadShape(i));
            }
            if !e.shape.within(b) {
                return Err(WorldError::EntityOutOfBounds(i));
            }
        }
        for (i, r) in self.regions.iter().enumerate() {
            if !geom::polygon_is_simple(&r.polygon) {
                return Err(WorldError::RegionNotSimple(i));
            }
            if !r.polygon.iter().all(|&v| b.contains(v)) {
                return Err(WorldError::RegionOutOfBounds(i));
            }
            if r.vocab.iter().all(|w| w.trim().is_empty()) {
                return Err(WorldError::EmptyVocabulary(i));
            }
        }
        Ok(())
    }

    pub fn entity(&self, label: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.label == label)
    }

    pub fn region(&self, name: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.name == name)
    }

    /// Nearest wall or entity along a unit-direction ray, within `max_range`.
    pub fn first_obstacle(&self, origin: Vec2, dir: Vec2, max_range: f64) -> Option<(f64, HitTarget)> {
        let walls = self.walls.iter().enumerate().filter_map(|(i, w)| {
            geom::ray_segment(origin, dir, w.a, w.b).map(|t| (t, HitTarget::Wall(i)))
        });
        let entities = self
            .entities
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.shape.ray_hit(origin, dir).map(|t| (t, HitTarget::Entity(i))));
        walls
            .chain(entities)
            .filter(|&(t, _)| t <= max_range)
            .fold(None, |best: Option<(f64, HitTarget)>, hit| match best {
                Some(b) if b.0 <= hit.0 => Some(b),
                _ => Some(hit),
            })
    }

    /// Distance from the segment `pq` to the closest wall or entity.
    pub fn clearance_along(&self, p: Vec2, q: Vec2) -> f64 {
        let walls = self
            .walls
            .iter()
            .map(|w| geom::segment_segment_distance(p, q, w.a, w.b));
        let entities = self.entities.iter().map(|e| e.shape.distance_to_segment(p, q));
        walls.chain(entities).fold(f64::INFINITY, f64::min)
    }
}
