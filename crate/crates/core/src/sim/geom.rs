//! Planar ray and segment helpers.

use alloc::vec::Vec;

use num_traits::Float;

use crate::math::Vec2;

const EPS: f64 = 1e-12;

/// Parameter `t >= 0` where `origin + t * dir` crosses segment `ab`.
pub(crate) fn ray_segment(origin: Vec2, dir: Vec2, a: Vec2, b: Vec2) -> Option<f64> {
    let e = b - a;
    let denom = dir.cross(e);
    if denom.abs() < EPS {
        return None;
    }
    let w = a - origin;
    let t = w.cross(e) / denom;
    let u = w.cross(dir) / denom;
    (t >= 0.0 && (-EPS..=1.0 + EPS).contains(&u)).then_some(t)
}

/// First `t >= 0` where the ray enters the disc; 0 if it starts inside.
pub(crate) fn ray_disc(origin: Vec2, dir: Vec2, center: Vec2, radius: f64) -> Option<f64> {
    let m = origin - center;
    let c = m.dot(m) - radius * radius;
    if c <= 0.0 {
        return Some(0.0);
    }
    let b = m.dot(dir);
    if b > 0.0 {
        return None;
    }
    let disc = b * b - c;
    (disc >= 0.0).then(|| -b - disc.sqrt())
}

pub(crate) fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 < EPS {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.distance(a + e * t)
}

pub(crate) fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = (q2 - q1).cross(p1 - q1);
    let d2 = (q2 - q1).cross(p2 - q1);
    let d3 = (p2 - p1).cross(q1 - p1);
    let d4 = (p2 - p1).cross(q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    // collinear or touching cases
    (d1 == 0.0 && point_segment_distance(p1, q1, q2) < EPS)
        || (d2 == 0.0 && point_segment_distance(p2, q1, q2) < EPS)
        || (d3 == 0.0 && point_segment_distance(q1, p1, p2) < EPS)
        || (d4 == 0.0 && point_segment_distance(q2, p1, p2) < EPS)
}

pub(crate) fn segment_segment_distance(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> f64 {
    if segments_intersect(p1, p2, q1, q2) {
        return 0.0;
    }
    point_segment_distance(p1, q1, q2)
        .min(point_segment_distance(p2, q1, q2))
        .min(point_segment_distance(q1, p1, p2))
        .min(point_segment_distance(q2, p1, p2))
}

/// Even-odd rule.
pub(crate) fn point_in_polygon(p: Vec2, poly: &[Vec2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub(crate) fn edges(poly: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    (0..poly.len()).map(move |i| (poly[i], poly[(i + 1) % poly.len()]))
}

/// No two non-adjacent edges touch and no adjacent pair overlaps.
pub(crate) fn polygon_is_simple(poly: &[Vec2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a1, a2) = (poly[i], poly[(i + 1) % n]);
            let (b1, b2) = (poly[j], poly[(j + 1) % n]);
            if adjacent {
                // adjacent edges may only share their common vertex
                let (shared, other_a, other_b) = if j == i + 1 { (a2, a1, b2) } else { (a1, a2, b1) };
                let u = other_a - shared;
                let v = other_b - shared;
                if u.cross(v).abs() < EPS && u.dot(v) > 0.0 {
                    return false;
                }
            } else if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}

/// Length of `origin + t * dir`, `t` in `[0, len]`, lying inside `poly`.
pub(crate) fn ray_length_inside(origin: Vec2, dir: Vec2, len: f64, poly: &[Vec2]) -> f64 {
    let mut ts: Vec<f64> = edges(poly)
        .filter_map(|(a, b)| ray_segment(origin, dir, a, b))
        .filter(|&t| t < len)
        .collect();
    ts.push(0.0);
    ts.push(len);
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    ts.windows(2)
        .filter(|w| w[1] - w[0] > EPS && point_in_polygon(origin + dir * (0.5 * (w[0] + w[1])), poly))
        .map(|w| w[1] - w[0])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn ray_hits_segment_ahead() {
        let t = ray_segment(v(0.0, 0.0), v(1.0, 0.0), v(1.0, -1.0), v(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(t, 1.0, epsilon = 1e-12);
        assert!(ray_segment(v(0.0, 0.0), v(-1.0, 0.0), v(1.0, -1.0), v(1.0, 1.0)).is_none());
        assert!(ray_segment(v(0.0, 0.0), v(0.0, 1.0), v(1.0, -1.0), v(1.0, 1.0)).is_none());
    }

    #[test]
    fn ray_disc_entry() {
        let t = ray_disc(v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0), 0.5).unwrap();
        assert_abs_diff_eq!(t, 1.5, epsilon = 1e-12);
        assert_eq!(ray_disc(v(2.0, 0.1), v(1.0, 0.0), v(2.0, 0.0), 0.5), Some(0.0));
        assert!(ray_disc(v(0.0, 1.0), v(1.0, 0.0), v(2.0, 0.0), 0.5).is_none());
    }

    #[test]
    fn distances() {
        assert_abs_diff_eq!(point_segment_distance(v(0.5, 1.0), v(0.0, 0.0), v(1.0, 0.0)), 1.0);
        assert_abs_diff_eq!(point_segment_distance(v(2.0, 0.0), v(0.0, 0.0), v(1.0, 0.0)), 1.0);
        assert_eq!(segment_segment_distance(v(0.0, -1.0), v(0.0, 1.0), v(-1.0, 0.0), v(1.0, 0.0)), 0.0);
        assert_abs_diff_eq!(
            segment_segment_distance(v(0.0, 0.0), v(1.0, 0.0), v(0.0, 0.5), v(1.0, 0.5)),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn polygon_tests() {
        let square = [v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)];
        assert!(point_in_polygon(v(0.5, 0.5), &square));
        assert!(!point_in_polygon(v(1.5, 0.5), &square));
        assert!(polygon_is_simple(&square));
        let bowtie = [v(0.0, 0.0), v(1.0, 1.0), v(1.0, 0.0), v(0.0, 1.0)];
        assert!(!polygon_is_simple(&bowtie));
        assert_abs_diff_eq!(ray_length_inside(v(-1.0, 0.5), v(1.0, 0.0), 5.0, &square), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ray_length_inside(v(0.5, 0.5), v(1.0, 0.0), 5.0, &square), 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(ray_length_inside(v(-1.0, 0.5), v(1.0, 0.0), 1.25, &square), 0.25, epsilon = 1e-9);
    }
}
