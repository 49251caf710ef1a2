use alloc::vec::Vec;

use num_traits::Float;

use super::equirect::Panorama;
use super::lens::Unwarped;
use super::GeometryError;
use crate::image::Image;
use crate::math::{Rotation, Vec3};

/// Matched pixels `(front, rear)` between the two unwarped halves, in
/// equirectangular pixel coordinates of each half.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlPointSet {
    pub pairs: Vec<([f64; 2], [f64; 2])>,
}

impl ControlPointSet {
    pub fn new(pairs: Vec<([f64; 2], [f64; 2])>) -> Self {
        ControlPointSet { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Rotation of the rear sphere onto the front one: `front ≈ rotation * rear`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub rotation: Rotation,
    /// RMS great-circle residual in radians.
    pub residual_rms: f64,
    /// Control points were collinear; only yaw was fitted.
    pub degenerate: bool,
}

impl Alignment {
    pub const IDENTITY: Alignment = Alignment {
        rotation: Rotation::IDENTITY,
        residual_rms: 0.0,
        degenerate: false,
    };
}

/// Fit the rear-sphere rotation minimizing the sum of squared great-circle
/// distances between paired control points.
pub fn align_halves(
    front: &Unwarped,
    rear: &Unwarped,
    cps: &ControlPointSet,
) -> Result<Alignment, GeometryError> {
    if (front.width(), front.height()) != (rear.width(), rear.height()) {
        return Err(GeometryError::SizeMismatch(
            (front.width(), front.height()),
            (rear.width(), rear.height()),
        ));
    }
    if cps.len() < 3 {
        return Err(GeometryError::TooFewControlPoints(cps.len()));
    }
    for (i, (f, r)) in cps.pairs.iter().enumerate() {
        if !pixel_valid(front, *f) || !pixel_valid(rear, *r) {
            return Err(GeometryError::ControlPointOutsideOverlap(i));
        }
    }

    let grid = Panorama::full(Image::new(front.width(), front.height()));
    let targets: Vec<Vec3> = cps.pairs.iter().map(|(f, _)| grid.direction(f[0], f[1])).collect();
    let sources: Vec<Vec3> = cps.pairs.iter().map(|(_, r)| grid.direction(r[0], r[1])).collect();

    let degenerate = collinear(cps.pairs.iter().map(|(f, _)| *f));
    let rotation = if degenerate {
        refine_yaw(&sources, &targets, fit_yaw(&sources, &targets))
    } else {
        refine(&sources, &targets, fit_horn(&sources, &targets))
    };
    Ok(Alignment {
        rotation,
        residual_rms: rms_residual(&rotation, &sources, &targets),
        degenerate,
    })
}

fn pixel_valid(u: &Unwarped, p: [f64; 2]) -> bool {
    let (x, y) = (p[0].round(), p[1].round());
    if !(x >= 0.0 && y >= 0.0) {
        return false;
    }
    let (x, y) = (x as usize, y as usize);
    x < u.width() && y < u.height() && u.is_valid(x, y)
}

/// Pixel-space collinearity: the minor axis of the point scatter is below
/// half a pixel.
fn collinear(points: impl Iterator<Item = [f64; 2]>) -> bool {
    let pts: Vec<[f64; 2]> = points.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in &pts {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    let (sxx, syy, sxy) = (sxx / n, syy / n, sxy / n);
    let half_trace = 0.5 * (sxx + syy);
    let disc = (0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy).sqrt();
    half_trace - disc < 0.25
}

fn rms_residual(r: &Rotation, sources: &[Vec3], targets: &[Vec3]) -> f64 {
    let sum: f64 = sources
        .iter()
        .zip(targets)
        .map(|(s, t)| {
            let a = r.apply(*s).angle_to(*t);
            a * a
        })
        .sum();
    (sum / sources.len() as f64).sqrt()
}

/// Closed-form least-squares rotation (Horn's quaternion method).
fn fit_horn(sources: &[Vec3], targets: &[Vec3]) -> Rotation {
    let mut s = [[0.0f64; 3]; 3];
    for (a, b) in sources.iter().zip(targets) {
        let a = [a.x, a.y, a.z];
        let b = [b.x, b.y, b.z];
        for i in 0..3 {
            for j in 0..3 {
                s[i][j] += a[i] * b[j];
            }
        }
    }
    let (sxx, sxy, sxz) = (s[0][0], s[0][1], s[0][2]);
    let (syx, syy, syz) = (s[1][0], s[1][1], s[1][2]);
    let (szx, szy, szz) = (s[2][0], s[2][1], s[2][2]);
    let n = [
        [sxx + syy + szz, syz - szy, szx - sxz, sxy - syx],
        [syz - szy, sxx - syy - szz, sxy + syx, szx + sxz],
        [szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy],
        [sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz],
    ];
    let (values, vectors) = jacobi_eigen4(n);
    let best = (0..4)
        .max_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    Rotation::from_quaternion([vectors[0][best], vectors[1][best], vectors[2][best], vectors[3][best]])
}

/// Least-squares yaw from horizontal components.
fn fit_yaw(sources: &[Vec3], targets: &[Vec3]) -> f64 {
    let (mut sin_sum, mut cos_sum) = (0.0, 0.0);
    for (a, b) in sources.iter().zip(targets) {
        cos_sum += a.x * b.x + a.y * b.y;
        sin_sum += a.x * b.y - a.y * b.x;
    }
    sin_sum.atan2(cos_sum)
}

fn objective(r: &Rotation, sources: &[Vec3], targets: &[Vec3]) -> f64 {
    sources
        .iter()
        .zip(targets)
        .map(|(s, t)| {
            let a = r.apply(*s).angle_to(*t);
            a * a
        })
        .sum()
}

/// Gauss-Newton on great-circle residuals, left-perturbing the rotation.
fn refine(sources: &[Vec3], targets: &[Vec3], start: Rotation) -> Rotation {
    const H: f64 = 1e-7;
    let mut r = start;
    let mut best = objective(&r, sources, targets);
    for _ in 0..20 {
        if best < 1e-24 {
            break;
        }
        // normal equations J^T J dx = -J^T res
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        for (s, t) in sources.iter().zip(targets) {
            let res = r.apply(*s).angle_to(*t);
            let mut grad = [0.0; 3];
            for (k, g) in grad.iter_mut().enumerate() {
                let mut v = [0.0; 3];
                v[k] = H;
                let dr = Rotation::from_rotation_vector(Vec3::new(v[0], v[1], v[2])).compose(&r);
                *g = (dr.apply(*s).angle_to(*t) - res) / H;
            }
            for i in 0..3 {
                jtr[i] += grad[i] * res;
                for j in 0..3 {
                    jtj[i][j] += grad[i] * grad[j];
                }
            }
        }
        let step = match solve3(jtj, [-jtr[0], -jtr[1], -jtr[2]]) {
            Some(s) => s,
            None => break,
        };
        let candidate = Rotation::from_rotation_vector(Vec3::new(step[0], step[1], step[2])).compose(&r);
        let value = objective(&candidate, sources, targets);
        if value >= best {
            break;
        }
        r = candidate;
        best = value;
    }
    r
}

fn refine_yaw(sources: &[Vec3], targets: &[Vec3], start: f64) -> Rotation {
    const H: f64 = 1e-7;
    let mut yaw = start;
    let mut best = objective(&Rotation::yaw(yaw), sources, targets);
    for _ in 0..20 {
        let f1 = objective(&Rotation::yaw(yaw + H), sources, targets);
        let f0 = objective(&Rotation::yaw(yaw - H), sources, targets);
        let g = (f1 - f0) / (2.0 * H);
        let c = (f1 - 2.0 * best + f0) / (H * H);
        if !(c > 0.0) {
            break;
        }
        let next = yaw - g / c;
        let value = objective(&Rotation::yaw(next), sources, targets);
        if value >= best {
            break;
        }
        yaw = next;
        best = value;
    }
    Rotation::yaw(yaw)
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for i in 0..3 {
            m[i][k] = b[i];
        }
        *o = det(&m) / d;
    }
    Some(out)
}

/// Cyclic Jacobi eigen-decomposition of a symmetric 4x4 matrix. Returns the
/// eigenvalues and a matrix whose columns are the eigenvectors.
fn jacobi_eigen4(mut a: [[f64; 4]; 4]) -> ([f64; 4], [[f64; 4]; 4]) {
    let mut v = [[0.0f64; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..50 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}
