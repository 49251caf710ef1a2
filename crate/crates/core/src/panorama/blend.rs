use num_traits::Float;

use super::equirect::Panorama;
use super::lens::Unwarped;
use super::GeometryError;
use crate::image::Image;
use crate::math::Rotation;

/// Feather-blend the front half with the rotated rear half.
///
/// Inside the overlap the front weight is `m_f / (m_f + m_r)`, where `m` is
/// the angular margin to each lens' field-of-view edge; for opposed lenses
/// this ramps linearly from 0 to 1 across the band. Outside the overlap the
/// single valid source is copied.
pub fn blend_halves(
    front: &Unwarped,
    rear: &Unwarped,
    rear_to_front: &Rotation,
) -> Result<Panorama, GeometryError> {
    let (w, h) = (front.width(), front.height());
    if (w, h) != (rear.width(), rear.height()) {
        return Err(GeometryError::SizeMismatch((w, h), (rear.width(), rear.height())));
    }
    let grid = Panorama::full(Image::new(w, h));
    let front_to_rear = rear_to_front.transpose();
    let mut out = Image::new(w, h);
    let mut overlap = 0usize;
    for y in 0..h {
        for x in 0..w {
            let f_ok = front.is_valid(x, y);
            let (rc, rr) = grid.pixel_of(front_to_rear.apply(grid.direction(x as f64, y as f64)));
            let rear_sample = sample_rear(rear, rc, rr);
            let px = match (f_ok, rear_sample) {
                (true, Some((rgb, m_r))) => {
                    overlap += 1;
                    let m_f = front.margin[y * w + x];
                    let wf = m_f / (m_f + m_r);
                    let f = front.image.get(x, y);
                    [0, 1, 2].map(|k| f[k] * wf + rgb[k] * (1.0 - wf))
                }
                (true, None) => front.image.get(x, y),
                (false, Some((rgb, _))) => rgb,
                (false, None) => [0.0; 3],
            };
            out.set(x, y, px);
        }
    }
    if overlap == 0 {
        return Err(GeometryError::NoOverlap);
    }
    Ok(Panorama::full(out))
}

/// Bilinear sample of the rear half, valid only when all four taps are.
fn sample_rear(rear: &Unwarped, x: f64, y: f64) -> Option<([f32; 3], f32)> {
    let (w, h) = (rear.width(), rear.height());
    let y = y.clamp(0.0, (h - 1) as f64);
    let x0 = (x.floor() as usize).min(w - 1);
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1) % w;
    let y1 = (y0 + 1).min(h - 1);
    let taps = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)];
    if !taps.iter().all(|&(tx, ty)| rear.is_valid(tx, ty)) {
        return None;
    }
    let fx = (x - x0 as f64) as f32;
    let fy = (y - y0 as f64) as f32;
    let weights = [(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy];
    let mut rgb = [0.0f32; 3];
    let mut margin = 0.0f32;
    for (&(tx, ty), wt) in taps.iter().zip(weights) {
        let p = rear.image.get(tx, ty);
        for k in 0..3 {
            rgb[k] += p[k] * wt;
        }
        margin += rear.margin[ty * w + tx] * wt;
    }
    Some((rgb, margin.max(f32::MIN_POSITIVE)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panorama::{unwarp_fisheye, Facing, LensModel};

    fn halves(front: [f32; 3], rear: [f32; 3]) -> (Unwarped, Unwarped) {
        let lens = LensModel::fitted(64, 200f64.to_radians());
        (
            unwarp_fisheye(&Image::filled(64, 64, front), &lens, Facing::Front, 200, 100).unwrap(),
            unwarp_fisheye(&Image::filled(64, 64, rear), &lens, Facing::Rear, 200, 100).unwrap(),
        )
    }

    #[test]
    fn equal_halves_blend_to_same_value() {
        let (f, r) = halves([0.4; 3], [0.4; 3]);
        let p = blend_halves(&f, &r, &Rotation::IDENTITY).unwrap();
        for y in 0..100 {
            for x in 0..200 {
                for ch in p.image().get(x, y) {
                    assert!((ch - 0.4).abs() < 1e-5, "({x},{y}) = {ch}");
                }
            }
        }
    }

    #[test]
    fn feather_midpoint_is_half() {
        let (f, r) = halves([0.0; 3], [1.0; 3]);
        let p = blend_halves(&f, &r, &Rotation::IDENTITY).unwrap();
        // column 50 is azimuth +90 degrees: equidistant from both lens axes
        let mid = p.image().get(50, 50);
        assert!((mid[0] - 0.5).abs() < 1e-4, "{mid:?}");
        // straight ahead only the front lens contributes
        assert_eq!(p.image().get(100, 50), [0.0; 3]);
        assert_eq!(p.image().get(0, 50), [1.0; 3]);
    }

    #[test]
    fn no_overlap_is_an_error() {
        let (f, _) = halves([0.0; 3], [1.0; 3]);
        let empty = Unwarped {
            image: Image::new(200, 100),
            valid: alloc::vec![false; 200 * 100],
            margin: alloc::vec![-1.0; 200 * 100],
        };
        assert_eq!(blend_halves(&f, &empty, &Rotation::IDENTITY), Err(GeometryError::NoOverlap));
    }
}
