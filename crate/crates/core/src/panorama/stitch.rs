use super::align::{align_halves, Alignment, ControlPointSet};
use super::blend::blend_halves;
use super::equirect::Panorama;
use super::lens::{compensate_vignette, unwarp_fisheye, Facing, FisheyePair, LensModel, Vignette};
use super::GeometryError;
use crate::image::Image;
use crate::math::Rotation;

#[derive(Debug, Clone, PartialEq)]
pub struct Stitched {
    /// Full-sphere panorama, `width x height`.
    pub panorama: Panorama,
    pub alignment: Alignment,
}

/// Vignette compensation, unwarp of both lenses, alignment on the control
/// points and feathered blend.
pub fn stitch_pair(
    pair: &FisheyePair,
    cps: &ControlPointSet,
    width: usize,
    height: usize,
) -> Result<Stitched, GeometryError> {
    pair.validate()?;
    let front = compensate_vignette(&pair.front, &pair.vignette)?;
    let rear = compensate_vignette(&pair.rear, &pair.vignette)?;
    let front = unwarp_fisheye(&front, &pair.lens, Facing::Front, width, height)?;
    let rear = unwarp_fisheye(&rear, &pair.lens, Facing::Rear, width, height)?;
    let alignment = align_halves(&front, &rear, cps)?;
    let panorama = blend_halves(&front, &rear, &alignment.rotation)?;
    Ok(Stitched { panorama, alignment })
}

/// Synthesize what one lens sees of a full-sphere panorama. `rig` maps the
/// lens's nominal camera frame into the panorama frame; a yaw here models a
/// rear lens mounted slightly off its ideal heading. Each pixel averages a
/// `supersample x supersample` grid; pixels outside the field of view are
/// black.
pub fn render_fisheye(
    pano: &Panorama,
    lens: &LensModel,
    facing: Facing,
    rig: &Rotation,
    size: usize,
    supersample: usize,
) -> Image {
    let to_world = rig.compose(&facing.rotation());
    let half_fov = lens.fov * 0.5;
    let n = supersample.max(1);
    let step = 1.0 / n as f64;
    Image::from_fn(size, size, |x, y| {
        let mut acc = [0.0f32; 3];
        for j in 0..n {
            for i in 0..n {
                let px = x as f64 - 0.5 + (i as f64 + 0.5) * step;
                let py = y as f64 - 0.5 + (j as f64 + 0.5) * step;
                let c = (size as f64 - 1.0) * 0.5;
                let r = (px - c).hypot(py - c);
                if lens.angle_of_radius(r) > half_fov {
                    continue;
                }
                let dir = to_world.apply(lens.unproject(px, py, size));
                let (col, row) = pano.pixel_of(dir);
                let rgb = pano.image().sample_cyclic(col, row);
                for k in 0..3 {
                    acc[k] += rgb[k];
                }
            }
        }
        acc.map(|v| v / (n * n) as f32)
    })
}

/// Multiply by the radial gain; inverse of [`compensate_vignette`] inside
/// the lens disc.
pub fn apply_vignette(img: &Image, params: &Vignette) -> Image {
    let c = (img.width() as f64 - 1.0) * 0.5;
    let half = img.width() as f64 * 0.5;
    Image::from_fn(img.width(), img.height(), |x, y| {
        let r = ((x as f64 - c).hypot(y as f64 - c) / half).min(1.0);
        let g = params.gain(r) as f32;
        img.get(x, y).map(|v| v * g)
    })
}
