use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::equirect::{azimuth_of_column, sphere_direction, Panorama};
use super::GeometryError;
use crate::image::Image;
use crate::math::{Rotation, Vec3};

/// Radial projection of a fisheye lens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projection {
    /// `r = f * angle`
    #[default]
    Equidistant,
    /// `r = 2 f sin(angle / 2)`
    Equisolid,
}

/// Intrinsics shared by both lenses of the camera.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensModel {
    pub projection: Projection,
    /// Pixels per radian (equidistant) at the image scale.
    pub focal: f64,
    /// Full field of view in radians.
    pub fov: f64,
}

impl LensModel {
    pub const DEFAULT_FOV_DEG: f64 = 200.0;

    /// Equidistant lens whose field-of-view circle touches the image border.
    pub fn fitted(size: usize, fov: f64) -> Self {
        LensModel {
            projection: Projection::Equidistant,
            focal: size as f64 * 0.5 / (fov * 0.5),
            fov,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.fov > PI && self.fov < 2.0 * PI) {
            return Err(GeometryError::InvalidParameter("lens field of view must lie in (pi, 2 pi)"));
        }
        if !(self.focal > 0.0) {
            return Err(GeometryError::InvalidParameter("lens focal must be positive"));
        }
        Ok(())
    }

    pub fn radius_of_angle(&self, angle: f64) -> f64 {
        match self.projection {
            Projection::Equidistant => self.focal * angle,
            Projection::Equisolid => 2.0 * self.focal * (angle * 0.5).sin(),
        }
    }

    pub fn angle_of_radius(&self, radius: f64) -> f64 {
        match self.projection {
            Projection::Equidistant => radius / self.focal,
            Projection::Equisolid => 2.0 * (radius / (2.0 * self.focal)).clamp(-1.0, 1.0).asin(),
        }
    }

    /// Fisheye pixel of a lens-frame ray (`+x` optical axis, `+y` left,
    /// `+z` up) for a `size`-pixel square image.
    pub fn project(&self, lens_dir: Vec3, size: usize) -> (f64, f64) {
        let c = (size as f64 - 1.0) * 0.5;
        let rho = lens_dir.y.hypot(lens_dir.z);
        if rho == 0.0 {
            return (c, c);
        }
        let r = self.radius_of_angle(rho.atan2(lens_dir.x));
        (c - r * lens_dir.y / rho, c - r * lens_dir.z / rho)
    }

    /// Lens-frame unit ray through a fisheye pixel.
    pub fn unproject(&self, px: f64, py: f64, size: usize) -> Vec3 {
        let c = (size as f64 - 1.0) * 0.5;
        let (dx, dy) = (px - c, py - c);
        let r = dx.hypot(dy);
        if r == 0.0 {
            return Vec3::new(1.0, 0.0, 0.0);
        }
        let (s, co) = self.angle_of_radius(r).sin_cos();
        Vec3::new(co, -s * dx / r, -s * dy / r)
    }
}

/// Which way a lens of the dual-fisheye camera faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Facing {
    Front,
    Rear,
}

impl Facing {
    /// Lens frame expressed in the camera frame.
    pub fn rotation(self) -> Rotation {
        match self {
            Facing::Front => Rotation::IDENTITY,
            Facing::Rear => Rotation::yaw(PI),
        }
    }
}

/// Radial vignetting gain `g(r) = 1 + c2 r^2 + c4 r^4`, with `r`
/// normalized so the inscribed image circle has radius 1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vignette {
    pub c2: f64,
    pub c4: f64,
}

impl Vignette {
    pub fn gain(&self, r: f64) -> f64 {
        let r2 = r * r;
        1.0 + self.c2 * r2 + self.c4 * r2 * r2
    }

    /// Gain must stay positive and nonincreasing over the lens disc.
    pub fn validate(&self) -> Result<(), GeometryError> {
        // with u = r^2 in [0, 1]: g = 1 + c2 u + c4 u^2, g' = c2 + 2 c4 u
        if self.c2 > 0.0 || self.c2 + 2.0 * self.c4 > 0.0 {
            return Err(GeometryError::InvalidParameter("vignette gain must be nonincreasing in radius"));
        }
        // monotone, so the minimum is at the rim
        if self.gain(1.0) <= 0.0 {
            return Err(GeometryError::InvalidParameter("vignette gain must stay positive on the lens disc"));
        }
        Ok(())
    }
}

/// Raw dual-fisheye capture plus the optics needed to stitch it.
#[derive(Debug, Clone, PartialEq)]
pub struct FisheyePair {
    pub front: Image,
    pub rear: Image,
    pub lens: LensModel,
    pub vignette: Vignette,
}

impl FisheyePair {
    pub fn validate(&self) -> Result<(), GeometryError> {
        for img in [&self.front, &self.rear] {
            if !img.is_square() {
                return Err(GeometryError::NotSquare {
                    width: img.width(),
                    height: img.height(),
                });
            }
        }
        if self.front.width() != self.rear.width() {
            return Err(GeometryError::SizeMismatch(
                (self.front.width(), self.front.height()),
                (self.rear.width(), self.rear.height()),
            ));
        }
        self.lens.validate()?;
        self.vignette.validate()
    }
}

/// Divide each pixel by the radial gain and clamp to `[0, 1]`. Pixels outside
/// the inscribed circle use the rim gain.
pub fn compensate_vignette(img: &Image, params: &Vignette) -> Result<Image, GeometryError> {
    if !img.is_square() {
        return Err(GeometryError::NotSquare {
            width: img.width(),
            height: img.height(),
        });
    }
    params.validate()?;
    let size = img.width();
    let c = (size as f64 - 1.0) * 0.5;
    let radius = size as f64 * 0.5;
    let mut out = img.clone();
    for y in 0..size {
        for x in 0..size {
            let r = ((x as f64 - c).hypot(y as f64 - c) / radius).min(1.0);
            let g = params.gain(r) as f32;
            let px = img.get(x, y).map(|v| (v / g).clamp(0.0, 1.0));
            out.set(x, y, px);
        }
    }
    Ok(out)
}

/// One lens resampled onto the full equirectangular grid.
///
/// `margin` holds, per pixel, the angular distance (radians) from the ray to
/// the edge of the lens field of view; it is positive exactly where `valid`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unwarped {
    pub image: Image,
    pub valid: Vec<bool>,
    pub margin: Vec<f32>,
}

impl Unwarped {
    pub fn width(&self) -> usize {
        self.image.width()
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[y * self.width() + x]
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

/// Resample a fisheye image onto a `width x height` equirectangular grid.
pub fn unwarp_fisheye(
    img: &Image,
    lens: &LensModel,
    facing: Facing,
    width: usize,
    height: usize,
) -> Result<Unwarped, GeometryError> {
    if !img.is_square() {
        return Err(GeometryError::NotSquare {
            width: img.width(),
            height: img.height(),
        });
    }
    lens.validate()?;
    if width == 0 || height == 0 {
        return Err(GeometryError::InvalidParameter("output size must be nonzero"));
    }
    let to_lens = facing.rotation().transpose();
    let half_fov = lens.fov * 0.5;
    let size = img.width();
    let grid = Panorama::full(Image::new(1, height));

    let mut out = Image::new(width, height);
    let mut valid = vec![false; width * height];
    let mut margin = vec![0.0f32; width * height];
    for y in 0..height {
        let elevation = grid.elevation_of_row(y as f64);
        for x in 0..width {
            let dir = sphere_direction(azimuth_of_column(x as f64, width), elevation);
            let l = to_lens.apply(dir);
            let angle = l.y.hypot(l.z).atan2(l.x);
            let m = half_fov - angle;
            let i = y * width + x;
            margin[i] = m as f32;
            if m <= 0.0 {
                continue;
            }
            let (px, py) = lens.project(l, size);
            if let Some(rgb) = img.sample_bilinear(px, py) {
                out.set(x, y, rgb);
                valid[i] = true;
            }
        }
    }
    Ok(Unwarped {
        image: out,
        valid,
        margin,
    })
}
