use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_traits::Float;

use super::GeometryError;
use crate::image::Image;
use crate::math::Vec3;

/// Equirectangular image band.
///
/// Column `c` (pixel centers at integers) maps to azimuth `PI - TAU * c / W`,
/// so the center column faces forward and column 0 faces backward. Row `r`
/// maps to elevation `top_elevation - (r + 0.5) * row_pitch`.
#[derive(Debug, Clone, PartialEq)]
pub struct Panorama {
    image: Image,
    top_elevation: f64,
    row_pitch: f64,
    cyclic: bool,
}

impl Panorama {
    /// Full-sphere panorama: rows span elevation `[PI/2, -PI/2]`.
    pub fn full(image: Image) -> Self {
        let row_pitch = PI / image.height() as f64;
        Panorama {
            image,
            top_elevation: FRAC_PI_2,
            row_pitch,
            cyclic: true,
        }
    }

    pub fn image(&self) -> &Image {
        &self.image
    }

    pub fn into_image(self) -> Image {
        self.image
    }

    pub fn width(&self) -> usize {
        self.image.width()
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn azimuth_of_column(&self, column: f64) -> f64 {
        azimuth_of_column(column, self.width())
    }

    pub fn column_of_azimuth(&self, azimuth: f64) -> f64 {
        column_of_azimuth(azimuth, self.width())
    }

    pub fn elevation_of_row(&self, row: f64) -> f64 {
        self.top_elevation - (row + 0.5) * self.row_pitch
    }

    pub fn row_of_elevation(&self, elevation: f64) -> f64 {
        (self.top_elevation - elevation) / self.row_pitch - 0.5
    }

    /// Unit ray through a (continuous) pixel position.
    pub fn direction(&self, column: f64, row: f64) -> Vec3 {
        sphere_direction(self.azimuth_of_column(column), self.elevation_of_row(row))
    }

    /// Continuous pixel position of a ray; column in `[0, W)`.
    pub fn pixel_of(&self, dir: Vec3) -> (f64, f64) {
        let azimuth = dir.y.atan2(dir.x);
        let elevation = dir.z.atan2(dir.x.hypot(dir.y));
        (
            self.column_of_azimuth(azimuth),
            self.row_of_elevation(elevation),
        )
    }
}

pub(crate) fn azimuth_of_column(column: f64, width: usize) -> f64 {
    PI - TAU * column / width as f64
}

/// Inverse of [`azimuth_of_column`], wrapped into `[0, width)`.
pub(crate) fn column_of_azimuth(azimuth: f64, width: usize) -> f64 {
    let w = width as f64;
    let c = (PI - azimuth) / TAU * w;
    let c = c - (c / w).floor() * w;
    if c >= w {
        c - w
    } else {
        c
    }
}

pub(crate) fn sphere_direction(azimuth: f64, elevation: f64) -> Vec3 {
    let (se, ce) = elevation.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    Vec3::new(ce * ca, ce * sa, se)
}

/// Keep rows `[top, top + height)`. The azimuth map is unchanged.
pub fn crop_band(p: &Panorama, top: usize, height: usize) -> Result<Panorama, GeometryError> {
    if height == 0 || top + height > p.height() {
        return Err(GeometryError::EmptyBand);
    }
    Ok(Panorama {
        image: p.image.rows(top, height),
        top_elevation: p.top_elevation - top as f64 * p.row_pitch,
        row_pitch: p.row_pitch,
        cyclic: p.cyclic,
    })
}

/// Default crop: the vertically centered half of the panorama
/// (rows `[H/4, H/4 + H/2)`).
pub fn centered_band(height: usize) -> (usize, usize) {
    let band = height / 2;
    ((height - band) / 2, band)
}

impl Panorama {
    pub fn crop_centered(&self) -> Result<Panorama, GeometryError> {
        let (top, rows) = centered_band(self.height());
        crop_band(self, top, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn azimuth_convention() {
        assert_relative_eq!(azimuth_of_column(1000.0, 2000), 0.0);
        assert_relative_eq!(azimuth_of_column(0.0, 2000), PI);
        // clockwise: a larger column is to the right, i.e. negative azimuth
        assert!(azimuth_of_column(1500.0, 2000) < 0.0);
        assert_relative_eq!(column_of_azimuth(-PI, 2000), 0.0);
        assert_relative_eq!(column_of_azimuth(PI / 2.0, 2000), 500.0);
    }

    #[test]
    fn default_crop_is_2000_by_500() {
        let p = Panorama::full(Image::new(2000, 1000));
        let c = p.crop_centered().unwrap();
        assert_eq!((c.width(), c.height()), (2000, 500));
        assert_relative_eq!(c.azimuth_of_column(1000.0), 0.0);
    }

    #[test]
    fn crop_full_height_is_identity() {
        let img = Image::from_fn(8, 4, |x, y| [x as f32 / 8.0, y as f32 / 4.0, 0.0]);
        let p = Panorama::full(img);
        assert_eq!(crop_band(&p, 0, 4).unwrap(), p);
    }

    #[test]
    fn crop_row_offset() {
        let img = Image::from_fn(4, 1000, |_, y| [y as f32 / 1000.0, 0.0, 0.0]);
        let p = Panorama::full(img);
        let c = crop_band(&p, 250, 500).unwrap();
        assert_eq!(c.image().get(0, 0), p.image().get(0, 250));
        assert_relative_eq!(c.elevation_of_row(0.0), p.elevation_of_row(250.0));
    }

    #[test]
    fn crop_rejects_empty() {
        let p = Panorama::full(Image::new(4, 10));
        assert_eq!(crop_band(&p, 3, 0), Err(GeometryError::EmptyBand));
        assert_eq!(crop_band(&p, 8, 4), Err(GeometryError::EmptyBand));
    }

    #[test]
    fn pixel_direction_roundtrip() {
        let p = Panorama::full(Image::new(400, 200));
        for &(c, r) in &[(10.0, 20.0), (200.0, 100.0), (399.0, 150.5)] {
            let (c2, r2) = p.pixel_of(p.direction(c, r));
            assert_relative_eq!(c, c2, epsilon = 1e-9);
            assert_relative_eq!(r, r2, epsilon = 1e-9);
        }
    }
}
