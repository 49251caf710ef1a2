use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_traits::Float;

use super::equirect::{azimuth_of_column, Panorama};
use super::GeometryError;
use crate::image::Image;
use crate::math::Vec2;

/// Half-open column range `[start, start + len)` on a cyclic axis of
/// `width` columns. `start` is normalized into `[0, width)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColumnRange {
    pub start: usize,
    pub len: usize,
    pub width: usize,
}

impl ColumnRange {
    /// Range starting at any (possibly negative or overflowing) column.
    pub fn new(start: i64, len: usize, width: usize) -> Self {
        ColumnRange {
            start: start.rem_euclid(width as i64) as usize,
            len: len.min(width),
            width,
        }
    }

    /// One or two contiguous spans, left to right in storage order.
    pub fn spans(&self) -> ([usize; 2], Option<[usize; 2]>) {
        let end = self.start + self.len;
        if end <= self.width {
            ([self.start, end], None)
        } else {
            ([self.start, self.width], Some([0, end - self.width]))
        }
    }

    pub fn contains(&self, column: usize) -> bool {
        let offset = (column + self.width - self.start) % self.width;
        offset < self.len
    }
}

/// One angular window of the panorama.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Slice {
    pub range: ColumnRange,
    /// Center azimuth (radians, counterclockwise from forward).
    pub azimuth: f64,
    /// Unit vector toward the center azimuth, robot frame.
    pub direction: Vec2,
    /// Half of the angular width covered by `range`.
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SliceSet {
    pub width: usize,
    pub n_split: usize,
    pub overlap_frac: f64,
    pub slices: Vec<Slice>,
}

impl SliceSet {
    pub const DEFAULT_OVERLAP: f64 = 0.25;

    /// Slices for a panorama `width` columns wide; depends on nothing else.
    pub fn for_width(width: usize, n_split: usize, overlap_frac: f64) -> Result<Self, GeometryError> {
        if n_split < 2 {
            return Err(GeometryError::InvalidParameter("N_split must be at least 2"));
        }
        if !(0.0..1.0).contains(&overlap_frac) {
            return Err(GeometryError::InvalidParameter("overlap fraction must lie in [0, 1)"));
        }
        if width == 0 {
            return Err(GeometryError::InvalidParameter("panorama width must be nonzero"));
        }
        let base = width as f64 / n_split as f64;
        let slice_width = base * (1.0 + overlap_frac);
        if slice_width > width as f64 {
            return Err(GeometryError::InvalidParameter("slice wider than the panorama"));
        }
        let len = (slice_width.round() as usize).max(1);
        let slices = (0..n_split)
            .map(|i| {
                let center = (i as f64 + 0.5) * base;
                let start = (center - slice_width * 0.5).round() as i64;
                let azimuth = azimuth_of_column(center, width);
                Slice {
                    range: ColumnRange::new(start, len, width),
                    azimuth,
                    direction: Vec2::from_angle(azimuth),
                    half_width: 0.5 * len as f64 * TAU / width as f64,
                }
            })
            .collect();
        Ok(SliceSet {
            width,
            n_split,
            overlap_frac,
            slices,
        })
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn directions(&self) -> Vec<Vec2> {
        self.slices.iter().map(|s| s.direction).collect()
    }

    /// Indices of slices whose column range holds `column` (mod width).
    pub fn slices_containing(&self, column: usize) -> impl Iterator<Item = usize> + '_ {
        let column = column % self.width;
        self.slices
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.range.contains(column))
            .map(|(i, _)| i)
    }

    /// Cut each slice out of the panorama, unwrapping wrapped ranges.
    pub fn extract(&self, p: &Panorama) -> Result<Vec<Image>, GeometryError> {
        if p.width() != self.width {
            return Err(GeometryError::SizeMismatch((p.width(), p.height()), (self.width, p.height())));
        }
        Ok(self
            .slices
            .iter()
            .map(|s| {
                let (a, b) = s.range.spans();
                let mut spans = alloc::vec![(a[0], a[1])];
                if let Some(b) = b {
                    spans.push((b[0], b[1]));
                }
                p.image().columns(&spans)
            })
            .collect())
    }
}

pub fn make_slices(p: &Panorama, n_split: usize, overlap_frac: f64) -> Result<SliceSet, GeometryError> {
    SliceSet::for_width(p.width(), n_split, overlap_frac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eight_slices_without_overlap() {
        let s = SliceSet::for_width(2000, 8, 0.0).unwrap();
        let starts: Vec<usize> = s.slices.iter().map(|x| x.range.start).collect();
        assert_eq!(starts, [0, 250, 500, 750, 1000, 1250, 1500, 1750]);
        assert!(s.slices.iter().all(|x| x.range.len == 250));
        // centers at 125, 375, ...
        assert_relative_eq!(s.slices[0].azimuth, azimuth_of_column(125.0, 2000));
        assert_relative_eq!(s.slices[7].azimuth, azimuth_of_column(1875.0, 2000));
    }

    #[test]
    fn center_column_faces_forward() {
        // with an odd N_split the middle slice is centered on column W/2
        let s = SliceSet::for_width(2000, 5, 0.0).unwrap();
        assert_relative_eq!(s.slices[2].azimuth, 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.slices[2].direction.x, 1.0);
        assert_relative_eq!(s.slices[2].direction.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn wrapping_range_splits() {
        let r = ColumnRange::new(1900, 250, 2000);
        assert_eq!(r.spans(), ([1900, 2000], Some([0, 150])));
        assert!(r.contains(1999) && r.contains(0) && r.contains(149));
        assert!(!r.contains(150) && !r.contains(1899));
        let neg = ColumnRange::new(-31, 312, 2000);
        assert_eq!(neg.spans(), ([1969, 2000], Some([0, 281])));
    }

    #[test]
    fn overlap_widens_slices() {
        let s = SliceSet::for_width(2000, 8, 0.25).unwrap();
        assert_eq!(s.slices[0].range.len, 313);
        assert_eq!(s.slices[0].range.spans().0[0], 1969);
        assert!(s.slices_containing(1990).eq([0, 7]));
    }

    #[test]
    fn bad_parameters() {
        assert!(SliceSet::for_width(2000, 1, 0.0).is_err());
        assert!(SliceSet::for_width(2000, 8, 1.0).is_err());
        assert!(SliceSet::for_width(2000, 8, -0.1).is_err());
    }

    #[test]
    fn extract_unwraps() {
        let img = Image::from_fn(8, 1, |x, _| [x as f32; 3]);
        let p = Panorama::full(img);
        let s = SliceSet::for_width(8, 2, 0.5).unwrap();
        let parts = s.extract(&p).unwrap();
        // slice 0 is centered on column 2 with width 6: [-1, 5)
        let cols: Vec<f32> = (0..parts[0].width()).map(|x| parts[0].get(x, 0)[0]).collect();
        assert_eq!(cols, [7.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
    }
}
