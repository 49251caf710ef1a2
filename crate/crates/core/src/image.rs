//! Interleaved RGB float image used by the stitching pipeline.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

/// Interleaved RGB image with channel values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl Image {
    pub const CHANNELS: usize = 3;

    pub fn new(width: usize, height: usize) -> Self {
        Image {
            width,
            height,
            data: vec![0.0; width * height * Self::CHANNELS],
        }
    }

    pub fn filled(width: usize, height: usize, rgb: [f32; 3]) -> Self {
        let mut img = Self::new(width, height);
        for px in img.data.chunks_exact_mut(Self::CHANNELS) {
            px.copy_from_slice(&rgb);
        }
        img
    }

    /// Wrap interleaved RGB data. Returns `None` if the length does not match.
    pub fn from_raw(width: usize, height: usize, data: Vec<f32>) -> Option<Self> {
        (data.len() == width * height * Self::CHANNELS).then_some(Image {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [f32; 3]) -> Self {
        let mut img = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                img.set(x, y, f(x, y));
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<f32> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [f32; 3] {
        let i = (y * self.width + x) * Self::CHANNELS;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [f32; 3]) {
        let i = (y * self.width + x) * Self::CHANNELS;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Bilinear sample at continuous pixel coordinates (pixel centers at
    /// integers). Returns `None` when any of the four taps falls outside.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<[f32; 3]> {
        if !(x >= 0.0 && y >= 0.0) {
            return None;
        }
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let fx = (x - x0 as f64) as f32;
        let fy = (y - y0 as f64) as f32;
        let x1 = if fx > 0.0 { x0 + 1 } else { x0 };
        let y1 = if fy > 0.0 { y0 + 1 } else { y0 };
        if x1 >= self.width || y1 >= self.height {
            return None;
        }
        let (a, b, c, d) = (self.get(x0, y0), self.get(x1, y0), self.get(x0, y1), self.get(x1, y1));
        let mut out = [0.0; 3];
        for k in 0..3 {
            let top = a[k] + (b[k] - a[k]) * fx;
            let bottom = c[k] + (d[k] - c[k]) * fx;
            out[k] = top + (bottom - top) * fy;
        }
        Some(out)
    }

    /// Bilinear sample with horizontal wraparound (equirectangular images).
    /// Rows are clamped to the image.
    pub fn sample_cyclic(&self, x: f64, y: f64) -> [f32; 3] {
        let w = self.width as f64;
        let xw = x - (x / w).floor() * w;
        let y = y.clamp(0.0, (self.height - 1) as f64);
        let x0 = (xw.floor() as usize).min(self.width - 1);
        let y0 = y.floor() as usize;
        let fx = (xw - x0 as f64) as f32;
        let fy = (y - y0 as f64) as f32;
        let x1 = (x0 + 1) % self.width;
        let y1 = (y0 + 1).min(self.height - 1);
        let (a, b, c, d) = (self.get(x0, y0), self.get(x1, y0), self.get(x0, y1), self.get(x1, y1));
        let mut out = [0.0; 3];
        for k in 0..3 {
            let top = a[k] + (b[k] - a[k]) * fx;
            let bottom = c[k] + (d[k] - c[k]) * fx;
            out[k] = top + (bottom - top) * fy;
        }
        out
    }

    /// Copy of the row range `[top, top + rows)`.
    pub fn rows(&self, top: usize, rows: usize) -> Image {
        let stride = self.width * Self::CHANNELS;
        Image {
            width: self.width,
            height: rows,
            data: self.data[top * stride..(top + rows) * stride].to_vec(),
        }
    }

    /// Copy of the given column spans concatenated left to right.
    pub fn columns(&self, spans: &[(usize, usize)]) -> Image {
        let width: usize = spans.iter().map(|&(a, b)| b - a).sum();
        let mut out = Image::new(width, self.height);
        for y in 0..self.height {
            let mut ox = 0;
            for &(a, b) in spans {
                for x in a..b {
                    out.set(ox, y, self.get(x, y));
                    ox += 1;
                }
            }
        }
        out
    }
}

/// Peak signal-to-noise ratio in dB over pixels where `include` is true,
/// for images with unit peak.
pub fn psnr(a: &Image, b: &Image, mut include: impl FnMut(usize, usize) -> bool) -> f64 {
    assert_eq!((a.width, a.height), (b.width, b.height));
    let mut sum = 0.0f64;
    let mut n = 0usize;
    for y in 0..a.height {
        for x in 0..a.width {
            if !include(x, y) {
                continue;
            }
            let (p, q) = (a.get(x, y), b.get(x, y));
            for k in 0..3 {
                let d = (p[k] - q[k]) as f64;
                sum += d * d;
            }
            n += 3;
        }
    }
    if n == 0 {
        return f64::NAN;
    }
    let mse = sum / n as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_midpoint() {
        let img = Image::from_fn(2, 1, |x, _| if x == 0 { [0.0; 3] } else { [1.0; 3] });
        assert_eq!(img.sample_bilinear(0.5, 0.0), Some([0.5; 3]));
        assert_eq!(img.sample_bilinear(1.0, 0.0), Some([1.0; 3]));
        assert_eq!(img.sample_bilinear(1.5, 0.0), None);
        assert_eq!(img.sample_bilinear(-0.1, 0.0), None);
    }

    #[test]
    fn cyclic_wraps() {
        let img = Image::from_fn(4, 1, |x, _| [x as f32; 3]);
        assert_eq!(img.sample_cyclic(3.5, 0.0), [1.5; 3]);
        assert_eq!(img.sample_cyclic(-1.0, 0.0), [3.0; 3]);
    }

    #[test]
    fn psnr_identical_is_infinite() {
        let a = Image::filled(3, 3, [0.2, 0.4, 0.6]);
        assert!(psnr(&a, &a, |_, _| true).is_infinite());
    }
}
