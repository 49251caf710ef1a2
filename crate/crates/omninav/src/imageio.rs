//! 8-bit RGB(A)/gray PNG to and from linear `[0, 1]` float images.

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor};
use std::path::Path;

use omninav_core::Image;

use crate::error::{Error, Result};

fn image_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Image {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn decode(reader: impl std::io::BufRead + std::io::Seek, path: &Path) -> Result<Image> {
    let mut decoder = png::Decoder::new(reader);
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(|e| image_err(path, e))?;
    let mut buf = vec![0; reader.output_buffer_size().ok_or_else(|| image_err(path, "image too large"))?];
    let info = reader.next_frame(&mut buf).map_err(|e| image_err(path, e))?;
    let (w, h) = (info.width as usize, info.height as usize);
    let channels = match info.color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        png::ColorType::Indexed => return Err(image_err(path, "indexed color not expanded")),
    };
    let bytes = &buf[..info.buffer_size()];
    Ok(Image::from_fn(w, h, |x, y| {
        let p = &bytes[(y * w + x) * channels..];
        let v = |i: usize| p[i] as f32 / 255.0;
        if channels < 3 {
            [v(0); 3]
        } else {
            [v(0), v(1), v(2)]
        }
    }))
}

pub fn read_png(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    decode(BufReader::new(file), path)
}

pub fn decode_png(bytes: &[u8]) -> Result<Image> {
    decode(Cursor::new(bytes), Path::new("<memory>"))
}

fn encode(img: &Image, out: impl std::io::Write, path: &Path) -> Result<()> {
    let mut enc = png::Encoder::new(out, img.width() as u32, img.height() as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header().map_err(|e| image_err(path, e))?;
    let data: Vec<u8> = img
        .data()
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    writer.write_image_data(&data).map_err(|e| image_err(path, e))
}

pub fn write_png(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    encode(img, BufWriter::new(file), path)
}

pub fn encode_png(img: &Image) -> Vec<u8> {
    let mut out = Vec::new();
    encode(img, &mut out, Path::new("<memory>")).expect("in-memory png encode");
    out
}
