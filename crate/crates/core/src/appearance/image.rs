//! 8-bit grayscale rasters and PNG input/output.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major 8-bit intensities; 0 is black ink, 255 white paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32) -> Self {
        Self::filled(width, height, 0)
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        GrayImage { width, height, pixels: vec![value; width as usize * height as usize] }
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Option<Self> {
        (pixels.len() == width as usize * height as usize).then_some(GrayImage { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: u8) {
        let w = self.width as usize;
        self.pixels[y as usize * w + x as usize] = v;
    }

    pub fn histogram(&self) -> [u64; 256] {
        let mut hist = [0u64; 256];
        for &p in &self.pixels {
            hist[p as usize] += 1;
        }
        hist
    }

    /// Copies `src` into this image with its top-left corner at `(x, y)`,
    /// clipping anything that falls outside.
    pub fn blit(&mut self, src: &GrayImage, x: u32, y: u32) {
        for sy in 0..src.height {
            let ty = y + sy;
            if ty >= self.height {
                break;
            }
            for sx in 0..src.width {
                let tx = x + sx;
                if tx >= self.width {
                    break;
                }
                self.set(tx, ty, src.get(sx, sy));
            }
        }
    }

    /// Encodes as an 8-bit grayscale PNG.
    pub fn encode_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Eight);
            enc.set_compression(png::Compression::Fast);
            let mut writer = enc.write_header().expect("in-memory PNG header");
            writer.write_image_data(&self.pixels).expect("in-memory PNG data");
        }
        out
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let bytes = self.encode_png();
        let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&bytes).map_err(|e| Error::io(path, e))
    }

    /// Reads a PNG, converting color to gray with 0.299 R + 0.587 G + 0.114 B.
    /// Alpha is ignored and 16-bit samples are reduced to 8 bits.
    pub fn read_png(path: &Path) -> Result<GrayImage> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let png_err = |e: png::DecodingError| Error::Png { path: path.to_path_buf(), message: e.to_string() };
        let mut decoder = png::Decoder::new(BufReader::new(file));
        decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
        let mut reader = decoder.read_info().map_err(png_err)?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| Error::Png { path: path.to_path_buf(), message: "image too large".into() })?;
        let mut buf = vec![0u8; size];
        let info = reader.next_frame(&mut buf).map_err(png_err)?;
        buf.truncate(info.buffer_size());
        let channels = info.color_type.samples();
        let luma = |r: u8, g: u8, b: u8| -> u8 {
            (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round().clamp(0.0, 255.0) as u8
        };
        let pixels: Vec<u8> = match info.color_type {
            png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha => {
                buf.chunks_exact(channels).map(|c| c[0]).collect()
            }
            png::ColorType::Rgb | png::ColorType::Rgba => {
                buf.chunks_exact(channels).map(|c| luma(c[0], c[1], c[2])).collect()
            }
            png::ColorType::Indexed => {
                return Err(Error::Png { path: path.to_path_buf(), message: "unexpanded palette".into() })
            }
        };
        GrayImage::from_pixels(info.width, info.height, pixels)
            .ok_or_else(|| Error::Png { path: path.to_path_buf(), message: "unexpected sample layout".into() })
    }
}

/// Rounds half away from zero and clamps into the 8-bit range.
#[inline]
pub fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.png");
        let img = GrayImage::from_pixels(3, 2, vec![0, 10, 20, 200, 255, 128]).unwrap();
        img.write_png(&path).unwrap();
        assert_eq!(GrayImage::read_png(&path).unwrap(), img);
    }

    #[test]
    fn color_png_uses_luminance_weights() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.png");
        let mut bytes = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut bytes, 2, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[255, 0, 0, 10, 200, 30]).unwrap();
        }
        std::fs::write(&path, bytes).unwrap();
        let img = GrayImage::read_png(&path).unwrap();
        // 0.299*255 = 76.245; 0.299*10 + 0.587*200 + 0.114*30 = 123.79
        assert_eq!(img.pixels(), &[76, 124]);
    }

    #[test]
    fn quantize_rounds_half_away_and_clamps() {
        assert_eq!(quantize(2.5), 3);
        assert_eq!(quantize(2.4999), 2);
        assert_eq!(quantize(-3.0), 0);
        assert_eq!(quantize(300.0), 255);
    }
}
