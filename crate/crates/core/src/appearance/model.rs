//! Foreground/background Gaussian intensity model.

use std::fmt::Write as _;
use std::ops::Add;
use std::path::Path;

use rayon::prelude::*;

use super::image::{quantize, GrayImage};
use super::otsu::otsu_threshold;
use crate::error::{Error, Result};
use crate::stream::RandomStream;
use crate::typesetter::BinaryMask;

/// Gaussian intensity parameters of ink (foreground) and paper (background).
#[derive(Debug, Clone, PartialEq)]
pub struct PixelModel {
    fg_mean: f64,
    fg_std: f64,
    bg_mean: f64,
    bg_std: f64,
    source: String,
}

impl PixelModel {
    /// Validates and builds a model. Ink must be darker than paper.
    pub fn new(fg_mean: f64, fg_std: f64, bg_mean: f64, bg_std: f64, source: impl Into<String>) -> Result<Self> {
        let values = [fg_mean, fg_std, bg_mean, bg_std];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("parameters must be finite".into()));
        }
        if !(0.0..=255.0).contains(&fg_mean) || !(0.0..=255.0).contains(&bg_mean) {
            return Err(Error::InvalidModel("means must lie in [0, 255]".into()));
        }
        if fg_std < 0.0 || bg_std < 0.0 {
            return Err(Error::InvalidModel("standard deviations must be non-negative".into()));
        }
        if fg_mean >= bg_mean {
            return Err(Error::InvalidModel(format!(
                "foreground mean {fg_mean} must be darker than background mean {bg_mean}"
            )));
        }
        Ok(PixelModel { fg_mean, fg_std, bg_mean, bg_std, source: source.into() })
    }

    pub fn fg_mean(&self) -> f64 {
        self.fg_mean
    }

    pub fn fg_std(&self) -> f64 {
        self.fg_std
    }

    pub fn bg_mean(&self) -> f64 {
        self.bg_mean
    }

    pub fn bg_std(&self) -> f64 {
        self.bg_std
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    #[inline]
    pub fn sample_fg(&self, stream: &mut RandomStream) -> u8 {
        quantize(stream.normal(self.fg_mean, self.fg_std))
    }

    #[inline]
    pub fn sample_bg(&self, stream: &mut RandomStream) -> u8 {
        quantize(stream.normal(self.bg_mean, self.bg_std))
    }

    /// The five-line `key=value` text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fg_mean={:.6}", self.fg_mean);
        let _ = writeln!(out, "fg_std={:.6}", self.fg_std);
        let _ = writeln!(out, "bg_mean={:.6}", self.bg_mean);
        let _ = writeln!(out, "bg_std={:.6}", self.bg_std);
        let _ = writeln!(out, "source={}", self.source);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values: [Option<f64>; 4] = [None; 4];
        let mut source = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::InvalidModel(format!("expected key=value, got {line:?}")))?;
            let slot = match key.trim() {
                "fg_mean" => 0,
                "fg_std" => 1,
                "bg_mean" => 2,
                "bg_std" => 3,
                "source" => {
                    source = Some(value.to_string());
                    continue;
                }
                other => return Err(Error::InvalidModel(format!("unknown key {other:?}"))),
            };
            let v: f64 =
                value.trim().parse().map_err(|_| Error::InvalidModel(format!("bad number for {key}: {value:?}")))?;
            values[slot] = Some(v);
        }
        let [Some(fg_mean), Some(fg_std), Some(bg_mean), Some(bg_std)] = values else {
            return Err(Error::InvalidModel("missing one of fg_mean, fg_std, bg_mean, bg_std".into()));
        };
        PixelModel::new(fg_mean, fg_std, bg_mean, bg_std, source.unwrap_or_else(|| "manual".into()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Exact running moments of a pixel population.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Moments {
    count: u128,
    sum: u128,
    sum_sq: u128,
}

impl Moments {
    fn push_bin(&mut self, value: usize, count: u64) {
        let (v, c) = (value as u128, count as u128);
        self.count += c;
        self.sum += v * c;
        self.sum_sq += v * v * c;
    }

    fn mean_std(&self) -> (f64, f64) {
        let n = self.count as f64;
        let mean = self.sum as f64 / n;
        // n^2 * variance, computed exactly before the final division.
        let scaled_var = self.count * self.sum_sq - self.sum * self.sum;
        (mean, (scaled_var as f64).sqrt() / n)
    }
}

impl Add for Moments {
    type Output = Moments;

    fn add(self, o: Moments) -> Moments {
        Moments { count: self.count + o.count, sum: self.sum + o.sum, sum_sq: self.sum_sq + o.sum_sq }
    }
}

/// Splits one image by Otsu into (foreground, background) moments.
fn image_moments(img: &GrayImage) -> Option<(Moments, Moments)> {
    let hist = img.histogram();
    let t = otsu_threshold(&hist).ok()? as usize;
    let (mut fg, mut bg) = (Moments::default(), Moments::default());
    for (v, &c) in hist.iter().enumerate().filter(|(_, &c)| c > 0) {
        if v <= t {
            fg.push_bin(v, c);
        } else {
            bg.push_bin(v, c);
        }
    }
    Some((fg, bg))
}

/// Estimates a [`PixelModel`] by splitting each reference image with Otsu's
/// threshold and pooling all foreground and all background pixels.
///
/// Images with a degenerate histogram are skipped with a warning. The result
/// does not depend on image order.
pub fn estimate_pixel_model(reference_images: &[GrayImage], source: &str) -> Result<PixelModel> {
    if reference_images.is_empty() {
        return Err(Error::EmptyReference);
    }
    let per_image: Vec<Option<(Moments, Moments)>> = reference_images.par_iter().map(image_moments).collect();
    let mut fg = Moments::default();
    let mut bg = Moments::default();
    let mut used = 0usize;
    for (i, m) in per_image.into_iter().enumerate() {
        match m {
            Some((f, b)) => {
                fg = fg + f;
                bg = bg + b;
                used += 1;
            }
            None => log::warn!("reference image {i} has a degenerate histogram; skipped"),
        }
    }
    if used == 0 {
        return Err(Error::AllDegenerate);
    }
    let (fg_mean, fg_std) = fg.mean_std();
    let (bg_mean, bg_std) = bg.mean_std();
    PixelModel::new(fg_mean, fg_std, bg_mean, bg_std, source)
}

/// Loads every `.png` in `dir` (sorted by name) as a reference image.
pub fn load_reference_dir(dir: &Path) -> Result<Vec<GrayImage>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("png")))
        .collect();
    paths.sort();
    paths.iter().map(|p| GrayImage::read_png(p)).collect()
}

/// Paints a mask: every ink pixel draws from the foreground Gaussian, every
/// paper pixel from the background one, in row-major order.
pub fn apply_pixel_model(mask: &BinaryMask, model: &PixelModel, stream: &mut RandomStream) -> GrayImage {
    let pixels =
        mask.bits().iter().map(|&ink| if ink { model.sample_fg(stream) } else { model.sample_bg(stream) }).collect();
    GrayImage::from_pixels(mask.width(), mask.height(), pixels).expect("mask dimensions")
}
