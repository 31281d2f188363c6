//! Affine augmentation: rotation, horizontal shear and four-sided padding.
//!
//! Image coordinates put pixel `(x, y)` at the continuous point
//! `(x + 0.5, y + 0.5)`, with y growing downwards. A positive rotation turns
//! the content counter-clockwise as displayed.

use serde::{Deserialize, Serialize};

use crate::appearance::image::quantize;
use crate::appearance::{GrayImage, PixelModel};
use crate::error::{Error, Result};
use crate::stream::RandomStream;

/// Tolerance for treating a mapped coordinate as on the source border.
const EDGE_EPS: f64 = 1e-9;

/// How the sampled shear value is turned into the shear factor `s` of
/// `(x, y) -> (x + s*y, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShearUnit {
    /// The value is a shear angle in degrees: `s = tan(value)`.
    #[default]
    Degrees,
    /// The value is the factor itself.
    Factor,
}

impl ShearUnit {
    pub fn factor(self, shear: f64) -> f64 {
        match self {
            ShearUnit::Degrees => shear.to_radians().tan(),
            ShearUnit::Factor => shear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentConfig {
    pub rot_min: f64,
    pub rot_max: f64,
    pub shear_min: f64,
    pub shear_max: f64,
    pub shear_unit: ShearUnit,
    pub pad_max: u32,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            rot_min: -5.0,
            rot_max: 5.0,
            shear_min: -0.5,
            shear_max: 0.5,
            shear_unit: ShearUnit::Degrees,
            pad_max: 8,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        check_range("rotation", self.rot_min, self.rot_max)?;
        check_range("shear", self.shear_min, self.shear_max)
    }
}

pub(crate) fn check_range(name: &'static str, min: f64, max: f64) -> Result<()> {
    if !(min.is_finite() && max.is_finite() && min <= max) {
        return Err(Error::InvalidRange { name, min, max });
    }
    Ok(())
}

/// Extra pixels on each side of an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Padding {
    pub left: u32,
    pub right: u32,
    pub top: u32,
    pub bottom: u32,
}

impl Padding {
    pub fn new(left: i64, right: i64, top: i64, bottom: i64) -> Result<Self> {
        let conv = |v: i64| u32::try_from(v).map_err(|_| Error::NegativePad);
        Ok(Padding { left: conv(left)?, right: conv(right)?, top: conv(top)?, bottom: conv(bottom)? })
    }

    pub fn is_zero(&self) -> bool {
        *self == Padding::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentParams {
    pub rotation_deg: f64,
    pub shear: f64,
    pub pad: Padding,
}

/// Draws rotation, shear and the four pads independently and uniformly from
/// their configured ranges, in that order.
pub fn sample_augment(config: &AugmentConfig, stream: &mut RandomStream) -> Result<AugmentParams> {
    config.validate()?;
    let rotation_deg = stream.uniform_f64(config.rot_min, config.rot_max);
    let shear = stream.uniform_f64(config.shear_min, config.shear_max);
    let max = config.pad_max as i64;
    let mut draw = || stream.uniform_i64(0, max) as u32;
    let pad = Padding { left: draw(), right: draw(), top: draw(), bottom: draw() };
    Ok(AugmentParams { rotation_deg, shear, pad })
}

/// Forward linear part of the transform: rotation after horizontal shear.
fn forward_matrix(rotation_deg: f64, shear_factor: f64) -> [[f64; 2]; 2] {
    let (sin, cos) = rotation_deg.to_radians().sin_cos();
    [[cos, cos * shear_factor + sin], [-sin, cos - sin * shear_factor]]
}

/// Size of the canvas enclosing a `width` x `height` image after the
/// transform: the integer extent of its four mapped corners.
pub fn transformed_canvas(width: u32, height: u32, rotation_deg: f64, shear_factor: f64) -> (u32, u32) {
    let m = forward_matrix(rotation_deg, shear_factor);
    let (hw, hh) = (width as f64 / 2.0, height as f64 / 2.0);
    let corners = [(-hw, -hh), (hw, -hh), (-hw, hh), (hw, hh)];
    let xs = corners.map(|(x, y)| m[0][0] * x + m[0][1] * y);
    let ys = corners.map(|(x, y)| m[1][0] * x + m[1][1] * y);
    let span = |v: [f64; 4]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ((hi - lo - 1e-6).ceil().max(1.0)) as u32
    };
    (span(xs), span(ys))
}

/// [`apply_affine_with`] with a constant fill intensity.
pub fn apply_affine(img: &GrayImage, rotation_deg: f64, shear: f64, unit: ShearUnit, fill: u8) -> GrayImage {
    apply_affine_with(img, rotation_deg, shear, unit, || fill)
}

/// Shears then rotates `img` about its center onto a canvas that encloses the
/// transformed corners, sampling bilinearly through the inverse map.
/// Output pixels whose preimage falls outside the source take `fill()`,
/// called in row-major order.
pub fn apply_affine_with(
    img: &GrayImage,
    rotation_deg: f64,
    shear: f64,
    unit: ShearUnit,
    mut fill: impl FnMut() -> u8,
) -> GrayImage {
    if rotation_deg == 0.0 && shear == 0.0 {
        return img.clone();
    }
    let s = unit.factor(shear);
    let (out_w, out_h) = transformed_canvas(img.width(), img.height(), rotation_deg, s);
    let (sin, cos) = rotation_deg.to_radians().sin_cos();
    // Inverse: unshear(unrotate(q)).
    let inv = [[cos - s * sin, -sin - s * cos], [sin, cos]];

    let (w, h) = (img.width() as f64, img.height() as f64);
    let (cx, cy) = (w / 2.0, h / 2.0);
    let (ocx, ocy) = (out_w as f64 / 2.0, out_h as f64 / 2.0);
    let (max_x, max_y) = (img.width() as i64 - 1, img.height() as i64 - 1);
    let src = img.pixels();
    let stride = img.width() as usize;

    let mut out = Vec::with_capacity(out_w as usize * out_h as usize);
    for oy in 0..out_h {
        let qy = oy as f64 + 0.5 - ocy;
        for ox in 0..out_w {
            let qx = ox as f64 + 0.5 - ocx;
            let px = inv[0][0] * qx + inv[0][1] * qy + cx;
            let py = inv[1][0] * qx + inv[1][1] * qy + cy;
            if !(-EDGE_EPS..=w + EDGE_EPS).contains(&px) || !(-EDGE_EPS..=h + EDGE_EPS).contains(&py) {
                out.push(fill());
                continue;
            }
            let (fx, fy) = (px - 0.5, py - 0.5);
            let (x0, y0) = (fx.floor(), fy.floor());
            let (tx, ty) = (fx - x0, fy - y0);
            let (x0, y0) = (x0 as i64, y0 as i64);
            let xa = x0.clamp(0, max_x) as usize;
            let xb = (x0 + 1).clamp(0, max_x) as usize;
            let ya = y0.clamp(0, max_y) as usize;
            let yb = (y0 + 1).clamp(0, max_y) as usize;
            let p = |x: usize, y: usize| src[y * stride + x] as f64;
            let top = p(xa, ya) * (1.0 - tx) + p(xb, ya) * tx;
            let bottom = p(xa, yb) * (1.0 - tx) + p(xb, yb) * tx;
            out.push(quantize(top * (1.0 - ty) + bottom * ty));
        }
    }
    GrayImage::from_pixels(out_w, out_h, out).expect("canvas dimensions")
}

/// Adds `padding` around `img`; new pixels are drawn from the model's
/// background Gaussian in row-major order of the output.
pub fn pad(img: &GrayImage, padding: &Padding, model: &PixelModel, stream: &mut RandomStream) -> GrayImage {
    if padding.is_zero() {
        return img.clone();
    }
    let out_w = img.width() + padding.left + padding.right;
    let out_h = img.height() + padding.top + padding.bottom;
    let x_range = padding.left..padding.left + img.width();
    let y_range = padding.top..padding.top + img.height();
    let mut out = Vec::with_capacity(out_w as usize * out_h as usize);
    for y in 0..out_h {
        for x in 0..out_w {
            if x_range.contains(&x) && y_range.contains(&y) {
                out.push(img.get(x - padding.left, y - padding.top));
            } else {
                out.push(model.sample_bg(stream));
            }
        }
    }
    GrayImage::from_pixels(out_w, out_h, out).expect("padded dimensions")
}

/// Bilinear rescale to `height` rows, keeping the aspect ratio.
pub fn resize_to_height(img: &GrayImage, height: u32) -> GrayImage {
    if height == 0 || height == img.height() {
        return img.clone();
    }
    let scale = height as f64 / img.height() as f64;
    let width = ((img.width() as f64 * scale).round() as u32).max(1);
    let (sx, sy) = (img.width() as f64 / width as f64, img.height() as f64 / height as f64);
    let (max_x, max_y) = (img.width() as i64 - 1, img.height() as i64 - 1);
    let mut out = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height {
        let fy = (y as f64 + 0.5) * sy - 0.5;
        let y0 = fy.floor();
        let ty = fy - y0;
        let ya = (y0 as i64).clamp(0, max_y) as u32;
        let yb = (y0 as i64 + 1).clamp(0, max_y) as u32;
        for x in 0..width {
            let fx = (x as f64 + 0.5) * sx - 0.5;
            let x0 = fx.floor();
            let tx = fx - x0;
            let xa = (x0 as i64).clamp(0, max_x) as u32;
            let xb = (x0 as i64 + 1).clamp(0, max_x) as u32;
            let p = |x, y| img.get(x, y) as f64;
            let top = p(xa, ya) * (1.0 - tx) + p(xb, ya) * tx;
            let bottom = p(xa, yb) * (1.0 - tx) + p(xb, yb) * tx;
            out.push(quantize(top * (1.0 - ty) + bottom * ty));
        }
    }
    GrayImage::from_pixels(width, height, out).expect("resized dimensions")
}
