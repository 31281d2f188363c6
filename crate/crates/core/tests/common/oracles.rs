//! Direct, unoptimized reference computations.

use num_bigint::BigInt;
use num_rational::BigRational;

use hwforge_core::{BinaryMask, GrayImage};

/// Dilation or erosion by checking every in-bounds pixel of the
/// (2r+1)x(2r+1) square around each output pixel.
pub fn brute_morph(mask: &BinaryMask, delta: i32) -> BinaryMask {
    let r = delta.unsigned_abs() as i64;
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut out = BinaryMask::new(mask.width(), mask.height());
    for y in 0..h {
        for x in 0..w {
            let mut any = false;
            let mut all = true;
            for dy in -r..=r {
                for dx in -r..=r {
                    let (sx, sy) = (x + dx, y + dy);
                    if sx < 0 || sy < 0 || sx >= w || sy >= h {
                        continue;
                    }
                    let v = mask.get(sx as u32, sy as u32);
                    any |= v;
                    all &= v;
                }
            }
            let v = match delta {
                0 => mask.get(x as u32, y as u32),
                d if d > 0 => any,
                _ => all,
            };
            out.set(x as u32, y as u32, v);
        }
    }
    out
}

/// Full 2-D Gaussian convolution over a square of radius ceil(3 sigma) with
/// replicated edges, rounded to the nearest intensity.
pub fn dense_gaussian(img: &GrayImage, sigma: f64) -> GrayImage {
    let r = (3.0 * sigma).ceil() as i64;
    let mut weights = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            weights.push((dx, dy, (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp()));
        }
    }
    let norm: f64 = weights.iter().map(|w| w.2).sum();
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = GrayImage::new(img.width(), img.height());
    for y in 0..h {
        for x in 0..w {
            let acc: f64 = weights
                .iter()
                .map(|&(dx, dy, k)| {
                    k * img.get((x + dx).clamp(0, w - 1) as u32, (y + dy).clamp(0, h - 1) as u32) as f64
                })
                .sum();
            out.set(x as u32, y as u32, (acc / norm).round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}

/// Otsu by exhaustive search of the between-class variance
/// w0 * w1 * (mu0 - mu1)^2 in exact rationals; the smallest maximizing `t`
/// wins. `None` when no split has two non-empty classes.
pub fn exhaustive_otsu(hist: &[u64; 256]) -> Option<u8> {
    let total: u64 = hist.iter().sum();
    let mut best: Option<(u8, BigRational)> = None;
    for t in 0..255usize {
        let n0: u64 = hist[..=t].iter().sum();
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let s0: u128 = hist[..=t].iter().enumerate().map(|(i, &c)| i as u128 * c as u128).sum();
        let s1: u128 = hist[t + 1..].iter().enumerate().map(|(i, &c)| (i + t + 1) as u128 * c as u128).sum();
        let big = |v: u128| BigRational::from_integer(BigInt::from(v));
        let w0 = big(n0 as u128) / big(total as u128);
        let w1 = big(n1 as u128) / big(total as u128);
        let mu0 = big(s0) / big(n0 as u128);
        let mu1 = big(s1) / big(n1 as u128);
        let d = mu0 - mu1;
        let var = w0 * w1 * &d * &d;
        if best.as_ref().is_none_or(|(_, b)| var > *b) {
            best = Some((t as u8, var));
        }
    }
    best.map(|(t, _)| t)
}

/// Rotation by +90 degrees (counter-clockwise as displayed) as a pure
/// permutation of pixel coordinates.
pub fn rotate90_ccw(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let mut out = GrayImage::new(h, w);
    for y in 0..w {
        for x in 0..h {
            out.set(x, y, img.get(w - 1 - y, x));
        }
    }
    out
}

/// Rotation by -90 degrees.
pub fn rotate90_cw(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let mut out = GrayImage::new(h, w);
    for y in 0..w {
        for x in 0..h {
            out.set(x, y, img.get(y, h - 1 - x));
        }
    }
    out
}
