//! Separable Gaussian smoothing.

use super::image::{quantize, GrayImage};
use crate::error::{Error, Result};

/// Normalized 1-D Gaussian weights for offsets `-r..=r`, `r = ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let denom = 2.0 * sigma * sigma;
    let mut k: Vec<f64> = (-radius..=radius).map(|x| (-((x * x) as f64) / denom).exp()).collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Blurs with a Gaussian of standard deviation `sigma` pixels, replicating
/// edge pixels beyond the border. `sigma == 0` returns the input unchanged.
pub fn gaussian_smooth(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::NegativeSigma(sigma));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let kernel = gaussian_kernel(sigma);
    let r = (kernel.len() / 2) as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);
    if w == 0 || h == 0 {
        return Ok(img.clone());
    }
    let src = img.pixels();

    let mut horizontal = vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        let row = &src[(y * w) as usize..((y + 1) * w) as usize];
        let out = &mut horizontal[(y * w) as usize..((y + 1) * w) as usize];
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                let sx = (x + i as i64 - r).clamp(0, w - 1);
                acc += k * row[sx as usize] as f64;
            }
            out[x as usize] = acc;
        }
    }

    let mut out = vec![0u8; (w * h) as usize];
    let mut column = vec![0.0f64; h as usize];
    for x in 0..w {
        for y in 0..h {
            column[y as usize] = horizontal[(y * w + x) as usize];
        }
        for y in 0..h {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                let sy = (y + i as i64 - r).clamp(0, h - 1);
                acc += k * column[sy as usize];
            }
            out[(y * w + x) as usize] = quantize(acc);
        }
    }
    Ok(GrayImage::from_pixels(img.width(), img.height(), out).expect("same dimensions"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        for sigma in [0.3, 0.8, 1.0, 2.5] {
            let k = gaussian_kernel(sigma);
            assert_eq!(k.len() as i64, 2 * (3.0f64 * sigma).ceil() as i64 + 1);
            assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(k.iter().zip(k.iter().rev()).all(|(a, b)| a == b));
        }
    }

    #[test]
    fn zero_sigma_is_identity() {
        let img = GrayImage::from_pixels(3, 1, vec![1, 200, 3]).unwrap();
        assert_eq!(gaussian_smooth(&img, 0.0).unwrap(), img);
    }

    #[test]
    fn constant_image_is_unchanged() {
        let img = GrayImage::filled(9, 5, 77);
        for sigma in [0.5, 1.0, 3.0] {
            assert_eq!(gaussian_smooth(&img, sigma).unwrap(), img);
        }
    }

    #[test]
    fn negative_sigma_errors() {
        let img = GrayImage::filled(2, 2, 0);
        assert!(matches!(gaussian_smooth(&img, -0.1), Err(Error::NegativeSigma(_))));
        assert!(gaussian_smooth(&img, f64::NAN).is_err());
    }
}
