//! Boolean foreground rasters and stroke-width morphology.

use std::fmt;

/// Row-major boolean raster; `true` is ink.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl BinaryMask {
    /// An all-background mask. Panics if either dimension is zero.
    pub fn new(width: u32, height: u32) -> Self {
        assert!(width >= 1 && height >= 1, "mask dimensions must be positive");
        BinaryMask { width, height, bits: vec![false; (width * height) as usize] }
    }

    /// Returns `None` when the dimensions do not match the raster length.
    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Option<Self> {
        (width >= 1 && height >= 1 && bits.len() == (width as usize) * (height as usize)).then_some(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[(y * self.width + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.bits[(y * self.width + x) as usize] = value;
    }

    pub fn ink_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Tight bounding box of the ink as `(x0, y0, x1, y1)`, exclusive ends.
    pub fn ink_bounds(&self) -> Option<(u32, u32, u32, u32)> {
        let mut bounds: Option<(u32, u32, u32, u32)> = None;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    bounds = Some(match bounds {
                        None => (x, y, x + 1, y + 1),
                        Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x + 1), y1.max(y + 1)),
                    });
                }
            }
        }
        bounds
    }

    /// A copy with `margin` background pixels added on every side.
    pub fn expanded(&self, margin: u32) -> BinaryMask {
        if margin == 0 {
            return self.clone();
        }
        let mut out = BinaryMask::new(self.width + 2 * margin, self.height + 2 * margin);
        for y in 0..self.height {
            let src = &self.bits[(y * self.width) as usize..((y + 1) * self.width) as usize];
            let start = ((y + margin) * out.width + margin) as usize;
            out.bits[start..start + self.width as usize].copy_from_slice(src);
        }
        out
    }
}

impl fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMask {}x{}", self.width, self.height)?;
        for row in self.bits.chunks(self.width as usize) {
            let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Morph {
    Dilate,
    Erode,
}

/// Runs a 1-D min/max filter of the given radius along `len` elements spaced
/// by `stride`, restricted to the in-bounds part of each window.
fn filter_line(src: &[bool], dst: &mut [bool], start: usize, len: usize, stride: usize, radius: usize, op: Morph) {
    // prefix[i] = number of ink pixels among the first i elements.
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0u32);
    for i in 0..len {
        prefix.push(prefix[i] + src[start + i * stride] as u32);
    }
    for i in 0..len {
        let lo = i.saturating_sub(radius);
        let hi = (i + radius + 1).min(len);
        let ink = prefix[hi] - prefix[lo];
        dst[start + i * stride] = match op {
            Morph::Dilate => ink > 0,
            Morph::Erode => ink as usize == hi - lo,
        };
    }
}

fn morph(mask: &BinaryMask, radius: u32, op: Morph) -> BinaryMask {
    let (w, h, r) = (mask.width as usize, mask.height as usize, radius as usize);
    let mut rows = vec![false; w * h];
    for y in 0..h {
        filter_line(&mask.bits, &mut rows, y * w, w, 1, r, op);
    }
    let mut out = vec![false; w * h];
    for x in 0..w {
        filter_line(&rows, &mut out, x, h, w, r, op);
    }
    BinaryMask { width: mask.width, height: mask.height, bits: out }
}

/// Dilation by a (2r+1)x(2r+1) square; pixels outside the mask are ignored.
pub fn dilate(mask: &BinaryMask, radius: u32) -> BinaryMask {
    morph(mask, radius, Morph::Dilate)
}

/// Erosion by a (2r+1)x(2r+1) square; pixels outside the mask are ignored,
/// so ink touching the border is not eaten from outside.
pub fn erode(mask: &BinaryMask, radius: u32) -> BinaryMask {
    morph(mask, radius, Morph::Erode)
}

/// Grows (`stroke_delta > 0`) or thins (`stroke_delta < 0`) the strokes of a
/// mask by square-element morphology. Dimensions are unchanged.
pub fn adjust_stroke(mask: &BinaryMask, stroke_delta: i32) -> BinaryMask {
    match stroke_delta {
        0 => mask.clone(),
        d if d > 0 => dilate(mask, d as u32),
        d => erode(mask, d.unsigned_abs()),
    }
}
