//! Word layout with a uniform inter-character gap, rasterization to a binary
//! foreground mask, and stroke-width variation.
//!
//! Coordinates are in pixels with y growing downwards; the baseline is y = 0
//! and the pen starts at x = 0.

pub mod gridfont;
pub mod mask;

use ab_glyph_rasterizer::{point, Point, Rasterizer};

use crate::error::{Error, Result};
use crate::font_catalog::{FontEntry, FontFace};

pub use mask::{adjust_stroke, dilate, erode, BinaryMask};

/// Coverage at or above this fraction counts as ink.
pub const COVERAGE_THRESHOLD: f32 = 0.5;

/// The per-sample rendering parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub font_id: u32,
    /// Nominal em size in pixels.
    pub font_size_px: u32,
    /// Extra gap between consecutive glyphs; may be negative.
    pub kerning_px: i32,
    /// Morphological grow (> 0) or shrink (< 0) radius.
    pub stroke_delta: i32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlyphPlacement {
    pub code_point: char,
    /// Pen position of the glyph origin.
    pub origin_x: f64,
    /// Baseline.
    pub origin_y: f64,
}

/// Real-valued ink rectangle, `x_max`/`y_max` exclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InkBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl InkBox {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    fn include(&mut self, x: f64, y: f64) {
        self.x_min = self.x_min.min(x);
        self.y_min = self.y_min.min(y);
        self.x_max = self.x_max.max(x);
        self.y_max = self.y_max.max(y);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub placements: Vec<GlyphPlacement>,
    /// `None` when no glyph has an outline (e.g. only spaces).
    pub ink_box: Option<InkBox>,
}

#[derive(Debug, Clone, Copy)]
enum Segment {
    Line(Point, Point),
    Quad(Point, Point, Point),
    Cubic(Point, Point, Point, Point),
}

impl Segment {
    fn points(&self) -> impl Iterator<Item = Point> {
        let (arr, n) = match *self {
            Segment::Line(a, b) => ([a, b, b, b], 2),
            Segment::Quad(a, b, c) => ([a, b, c, c], 3),
            Segment::Cubic(a, b, c, d) => ([a, b, c, d], 4),
        };
        arr.into_iter().take(n)
    }

    fn translate(self, dx: f32, dy: f32) -> Segment {
        let t = |p: Point| point(p.x + dx, p.y + dy);
        match self {
            Segment::Line(a, b) => Segment::Line(t(a), t(b)),
            Segment::Quad(a, b, c) => Segment::Quad(t(a), t(b), t(c)),
            Segment::Cubic(a, b, c, d) => Segment::Cubic(t(a), t(b), t(c), t(d)),
        }
    }
}

/// Collects a TrueType outline as pixel-space segments.
struct SegmentSink<'a> {
    scale: f32,
    origin: (f32, f32),
    start: Point,
    last: Point,
    out: &'a mut Vec<Segment>,
}

impl SegmentSink<'_> {
    fn map(&self, x: f32, y: f32) -> Point {
        point(self.origin.0 + x * self.scale, self.origin.1 - y * self.scale)
    }
}

impl ttf_parser::OutlineBuilder for SegmentSink<'_> {
    fn move_to(&mut self, x: f32, y: f32) {
        self.start = self.map(x, y);
        self.last = self.start;
    }

    fn line_to(&mut self, x: f32, y: f32) {
        let p = self.map(x, y);
        self.out.push(Segment::Line(self.last, p));
        self.last = p;
    }

    fn quad_to(&mut self, x1: f32, y1: f32, x: f32, y: f32) {
        let (c, p) = (self.map(x1, y1), self.map(x, y));
        self.out.push(Segment::Quad(self.last, c, p));
        self.last = p;
    }

    fn curve_to(&mut self, x1: f32, y1: f32, x2: f32, y2: f32, x: f32, y: f32) {
        let (c1, c2, p) = (self.map(x1, y1), self.map(x2, y2), self.map(x, y));
        self.out.push(Segment::Cubic(self.last, c1, c2, p));
        self.last = p;
    }

    fn close(&mut self) {
        if self.last != self.start {
            self.out.push(Segment::Line(self.last, self.start));
        }
        self.last = self.start;
    }
}

/// A font face parsed for one layout or rasterization call.
enum ParsedFace<'a> {
    Outline { face: Box<ttf_parser::Face<'a>>, scale: f32 },
    Grid { grid: &'a gridfont::GridFont, cell: f32 },
}

impl<'a> ParsedFace<'a> {
    fn new(font: &'a FontEntry, font_size_px: u32) -> Result<Self> {
        match &font.face {
            FontFace::Outline { data, index } => {
                let face = ttf_parser::Face::parse(data, *index)
                    .map_err(|e| Error::FontParse { path: font.source_path.clone(), message: e.to_string() })?;
                let scale = font_size_px as f32 / face.units_per_em() as f32;
                Ok(ParsedFace::Outline { face: Box::new(face), scale })
            }
            FontFace::Grid(grid) => Ok(ParsedFace::Grid { grid, cell: font_size_px as f32 / grid.height() as f32 }),
        }
    }

    fn advance(&self, ch: char) -> Option<f64> {
        match self {
            ParsedFace::Outline { face, scale } => {
                let gid = face.glyph_index(ch)?;
                Some(face.glyph_hor_advance(gid).unwrap_or(0) as f64 * *scale as f64)
            }
            ParsedFace::Grid { grid, cell } => {
                grid.glyph(ch)?;
                Some(grid.advance() as f64 * *cell as f64)
            }
        }
    }

    fn outline(&self, ch: char, origin_x: f64, origin_y: f64, out: &mut Vec<Segment>) {
        let origin = (origin_x as f32, origin_y as f32);
        match self {
            ParsedFace::Outline { face, scale } => {
                if let Some(gid) = face.glyph_index(ch) {
                    let mut sink =
                        SegmentSink { scale: *scale, origin, start: point(0.0, 0.0), last: point(0.0, 0.0), out };
                    face.outline_glyph(gid, &mut sink);
                }
            }
            ParsedFace::Grid { grid, cell } => {
                let height = grid.height() as f32;
                for (row, x0, x1) in grid.runs(ch) {
                    let left = origin.0 + x0 as f32 * cell;
                    let right = origin.0 + x1 as f32 * cell;
                    let top = origin.1 - (height - row as f32) * cell;
                    let bottom = top + cell;
                    let corners = [point(left, top), point(right, top), point(right, bottom), point(left, bottom)];
                    for i in 0..4 {
                        out.push(Segment::Line(corners[i], corners[(i + 1) % 4]));
                    }
                }
            }
        }
    }
}

/// Places the glyphs of `word` on one baseline. Each pen step is the glyph's
/// advance plus `spec.kerning_px`, floored at zero so origins never move
/// backwards.
pub fn layout(word: &str, font: &FontEntry, spec: &RenderSpec) -> Result<Layout> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let face = ParsedFace::new(font, spec.font_size_px)?;
    let mut placements = Vec::with_capacity(word.chars().count());
    let mut ink_box: Option<InkBox> = None;
    let mut segments = Vec::new();
    let mut pen = 0.0f64;
    for ch in word.chars() {
        let advance = face.advance(ch).ok_or(Error::MissingGlyph(ch))?;
        placements.push(GlyphPlacement { code_point: ch, origin_x: pen, origin_y: 0.0 });
        segments.clear();
        face.outline(ch, pen, 0.0, &mut segments);
        for p in segments.iter().flat_map(Segment::points) {
            let (x, y) = (p.x as f64, p.y as f64);
            match ink_box.as_mut() {
                Some(b) => b.include(x, y),
                None => ink_box = Some(InkBox { x_min: x, y_min: y, x_max: x, y_max: y }),
            }
        }
        pen += (advance + spec.kerning_px as f64).max(0.0);
    }
    Ok(Layout { placements, ink_box })
}

/// Rasterizes placed glyphs into a binary mask: anti-aliased coverage is
/// thresholded at [`COVERAGE_THRESHOLD`] and the result is cropped to the ink
/// plus a one-pixel margin.
pub fn rasterize(placements: &[GlyphPlacement], font: &FontEntry, font_size_px: u32) -> Result<BinaryMask> {
    if placements.is_empty() {
        return Err(Error::EmptyWord);
    }
    let face = ParsedFace::new(font, font_size_px)?;
    let mut segments = Vec::new();
    for g in placements {
        if face.advance(g.code_point).is_none() {
            return Err(Error::MissingGlyph(g.code_point));
        }
        face.outline(g.code_point, g.origin_x, g.origin_y, &mut segments);
    }
    let mut pts = segments.iter().flat_map(Segment::points);
    let Some(first) = pts.next() else {
        return Err(Error::ZeroInk);
    };
    let (mut x_min, mut y_min, mut x_max, mut y_max) = (first.x, first.y, first.x, first.y);
    for p in pts {
        x_min = x_min.min(p.x);
        y_min = y_min.min(p.y);
        x_max = x_max.max(p.x);
        y_max = y_max.max(p.y);
    }
    // One spare pixel on the far sides keeps every point strictly inside.
    let left = x_min.floor();
    let top = y_min.floor();
    let width = (x_max.ceil() - left) as usize + 2;
    let height = (y_max.ceil() - top) as usize + 2;

    let mut raster = Rasterizer::new(width, height);
    for seg in &segments {
        match seg.translate(-left, -top) {
            Segment::Line(a, b) => raster.draw_line(a, b),
            Segment::Quad(a, b, c) => raster.draw_quad(a, b, c),
            Segment::Cubic(a, b, c, d) => raster.draw_cubic(a, b, c, d),
        }
    }
    let mut ink = vec![false; width * height];
    raster.for_each_pixel(|idx, coverage| ink[idx] = coverage >= COVERAGE_THRESHOLD);

    let full = BinaryMask::from_bits(width as u32, height as u32, ink).expect("raster dimensions");
    let (x0, y0, x1, y1) = full.ink_bounds().ok_or(Error::ZeroInk)?;
    // Crop to the ink with a one-pixel margin.
    let mut out = BinaryMask::new(x1 - x0 + 2, y1 - y0 + 2);
    for y in y0..y1 {
        for x in x0..x1 {
            if full.get(x, y) {
                out.set(x - x0 + 1, y - y0 + 1, true);
            }
        }
    }
    Ok(out)
}

/// Lays out and rasterizes `word` in one step.
pub fn render_word(word: &str, font: &FontEntry, spec: &RenderSpec) -> Result<BinaryMask> {
    let layout = layout(word, font, spec)?;
    rasterize(&layout.placements, font, spec.font_size_px)
}
