//! Plain-text bitmap fonts for tests and fixtures.
//!
//! A `.gridfont` file starts with `advance=<int> height=<int>`, followed by one
//! block per glyph: a `glyph=<char>` line and then `height` rows of `#` (ink)
//! and `.` (paper), each exactly `advance` characters wide. Blank lines
//! between blocks are ignored. Every glyph occupies one `advance` x `height`
//! cell grid sitting on the baseline, and the font's em is `height` cells.
//!
//! [`GridFont::to_truetype`] compiles a grid font into a minimal TrueType
//! file with one rectangle contour per horizontal ink run, which lets the
//! real font loader be exercised without shipping binary fonts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::font_catalog::GlyphSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridFont {
    advance: u32,
    height: u32,
    glyphs: BTreeMap<char, Vec<bool>>,
}

impl GridFont {
    pub fn new(advance: u32, height: u32) -> Result<Self> {
        if advance == 0 || height == 0 {
            return Err(Error::GridFont("advance and height must be positive".into()));
        }
        Ok(GridFont { advance, height, glyphs: BTreeMap::new() })
    }

    /// Adds or replaces a glyph; `cells` is row-major, top row first.
    pub fn insert(&mut self, ch: char, cells: Vec<bool>) -> Result<()> {
        if cells.len() != (self.advance * self.height) as usize {
            return Err(Error::GridFont(format!("glyph {ch:?} has {} cells", cells.len())));
        }
        self.glyphs.insert(ch, cells);
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
        let header = lines.next().ok_or_else(|| Error::GridFont("missing header".into()))?;
        let mut advance = None;
        let mut height = None;
        for field in header.split_whitespace() {
            let (key, value) =
                field.split_once('=').ok_or_else(|| Error::GridFont(format!("bad header field {field:?}")))?;
            let value: u32 = value.parse().map_err(|_| Error::GridFont(format!("bad header value {field:?}")))?;
            match key {
                "advance" => advance = Some(value),
                "height" => height = Some(value),
                _ => return Err(Error::GridFont(format!("unknown header key {key:?}"))),
            }
        }
        let (Some(advance), Some(height)) = (advance, height) else {
            return Err(Error::GridFont("header needs advance= and height=".into()));
        };
        let mut font = GridFont::new(advance, height)?;

        while let Some(line) = lines.next() {
            if line.trim().is_empty() && !line.starts_with("glyph=") {
                continue;
            }
            let rest = line
                .strip_prefix("glyph=")
                .ok_or_else(|| Error::GridFont(format!("expected glyph= line, got {line:?}")))?;
            let mut chars = rest.chars();
            let (Some(ch), None) = (chars.next(), chars.next()) else {
                return Err(Error::GridFont(format!("glyph line must name one character: {line:?}")));
            };
            let mut cells = Vec::with_capacity((advance * height) as usize);
            for _ in 0..height {
                let row = lines.next().ok_or_else(|| Error::GridFont(format!("glyph {ch:?} is truncated")))?;
                if row.chars().count() != advance as usize {
                    return Err(Error::GridFont(format!("glyph {ch:?}: row {row:?} is not {advance} wide")));
                }
                for c in row.chars() {
                    match c {
                        '#' => cells.push(true),
                        '.' => cells.push(false),
                        _ => return Err(Error::GridFont(format!("glyph {ch:?}: unexpected {c:?}"))),
                    }
                }
            }
            font.insert(ch, cells)?;
        }
        Ok(font)
    }

    /// Serializes back to the `.gridfont` text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("advance={} height={}\n", self.advance, self.height);
        for (ch, cells) in &self.glyphs {
            let _ = writeln!(out, "glyph={ch}");
            for row in cells.chunks(self.advance as usize) {
                out.extend(row.iter().map(|&b| if b { '#' } else { '.' }));
                out.push('\n');
            }
        }
        out
    }

    pub fn advance(&self) -> u32 {
        self.advance
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn glyph(&self, ch: char) -> Option<&[bool]> {
        self.glyphs.get(&ch).map(Vec::as_slice)
    }

    pub fn glyph_set(&self) -> GlyphSet {
        GlyphSet::from_code_points(self.glyphs.keys().map(|&c| c as u32))
    }

    /// Horizontal ink runs of a glyph as `(row, x_start, x_end)` with
    /// `x_end` exclusive, rows counted from the top.
    pub fn runs(&self, ch: char) -> Vec<(u32, u32, u32)> {
        let Some(cells) = self.glyph(ch) else { return Vec::new() };
        let mut runs = Vec::new();
        for (row, line) in cells.chunks(self.advance as usize).enumerate() {
            let mut x = 0;
            while x < line.len() {
                if line[x] {
                    let start = x;
                    while x < line.len() && line[x] {
                        x += 1;
                    }
                    runs.push((row as u32, start as u32, x as u32));
                } else {
                    x += 1;
                }
            }
        }
        runs
    }

    /// Compiles this font into a TrueType file whose family name is `family`.
    pub fn to_truetype(&self, family: &str) -> Vec<u8> {
        truetype::build(self, family)
    }
}

mod truetype {
    use super::GridFont;

    /// Font units per grid cell.
    const CELL: u32 = 64;

    fn put16(out: &mut Vec<u8>, v: u16) {
        out.extend_from_slice(&v.to_be_bytes());
    }

    fn put32(out: &mut Vec<u8>, v: u32) {
        out.extend_from_slice(&v.to_be_bytes());
    }

    fn checksum(table: &[u8]) -> u32 {
        table.chunks(4).fold(0u32, |acc, chunk| {
            let mut word = [0u8; 4];
            word[..chunk.len()].copy_from_slice(chunk);
            acc.wrapping_add(u32::from_be_bytes(word))
        })
    }

    struct Bounds {
        x_min: i16,
        y_min: i16,
        x_max: i16,
        y_max: i16,
    }

    pub(super) fn build(font: &GridFont, family: &str) -> Vec<u8> {
        let upem = font.height * CELL;
        let advance = (font.advance * CELL) as u16;
        let chars: Vec<char> = font.glyphs.keys().copied().collect();
        let num_glyphs = chars.len() as u16 + 1;

        // glyf + loca; glyph 0 is an empty .notdef.
        let mut glyf = Vec::new();
        let mut loca = vec![0u32, 0];
        let mut lsbs = vec![0i16];
        let mut total: Option<Bounds> = None;
        for &ch in &chars {
            let runs = font.runs(ch);
            if !runs.is_empty() {
                let rects: Vec<[i16; 4]> = runs
                    .iter()
                    .map(|&(row, x0, x1)| {
                        let top = (font.height - row) * CELL;
                        [(x0 * CELL) as i16, (top - CELL) as i16, (x1 * CELL) as i16, top as i16]
                    })
                    .collect();
                let b = Bounds {
                    x_min: rects.iter().map(|r| r[0]).min().unwrap(),
                    y_min: rects.iter().map(|r| r[1]).min().unwrap(),
                    x_max: rects.iter().map(|r| r[2]).max().unwrap(),
                    y_max: rects.iter().map(|r| r[3]).max().unwrap(),
                };
                put16(&mut glyf, rects.len() as u16);
                for v in [b.x_min, b.y_min, b.x_max, b.y_max] {
                    put16(&mut glyf, v as u16);
                }
                for i in 0..rects.len() {
                    put16(&mut glyf, (i * 4 + 3) as u16);
                }
                put16(&mut glyf, 0); // no instructions
                glyf.extend(std::iter::repeat_n(0x01u8, rects.len() * 4));
                // Clockwise contours in y-up space, coordinates as deltas.
                let points: Vec<(i16, i16)> =
                    rects.iter().flat_map(|&[x0, y0, x1, y1]| [(x0, y0), (x0, y1), (x1, y1), (x1, y0)]).collect();
                let mut prev = 0i16;
                for &(x, _) in &points {
                    put16(&mut glyf, (x - prev) as u16);
                    prev = x;
                }
                prev = 0;
                for &(_, y) in &points {
                    put16(&mut glyf, (y - prev) as u16);
                    prev = y;
                }
                while glyf.len() % 4 != 0 {
                    glyf.push(0);
                }
                lsbs.push(b.x_min);
                total = Some(match total {
                    None => b,
                    Some(t) => Bounds {
                        x_min: t.x_min.min(b.x_min),
                        y_min: t.y_min.min(b.y_min),
                        x_max: t.x_max.max(b.x_max),
                        y_max: t.y_max.max(b.y_max),
                    },
                });
            } else {
                lsbs.push(0);
            }
            loca.push(glyf.len() as u32);
        }
        let total = total.unwrap_or(Bounds { x_min: 0, y_min: 0, x_max: 0, y_max: 0 });

        let mut loca_table = Vec::new();
        for off in &loca {
            put32(&mut loca_table, *off);
        }

        let mut head = Vec::new();
        put32(&mut head, 0x0001_0000);
        put32(&mut head, 0x0001_0000);
        put32(&mut head, 0); // checksum adjustment, patched below
        put32(&mut head, 0x5F0F_3CF5);
        put16(&mut head, 0x000B);
        put16(&mut head, upem as u16);
        head.extend_from_slice(&[0u8; 16]); // created, modified
        for v in [total.x_min, total.y_min, total.x_max, total.y_max] {
            put16(&mut head, v as u16);
        }
        put16(&mut head, 0); // macStyle
        put16(&mut head, 8); // lowestRecPPEM
        put16(&mut head, 2); // fontDirectionHint
        put16(&mut head, 1); // long loca
        put16(&mut head, 0);

        let mut hhea = Vec::new();
        put32(&mut hhea, 0x0001_0000);
        put16(&mut hhea, upem as u16); // ascender
        put16(&mut hhea, 0); // descender
        put16(&mut hhea, 0); // lineGap
        put16(&mut hhea, advance);
        put16(&mut hhea, total.x_min as u16);
        put16(&mut hhea, (advance as i16 - total.x_max) as u16);
        put16(&mut hhea, total.x_max as u16);
        put16(&mut hhea, 1);
        put16(&mut hhea, 0);
        put16(&mut hhea, 0);
        hhea.extend_from_slice(&[0u8; 8]);
        put16(&mut hhea, 0);
        put16(&mut hhea, num_glyphs);

        let mut hmtx = Vec::new();
        for (i, lsb) in lsbs.iter().enumerate() {
            put16(&mut hmtx, if i == 0 { 0 } else { advance });
            put16(&mut hmtx, *lsb as u16);
        }

        let mut maxp = Vec::new();
        put32(&mut maxp, 0x0000_5000);
        put16(&mut maxp, num_glyphs);

        // cmap: one format 12 subtable, platform 3 encoding 10.
        let mut cmap = Vec::new();
        put16(&mut cmap, 0);
        put16(&mut cmap, 1);
        put16(&mut cmap, 3);
        put16(&mut cmap, 10);
        put32(&mut cmap, 12);
        put16(&mut cmap, 12);
        put16(&mut cmap, 0);
        put32(&mut cmap, 16 + 12 * chars.len() as u32);
        put32(&mut cmap, 0);
        put32(&mut cmap, chars.len() as u32);
        for (i, &ch) in chars.iter().enumerate() {
            put32(&mut cmap, ch as u32);
            put32(&mut cmap, ch as u32);
            put32(&mut cmap, i as u32 + 1);
        }

        let utf16: Vec<u8> = family.encode_utf16().flat_map(|u| u.to_be_bytes()).collect();
        let mut name = Vec::new();
        put16(&mut name, 0);
        put16(&mut name, 1);
        put16(&mut name, 6 + 12);
        for v in [3u16, 1, 0x0409, 1, utf16.len() as u16, 0] {
            put16(&mut name, v);
        }
        name.extend_from_slice(&utf16);

        let mut post = Vec::new();
        put32(&mut post, 0x0003_0000);
        put32(&mut post, 0);
        put16(&mut post, (-(CELL as i16)) as u16);
        put16(&mut post, (CELL / 2) as u16);
        put32(&mut post, 0);
        post.extend_from_slice(&[0u8; 16]);

        let tables: [(&[u8; 4], Vec<u8>); 9] = [
            (b"cmap", cmap),
            (b"glyf", glyf),
            (b"head", head),
            (b"hhea", hhea),
            (b"hmtx", hmtx),
            (b"loca", loca_table),
            (b"maxp", maxp),
            (b"name", name),
            (b"post", post),
        ];

        let num_tables = tables.len() as u16;
        let mut out = Vec::new();
        put32(&mut out, 0x0001_0000);
        put16(&mut out, num_tables);
        put16(&mut out, 128); // searchRange for 9 tables
        put16(&mut out, 3);
        put16(&mut out, num_tables * 16 - 128);

        let mut offset = 12 + 16 * tables.len() as u32;
        let mut head_offset = 0;
        for (tag, data) in &tables {
            if *tag == b"head" {
                head_offset = offset as usize;
            }
            out.extend_from_slice(*tag);
            put32(&mut out, checksum(data));
            put32(&mut out, offset);
            put32(&mut out, data.len() as u32);
            offset += (data.len() as u32 + 3) & !3;
        }
        for (_, data) in &tables {
            out.extend_from_slice(data);
            while out.len() % 4 != 0 {
                out.push(0);
            }
        }
        let adjustment = 0xB1B0_AFBAu32.wrapping_sub(checksum(&out));
        out[head_offset + 8..head_offset + 12].copy_from_slice(&adjustment.to_be_bytes());
        out
    }
}
