//! Discovery, validation and sampling of the font pool.
//!
//! A [`FontCatalog`] is built once per run and then shared read-only by every
//! worker. Font ids are positions in the catalog after sorting by path, so the
//! same directory always produces the same ids.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::digest::{fnv1a, Fnv1a};
use crate::error::{Error, Result};
use crate::stream::RandomStream;
use crate::typesetter::gridfont::GridFont;

const FONT_EXTENSIONS: &[&str] = &["ttf", "otf", "ttc", "otc"];

/// Set of Unicode scalar values a font maps to a real glyph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlyphSet {
    ascii: u128,
    sorted: Vec<u32>,
}

impl GlyphSet {
    pub fn from_code_points(points: impl IntoIterator<Item = u32>) -> Self {
        let mut sorted: Vec<u32> = points.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        let ascii = sorted.iter().take_while(|&&cp| cp < 128).fold(0u128, |acc, &cp| acc | (1u128 << cp));
        GlyphSet { ascii, sorted }
    }

    #[inline]
    pub fn contains(&self, ch: char) -> bool {
        let cp = ch as u32;
        if cp < 128 {
            self.ascii & (1u128 << cp) != 0
        } else {
            self.sorted.binary_search(&cp).is_ok()
        }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.sorted.iter().copied()
    }
}

/// The glyph source behind a catalog entry.
#[derive(Debug, Clone)]
pub enum FontFace {
    /// A TrueType/OpenType face held in memory.
    Outline { data: Arc<[u8]>, index: u32 },
    /// A `.gridfont` test fixture.
    Grid(Arc<GridFont>),
}

impl FontFace {
    /// Parses `data` as face `index` of a font file, returning the face with
    /// its family name, glyph coverage and units per em.
    pub fn parse_outline(data: Arc<[u8]>, index: u32) -> Result<(Self, String, GlyphSet, u32), String> {
        let face = ttf_parser::Face::parse(&data, index).map_err(|e| e.to_string())?;
        let family = family_name(&face).unwrap_or_default();
        let mut points = Vec::new();
        if let Some(cmap) = face.tables().cmap {
            for sub in cmap.subtables.into_iter().filter(|s| s.is_unicode()) {
                sub.codepoints(|cp| {
                    if sub.glyph_index(cp).is_some_and(|g| g.0 != 0) && char::from_u32(cp).is_some() {
                        points.push(cp);
                    }
                });
            }
        }
        let glyphs = GlyphSet::from_code_points(points);
        let upem = face.units_per_em() as u32;
        Ok((FontFace::Outline { data, index }, family, glyphs, upem))
    }

    fn content_digest(&self) -> u64 {
        match self {
            FontFace::Outline { data, index } => Fnv1a::new().update(data).update(&index.to_le_bytes()).finish(),
            FontFace::Grid(grid) => fnv1a(grid.to_text().as_bytes()),
        }
    }
}

fn family_name(face: &ttf_parser::Face<'_>) -> Option<String> {
    let names = face.names();
    let family = |id: u16| names.into_iter().filter(|n| n.name_id == id && n.is_unicode()).find_map(|n| n.to_string());
    family(ttf_parser::name_id::TYPOGRAPHIC_FAMILY).or_else(|| family(ttf_parser::name_id::FAMILY))
}

/// One validated font of the pool.
#[derive(Debug, Clone)]
pub struct FontEntry {
    pub id: u32,
    pub source_path: PathBuf,
    pub family_name: String,
    pub glyph_set: GlyphSet,
    pub units_per_em: u32,
    pub face: FontFace,
}

impl FontEntry {
    /// True iff every code point of `word` has a glyph in this font.
    pub fn covers(&self, word: &str) -> Result<bool> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(word.chars().all(|ch| self.glyph_set.contains(ch)))
    }
}

/// Free-function form of [`FontEntry::covers`].
pub fn covers(font: &FontEntry, word: &str) -> Result<bool> {
    font.covers(word)
}

#[derive(Debug, Clone, Default)]
pub struct FontCatalog {
    entries: Vec<FontEntry>,
    skipped: Vec<(PathBuf, String)>,
}

impl FontCatalog {
    /// Builds a catalog from already-loaded faces, sorting by path and
    /// assigning ids in that order. Faces without any glyph are skipped.
    pub fn from_faces(faces: impl IntoIterator<Item = (PathBuf, FontFace)>) -> Result<Self> {
        let mut catalog = FontCatalog::default();
        let mut faces: Vec<_> = faces.into_iter().collect();
        faces.sort_by(|a, b| a.0.cmp(&b.0));
        for (path, face) in faces {
            let loaded = match &face {
                FontFace::Outline { data, index } => {
                    FontFace::parse_outline(data.clone(), *index).map(|(_, fam, gs, upem)| (fam, gs, upem))
                }
                FontFace::Grid(grid) => {
                    let family = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    Ok((family, grid.glyph_set(), grid.height()))
                }
            };
            catalog.push_loaded(path, face, loaded);
        }
        catalog.finish()
    }

    fn push_loaded(&mut self, path: PathBuf, face: FontFace, loaded: Result<(String, GlyphSet, u32), String>) {
        match loaded {
            Ok((_, glyph_set, _)) if glyph_set.is_empty() => {
                self.skipped.push((path, "no Unicode glyph coverage".to_string()));
            }
            Ok((family_name, glyph_set, units_per_em)) => self.entries.push(FontEntry {
                id: self.entries.len() as u32,
                source_path: path,
                family_name,
                glyph_set,
                units_per_em,
                face,
            }),
            Err(reason) => self.skipped.push((path, reason)),
        }
    }

    fn finish(self) -> Result<Self> {
        if self.entries.is_empty() {
            return Err(Error::EmptyCatalog);
        }
        Ok(self)
    }

    pub fn entries(&self) -> &[FontEntry] {
        &self.entries
    }

    pub fn skipped(&self) -> &[(PathBuf, String)] {
        &self.skipped
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&FontEntry> {
        self.entries.get(id as usize)
    }

    /// Tab-separated listing, one line per font:
    /// `id<TAB>path<TAB>family<TAB>glyph_count`.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", e.id, e.source_path.display(), e.family_name, e.glyph_set.len());
        }
        out
    }

    /// Digest over font contents, file names and id order. Independent of the
    /// directory the fonts were scanned from.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv1a::new();
        for e in &self.entries {
            let name = e.source_path.file_name().map(|n| n.to_string_lossy().into_owned());
            h.update(&e.id.to_le_bytes())
                .update(name.unwrap_or_default().as_bytes())
                .update(&[0])
                .update(&e.face.content_digest().to_le_bytes());
        }
        h.finish()
    }

    /// Ids of fonts that cover `word`, in id order.
    pub fn eligible(&self, word: &str) -> Result<Vec<u32>> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut ascii = 0u128;
        let mut other: Vec<char> = Vec::new();
        for ch in word.chars() {
            if (ch as u32) < 128 {
                ascii |= 1u128 << ch as u32;
            } else {
                other.push(ch);
            }
        }
        Ok(self
            .entries
            .iter()
            .filter(|e| ascii & !e.glyph_set.ascii == 0 && other.iter().all(|&ch| e.glyph_set.contains(ch)))
            .map(|e| e.id)
            .collect())
    }

    /// Draws `k` font ids uniformly from the fonts covering `word`.
    ///
    /// Without replacement when at least `k` fonts are eligible, otherwise with
    /// replacement (and a warning).
    pub fn sample_fonts(&self, word: &str, k: usize, stream: &mut RandomStream) -> Result<Vec<u32>> {
        let mut eligible = self.eligible(word)?;
        let n = eligible.len();
        if n == 0 {
            return Err(Error::NoEligibleFont { word: word.to_string() });
        }
        if n >= k {
            // Partial Fisher-Yates.
            for i in 0..k {
                let j = i + stream.index(n - i);
                eligible.swap(i, j);
            }
            eligible.truncate(k);
            Ok(eligible)
        } else {
            log::warn!("only {n} fonts cover {word:?}; sampling {k} with replacement");
            Ok((0..k).map(|_| eligible[stream.index(n)]).collect())
        }
    }
}

/// Free-function form of [`FontCatalog::sample_fonts`].
pub fn sample_fonts(catalog: &FontCatalog, word: &str, k: usize, stream: &mut RandomStream) -> Result<Vec<u32>> {
    catalog.sample_fonts(word, k, stream)
}

/// Loads every parseable font file in `dir` (and its subdirectories when
/// `recursive` is set). Files that fail to parse are recorded in
/// [`FontCatalog::skipped`].
pub fn scan_fonts(dir: &Path, recursive: bool) -> Result<FontCatalog> {
    let mut paths = Vec::new();
    collect_font_paths(dir, recursive, &mut paths)?;
    paths.sort();

    let mut catalog = FontCatalog::default();
    for path in paths {
        let data: Arc<[u8]> = match fs::read(&path) {
            Ok(bytes) => bytes.into(),
            Err(e) => {
                catalog.skipped.push((path, e.to_string()));
                continue;
            }
        };
        let loaded = FontFace::parse_outline(data, 0);
        match loaded {
            Ok((face, family, glyphs, upem)) => catalog.push_loaded(path, face, Ok((family, glyphs, upem))),
            Err(reason) => catalog.skipped.push((path, reason)),
        }
    }
    for (path, reason) in &catalog.skipped {
        log::warn!("skipping font {}: {reason}", path.display());
    }
    catalog.finish()
}

fn collect_font_paths(dir: &Path, recursive: bool, out: &mut Vec<PathBuf>) -> Result<()> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let file_type = entry.file_type().map_err(|e| Error::io(&path, e))?;
        if file_type.is_dir() {
            if recursive {
                collect_font_paths(&path, recursive, out)?;
            }
        } else if has_font_extension(&path) {
            out.push(path);
        }
    }
    Ok(())
}

fn has_font_extension(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| FONT_EXTENSIONS.iter().any(|f| e.eq_ignore_ascii_case(f)))
}
