mod common;

use hwforge_core::font_catalog::scan_fonts;
use hwforge_core::typesetter::gridfont::GridFont;
use hwforge_core::typesetter::{layout, rasterize, render_word};
use hwforge_core::{BinaryMask, Error, FontCatalog, RandomStream, RenderSpec};

/// The mask a word must rasterize to when every grid cell covers exactly
/// `cell` x `cell` pixels: upscaled cells at each pen position, cropped to
/// the ink plus a one-pixel margin.
fn upscaled_oracle(font: &GridFont, word: &str, cell: u32, kerning: i32) -> BinaryMask {
    let step = (font.advance() as i64 * cell as i64 + kerning as i64).max(0);
    let n = word.chars().count() as i64;
    let width = (step * (n - 1) + (font.advance() * cell) as i64) as u32;
    let height = font.height() * cell;
    let mut canvas = BinaryMask::new(width, height);
    for (i, ch) in word.chars().enumerate() {
        let cells = font.glyph(ch).unwrap();
        for y in 0..height {
            for x in 0..font.advance() * cell {
                if cells[((y / cell) * font.advance() + x / cell) as usize] {
                    canvas.set((i as i64 * step) as u32 + x, y, true);
                }
            }
        }
    }
    let (x0, y0, x1, y1) = canvas.ink_bounds().unwrap();
    let mut out = BinaryMask::new(x1 - x0 + 2, y1 - y0 + 2);
    for y in y0..y1 {
        for x in x0..x1 {
            out.set(x - x0 + 1, y - y0 + 1, canvas.get(x, y));
        }
    }
    out
}

fn catalog_from_disk(n: usize) -> (tempfile::TempDir, FontCatalog) {
    let dir = tempfile::tempdir().unwrap();
    common::write_fonts(dir.path(), n);
    let catalog = scan_fonts(dir.path(), false).unwrap();
    (dir, catalog)
}

#[test]
fn scan_skips_unparseable_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = common::write_fonts(dir.path(), 4);
    let bytes = std::fs::read(&paths[1]).unwrap();
    std::fs::write(&paths[1], &bytes[..10]).unwrap();
    std::fs::write(dir.path().join("readme.txt"), "not a font").unwrap();

    let catalog = scan_fonts(dir.path(), false).unwrap();
    assert_eq!(catalog.len(), 3);
    assert_eq!(catalog.skipped().len(), 1);
    assert_eq!(catalog.skipped()[0].0, paths[1]);
    let ids: Vec<u32> = catalog.entries().iter().map(|e| e.id).collect();
    assert_eq!(ids, [0, 1, 2]);
    let families: Vec<&str> = catalog.entries().iter().map(|e| e.family_name.as_str()).collect();
    assert_eq!(families, ["Grid 0", "Grid 2", "Grid 3"]);
    // 52 letters plus the space.
    assert!(catalog.entries().iter().all(|e| e.glyph_set.len() == 53));
    assert!(catalog.listing().lines().next().unwrap().starts_with("0\t"));
}

#[test]
fn scan_recurses_only_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    common::write_fonts(dir.path(), 2);
    common::write_fonts(&dir.path().join("nested"), 3);
    assert_eq!(scan_fonts(dir.path(), false).unwrap().len(), 2);
    assert_eq!(scan_fonts(dir.path(), true).unwrap().len(), 5);
}

#[test]
fn scan_of_fontless_directory_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.ttf"), b"nope").unwrap();
    assert!(matches!(scan_fonts(dir.path(), false), Err(Error::EmptyCatalog)));
}

#[test]
fn catalog_digest_tracks_content() {
    let (_a, first) = catalog_from_disk(3);
    let (_b, second) = catalog_from_disk(3);
    assert_eq!(first.digest(), second.digest());
    let (_c, other) = catalog_from_disk(4);
    assert_ne!(first.digest(), other.digest());
}

#[test]
fn coverage_is_exact_on_code_points() {
    let (_dir, catalog) = catalog_from_disk(2);
    let font = &catalog.entries()[0];
    assert!(font.covers("Hello world").unwrap());
    assert!(!font.covers("café").unwrap());
    assert!(!font.covers("x1").unwrap());
    assert!(matches!(font.covers(""), Err(Error::EmptyWord)));
}

#[test]
fn truetype_masks_match_the_upscaled_grid() {
    let (_dir, catalog) = catalog_from_disk(5);
    let mut s = RandomStream::from_seed(3);
    let words = common::synthetic_words(40);
    for (i, word) in words.iter().enumerate() {
        let font_id = (i % 5) as u32;
        let kerning = s.uniform_i64(-12, 12) as i32;
        // 70 px em over a 7-cell grid: each cell is exactly 10x10 pixels.
        let spec = RenderSpec { font_id, font_size_px: 70, kerning_px: kerning, stroke_delta: 0 };
        let mask = render_word(word, &catalog.entries()[i % 5], &spec).unwrap();
        let oracle = upscaled_oracle(&common::grid_font(font_id as u64), word, 10, kerning);
        assert_eq!(mask, oracle, "{word:?} in font {font_id} with kerning {kerning}");
    }
}

#[test]
fn layout_origins_follow_advance_and_kerning() {
    let (_dir, catalog) = catalog_from_disk(1);
    let font = &catalog.entries()[0];
    let spec = RenderSpec { font_id: 0, font_size_px: 70, kerning_px: 4, stroke_delta: 0 };
    let placed = layout("abc", font, &spec).unwrap();
    let xs: Vec<f64> = placed.placements.iter().map(|p| p.origin_x).collect();
    assert_eq!(xs, [0.0, 54.0, 108.0]);
    let ink = placed.ink_box.unwrap();
    assert!(ink.width() <= 158.0 && ink.height() <= 70.0);
}

#[test]
fn missing_glyph_is_reported() {
    let (_dir, catalog) = catalog_from_disk(1);
    let spec = RenderSpec { font_id: 0, font_size_px: 64, kerning_px: 0, stroke_delta: 0 };
    assert!(matches!(layout("a9", &catalog.entries()[0], &spec), Err(Error::MissingGlyph('9'))));
}

#[test]
fn blank_word_has_no_ink() {
    let (_dir, catalog) = catalog_from_disk(1);
    let font = &catalog.entries()[0];
    let spec = RenderSpec { font_id: 0, font_size_px: 64, kerning_px: 0, stroke_delta: 0 };
    let placed = layout("   ", font, &spec).unwrap();
    assert!(matches!(rasterize(&placed.placements, font, 64), Err(Error::ZeroInk)));
}

#[test]
fn system_outline_font_renders_when_present() {
    // Curved outlines exercise quadratic segments; skipped on hosts without it.
    let path = std::path::Path::new("/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf");
    let Ok(data) = std::fs::read(path) else { return };
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("DejaVuSans.ttf"), data).unwrap();
    let catalog = scan_fonts(dir.path(), false).unwrap();
    let font = &catalog.entries()[0];
    assert_eq!(font.family_name, "DejaVu Sans");
    let spec = RenderSpec { font_id: 0, font_size_px: 64, kerning_px: 0, stroke_delta: 0 };
    let narrow = render_word("go", font, &spec).unwrap();
    let wide = render_word("go", font, &RenderSpec { kerning_px: 10, ..spec }).unwrap();
    assert_eq!(wide.width(), narrow.width() + 10);
    assert_eq!(wide.ink_count(), narrow.ink_count());
}
