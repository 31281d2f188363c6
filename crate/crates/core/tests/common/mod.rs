#![allow(dead_code)]

pub mod oracles;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use hwforge_core::corpus::GeneratorConfig;
use hwforge_core::typesetter::gridfont::GridFont;
use hwforge_core::{FontCatalog, FontFace, RandomStream};

pub const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// A 5x7 blocky font over [`ALPHABET`]. Each variant has its own glyph shapes;
/// every glyph has a full-height stem so it always carries ink.
pub fn grid_font(variant: u64) -> GridFont {
    let (advance, height) = (5u32, 7u32);
    let mut font = GridFont::new(advance, height).unwrap();
    for (i, ch) in ALPHABET.chars().enumerate() {
        let mut s = RandomStream::from_seed(variant.wrapping_mul(1_000_003) ^ i as u64);
        let stem = s.uniform_i64(0, 3) as u32;
        let cells: Vec<bool> = (0..advance * height)
            .map(|c| {
                let x = c % advance;
                x != advance - 1 && (x == stem || s.unit_f64() < 0.4)
            })
            .collect();
        font.insert(ch, cells).unwrap();
    }
    font.insert(' ', vec![false; (advance * height) as usize]).unwrap();
    font
}

/// Writes `n` distinct TrueType fonts into `dir`.
pub fn write_fonts(dir: &Path, n: usize) -> Vec<PathBuf> {
    std::fs::create_dir_all(dir).unwrap();
    (0..n)
        .map(|i| {
            let path = dir.join(format!("grid{i:03}.ttf"));
            std::fs::write(&path, grid_font(i as u64).to_truetype(&format!("Grid {i}"))).unwrap();
            path
        })
        .collect()
}

/// A catalog of `n` in-memory grid fonts.
pub fn memory_catalog(n: usize) -> FontCatalog {
    FontCatalog::from_faces(
        (0..n).map(|i| (PathBuf::from(format!("mem/{i:04}.grid")), FontFace::Grid(Arc::new(grid_font(i as u64))))),
    )
    .unwrap()
}

/// `n` distinct lowercase words of 3 to 8 letters.
pub fn synthetic_words(n: usize) -> Vec<String> {
    let mut s = RandomStream::from_seed(0x5eed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let len = s.uniform_i64(3, 8) as usize;
        let w: String = (0..len).map(|_| (b'a' + s.uniform_i64(0, 25) as u8) as char).collect();
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Fonts, vocabulary and a config for a small corpus under `root`.
pub fn desk_setup(root: &Path, fonts: usize, words: usize, k: u32) -> GeneratorConfig {
    write_fonts(&root.join("fonts"), fonts);
    let vocab = root.join("words.txt");
    std::fs::write(&vocab, synthetic_words(words).join("\n")).unwrap();
    let text = format!(
        "[fonts]\nfont_dir = {:?}\nfonts_per_word = {k}\n[render]\nvocabulary = {:?}\nseed = 7\n[output]\noutput_dir = {:?}\nshard_size = 100\n",
        root.join("fonts"),
        vocab,
        root.join("out"),
    );
    GeneratorConfig::from_toml(&text).unwrap()
}

/// Relative path and contents of every file under `dir`, sorted.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push((path.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}
