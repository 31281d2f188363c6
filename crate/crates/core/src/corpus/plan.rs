//! Sampling plan and per-sample seeding.

use crate::error::Error;
use crate::font_catalog::FontCatalog;
use crate::stream::{splitmix64_mix, RandomStream, GOLDEN_GAMMA};

use super::vocabulary::Vocabulary;

/// Salt separating the per-word font-sampling streams from per-sample streams.
const PLAN_SALT: u64 = 0xA076_1D64_78BD_642F;

/// Seed of sample `sample_index`:
/// `mix((master_seed ^ sample_index * GOLDEN_GAMMA) + GOLDEN_GAMMA)`,
/// where `mix` is the SplitMix64 finalizer and arithmetic wraps. For a fixed
/// master seed this is a bijection of the index, so seeds never collide.
pub fn sample_seed(master_seed: u64, sample_index: u64) -> u64 {
    splitmix64_mix((master_seed ^ sample_index.wrapping_mul(GOLDEN_GAMMA)).wrapping_add(GOLDEN_GAMMA))
}

/// Seed of the font-sampling stream for word `word_index`.
pub fn word_seed(master_seed: u64, word_index: u64) -> u64 {
    sample_seed(master_seed ^ PLAN_SALT, word_index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanEntry {
    pub sample_index: u64,
    pub word_index: u32,
    /// Position of this font among the word's samples.
    pub slot: u32,
    pub font_id: u32,
}

#[derive(Debug, Clone)]
struct WordPlan {
    word_index: u32,
    first_sample: u64,
    fonts: Vec<u32>,
}

/// Every planned sample, grouped by word. Sample indices are dense in plan
/// order across the words that were not skipped.
#[derive(Debug, Clone, Default)]
pub struct SamplingPlan {
    words: Vec<WordPlan>,
    skipped_words: Vec<(u32, String)>,
    total: u64,
}

impl SamplingPlan {
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// `(word_index, word)` of words no font covers.
    pub fn skipped_words(&self) -> &[(u32, String)] {
        &self.skipped_words
    }

    pub fn entries(&self) -> impl Iterator<Item = PlanEntry> + '_ {
        self.words.iter().flat_map(|w| {
            w.fonts.iter().enumerate().map(move |(slot, &font_id)| PlanEntry {
                sample_index: w.first_sample + slot as u64,
                word_index: w.word_index,
                slot: slot as u32,
                font_id,
            })
        })
    }

    pub fn entry(&self, sample_index: u64) -> Option<PlanEntry> {
        let pos = self.words.partition_point(|w| w.first_sample <= sample_index).checked_sub(1)?;
        let w = &self.words[pos];
        let slot = (sample_index - w.first_sample) as usize;
        w.fonts.get(slot).map(|&font_id| PlanEntry {
            sample_index,
            word_index: w.word_index,
            slot: slot as u32,
            font_id,
        })
    }
}

/// Samples `k` fonts for every word in vocabulary order. Words without an
/// eligible font are skipped and reported.
pub fn plan(vocab: &Vocabulary, catalog: &FontCatalog, k: usize, master_seed: u64) -> SamplingPlan {
    let mut out = SamplingPlan::default();
    for (i, word) in vocab.words().iter().enumerate() {
        let mut stream = RandomStream::from_seed(word_seed(master_seed, i as u64));
        match catalog.sample_fonts(word, k, &mut stream) {
            Ok(fonts) => {
                let first_sample = out.total;
                out.total += fonts.len() as u64;
                out.words.push(WordPlan { word_index: i as u32, first_sample, fonts });
            }
            Err(Error::NoEligibleFont { .. }) | Err(Error::EmptyWord) => {
                log::warn!("no font covers {word:?}; word skipped");
                out.skipped_words.push((i as u32, word.clone()));
            }
            Err(e) => unreachable!("sample_fonts only fails on coverage: {e}"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::font_catalog::FontFace;
    use crate::typesetter::gridfont::GridFont;
    use std::path::PathBuf;
    use std::sync::Arc;

    fn catalog(n: usize) -> FontCatalog {
        let mut grid = GridFont::new(1, 1).unwrap();
        for ch in 'a'..='z' {
            grid.insert(ch, vec![true]).unwrap();
        }
        let grid = Arc::new(grid);
        FontCatalog::from_faces((0..n).map(|i| (PathBuf::from(format!("{i:04}")), FontFace::Grid(grid.clone()))))
            .unwrap()
    }

    #[test]
    fn sample_seed_zero_is_splitmix_first_output() {
        assert_eq!(sample_seed(0, 0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn counts_are_words_times_k() {
        let words: String = ('a'..='j').map(|c| format!("x{c}\n")).collect();
        let vocab = Vocabulary::from_text(&words, "v").unwrap();
        let p = plan(&vocab, &catalog(4), 3, 9);
        assert_eq!(p.len(), 30);
        let idx: Vec<u64> = p.entries().map(|e| e.sample_index).collect();
        assert_eq!(idx, (0..30).collect::<Vec<_>>());
    }

    #[test]
    fn uncovered_words_are_skipped() {
        let vocab = Vocabulary::from_text("cat\n∑x\n", "v").unwrap();
        let p = plan(&vocab, &catalog(3), 2, 0);
        assert_eq!(p.len(), 2);
        assert_eq!(p.skipped_words(), &[(1, "∑x".to_string())]);
    }

    #[test]
    fn entry_lookup_matches_iteration() {
        let vocab = Vocabulary::from_text("ab\n∑\ncd\nef\n", "v").unwrap();
        let p = plan(&vocab, &catalog(5), 4, 3);
        for e in p.entries() {
            assert_eq!(p.entry(e.sample_index), Some(e));
        }
        assert_eq!(p.entry(p.len()), None);
    }

    #[test]
    fn plan_is_deterministic() {
        let vocab = Vocabulary::from_text("ab\ncd\n", "v").unwrap();
        let a: Vec<_> = plan(&vocab, &catalog(20), 5, 42).entries().collect();
        let b: Vec<_> = plan(&vocab, &catalog(20), 5, 42).entries().collect();
        assert_eq!(a, b);
    }
}
