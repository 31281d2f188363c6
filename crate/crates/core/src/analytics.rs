//! Word-frequency statistics over label streams.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::manifest::{unescape_label, COLUMNS, LABEL_COLUMN};
use crate::error::{Error, Result};

pub const DEFAULT_RARE_THRESHOLD: u64 = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn add(&mut self, word: &str) {
        *self.counts.entry(word.to_string()).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &FrequencyTable) {
        for (w, &c) in &other.counts {
            *self.counts.entry(w.clone()).or_insert(0) += c;
        }
        self.total += other.total;
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total_tokens(&self) -> u64 {
        self.total
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn word_frequency<I, S>(tokens: I) -> FrequencyTable
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut table = FrequencyTable::default();
    for t in tokens {
        table.add(t.as_ref());
    }
    table
}

/// Words seen fewer than `threshold` times.
pub fn rare_class_count(table: &FrequencyTable, threshold: u64) -> usize {
    table.counts.values().filter(|&&c| c < threshold).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedWord {
    pub rank: usize,
    pub frequency: u64,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZipfReport {
    pub ranks: Vec<RankedWord>,
    pub vocabulary_size: usize,
    pub total_tokens: u64,
    pub rare_threshold: u64,
    pub rare_classes: usize,
}

impl ZipfReport {
    /// `rank<TAB>frequency<TAB>word` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("rank\tfrequency\tword\n");
        for r in &self.ranks {
            let _ = writeln!(out, "{}\t{}\t{}", r.rank, r.frequency, r.word);
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "vocabulary_size\t{}\ntotal_tokens\t{}\nrare_threshold\t{}\nrare_classes\t{}\n",
            self.vocabulary_size, self.total_tokens, self.rare_threshold, self.rare_classes
        )
    }

    /// Writes `zipf.tsv` and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, text) in [("zipf.tsv", self.to_tsv()), ("summary.txt", self.summary())] {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Ranks words by descending frequency, ties by word.
pub fn zipf_report(table: &FrequencyTable) -> Result<ZipfReport> {
    zipf_report_with(table, DEFAULT_RARE_THRESHOLD)
}

pub fn zipf_report_with(table: &FrequencyTable, rare_threshold: u64) -> Result<ZipfReport> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut sorted: Vec<(&String, u64)> = table.counts.iter().map(|(w, &c)| (w, c)).collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let ranks = sorted
        .into_iter()
        .enumerate()
        .map(|(i, (w, c))| RankedWord { rank: i + 1, frequency: c, word: w.clone() })
        .collect();
    Ok(ZipfReport {
        ranks,
        vocabulary_size: table.len(),
        total_tokens: table.total,
        rare_threshold,
        rare_classes: rare_class_count(table, rare_threshold),
    })
}

/// Tokens from a word-per-line file or, when the text starts with a manifest
/// header, from the manifest's label column.
pub fn parse_tokens(text: &str, fold_case: bool) -> Result<Vec<String>> {
    let is_manifest = text.starts_with("# config_digest=");
    let mut tokens = Vec::new();
    for line in text.lines() {
        let token = if is_manifest {
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != COLUMNS {
                return Err(Error::Manifest(format!("row has {} columns: {line:?}", cols.len())));
            }
            unescape_label(cols[LABEL_COLUMN])
        } else {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            t.to_string()
        };
        tokens.push(if fold_case { token.to_lowercase() } else { token });
    }
    Ok(tokens)
}

pub fn read_tokens(path: &Path, fold_case: bool) -> Result<Vec<String>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Utf8 { path: path.to_path_buf() })?;
    parse_tokens(&text, fold_case)
}
