use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Unique words in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    source: PathBuf,
}

impl Vocabulary {
    /// Trims each line, drops empty lines and later duplicates. Case is kept.
    pub fn from_text(text: &str, source: impl Into<PathBuf>) -> Result<Self> {
        let mut seen = HashSet::new();
        let words: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .filter(|w| seen.insert(*w))
            .map(str::to_string)
            .collect();
        if words.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(Vocabulary { words, source: source.into() })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source(&self) -> &Path {
        &self.source
    }
}

pub fn load_vocabulary(path: &Path) -> Result<Vocabulary> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Utf8 { path: path.to_path_buf() })?;
    Vocabulary::from_text(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedups_in_first_occurrence_order() {
        let v = Vocabulary::from_text("cat\ndog\ncat\n", "v").unwrap();
        assert_eq!(v.words(), &["cat", "dog"]);
    }

    #[test]
    fn trims_and_keeps_case() {
        let v = Vocabulary::from_text("  Cat \r\ncat\n\n\tDOG\n", "v").unwrap();
        assert_eq!(v.words(), &["Cat", "cat", "DOG"]);
    }

    #[test]
    fn blank_file_is_empty() {
        assert!(matches!(Vocabulary::from_text("\n  \n\n", "v"), Err(Error::EmptyVocabulary)));
    }

    #[test]
    fn invalid_utf8_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, [0x66, 0xff, 0x0a]).unwrap();
        assert!(matches!(load_vocabulary(&path), Err(Error::Utf8 { .. })));
        assert!(matches!(load_vocabulary(&dir.path().join("none.txt")), Err(Error::Io { .. })));
    }
}
