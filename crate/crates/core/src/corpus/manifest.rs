//! Ground-truth manifest: a UTF-8 TSV with `#`-prefixed header lines.
//!
//! Row columns: `sample_index image_path label font_id font_size kerning
//! stroke_delta rotation_deg shear pad_l pad_r pad_t pad_b sample_seed`,
//! reals printed with six decimals. Labels escape `\`, tab, CR and LF as
//! `\\`, `\t`, `\r`, `\n`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Padding;

pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const COLUMNS: usize = 14;
pub const LABEL_COLUMN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestHeader {
    pub config_digest: u64,
    pub tool_version: String,
    pub catalog_digest: u64,
}

impl ManifestHeader {
    pub fn to_text(&self) -> String {
        format!(
            "# config_digest={:016x}\n# tool_version={}\n# catalog_digest={:016x}\n",
            self.config_digest, self.tool_version, self.catalog_digest
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub sample_index: u64,
    pub image_path: String,
    pub label: String,
    pub font_id: u32,
    pub font_size_px: u32,
    pub kerning_px: i32,
    pub stroke_delta: i32,
    pub rotation_deg: f64,
    pub shear: f64,
    pub pad: Padding,
    pub sample_seed: u64,
}

impl SampleRecord {
    pub fn to_row(&self) -> String {
        let mut row = String::with_capacity(128);
        let _ = writeln!(
            row,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}\t{}",
            self.sample_index,
            self.image_path,
            escape_label(&self.label),
            self.font_id,
            self.font_size_px,
            self.kerning_px,
            self.stroke_delta,
            self.rotation_deg,
            self.shear,
            self.pad.left,
            self.pad.right,
            self.pad.top,
            self.pad.bottom,
            self.sample_seed
        );
        row
    }

    pub fn parse_row(line: &str) -> Result<Self> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != COLUMNS {
            return Err(bad_row(line, "wrong column count"));
        }
        fn num<T: std::str::FromStr>(line: &str, s: &str) -> Result<T> {
            s.parse().map_err(|_| bad_row(line, s))
        }
        Ok(SampleRecord {
            sample_index: num(line, cols[0])?,
            image_path: cols[1].to_string(),
            label: unescape_label(cols[2]),
            font_id: num(line, cols[3])?,
            font_size_px: num(line, cols[4])?,
            kerning_px: num(line, cols[5])?,
            stroke_delta: num(line, cols[6])?,
            rotation_deg: num(line, cols[7])?,
            shear: num(line, cols[8])?,
            pad: Padding::new(num(line, cols[9])?, num(line, cols[10])?, num(line, cols[11])?, num(line, cols[12])?)?,
            sample_seed: num(line, cols[13])?,
        })
    }
}

fn bad_row(line: &str, what: &str) -> Error {
    Error::Manifest(format!("row ({what}): {line:?}"))
}

pub fn escape_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for ch in label.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_label(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

/// A manifest read back into memory.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub header: ManifestHeader,
    pub records: Vec<SampleRecord>,
}

impl CorpusManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config_digest = None;
        let mut tool_version = None;
        let mut catalog_digest = None;
        let mut records = Vec::new();
        for line in text.lines() {
            if let Some(meta) = line.strip_prefix('#') {
                let Some((key, value)) = meta.trim().split_once('=') else { continue };
                let hex = |v: &str| u64::from_str_radix(v, 16).map_err(|_| bad_row(line, "digest"));
                match key {
                    "config_digest" => config_digest = Some(hex(value)?),
                    "catalog_digest" => catalog_digest = Some(hex(value)?),
                    "tool_version" => tool_version = Some(value.to_string()),
                    _ => {}
                }
            } else if !line.is_empty() {
                records.push(SampleRecord::parse_row(line)?);
            }
        }
        let (Some(config_digest), Some(tool_version), Some(catalog_digest)) =
            (config_digest, tool_version, catalog_digest)
        else {
            return Err(Error::Manifest("header is incomplete".into()));
        };
        Ok(CorpusManifest { header: ManifestHeader { config_digest, tool_version, catalog_digest }, records })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header.to_text();
        for r in &self.records {
            out.push_str(&r.to_row());
        }
        out
    }
}

/// Streams manifest rows to a file.
pub struct ManifestWriter<W: Write> {
    out: W,
    rows: u64,
}

impl<W: Write> ManifestWriter<W> {
    pub fn new(mut out: W, header: &ManifestHeader) -> std::io::Result<Self> {
        out.write_all(header.to_text().as_bytes())?;
        Ok(ManifestWriter { out, rows: 0 })
    }

    pub fn write(&mut self, record: &SampleRecord) -> std::io::Result<()> {
        self.rows += 1;
        self.out.write_all(record.to_row().as_bytes())
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
