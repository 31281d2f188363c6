//! Corpus generation over a bounded worker pool.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::appearance::PixelModel;
use crate::error::{Error, Result};
use crate::font_catalog::{scan_fonts, FontCatalog};

use super::config::GeneratorConfig;
use super::manifest::{ManifestHeader, ManifestWriter, SampleRecord, MANIFEST_FILE};
use super::plan::{plan, PlanEntry, SamplingPlan};
use super::sample::generate_sample;
use super::vocabulary::{load_vocabulary, Vocabulary};

pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Samples handed to the pool per thread per batch.
const BATCH_PER_THREAD: usize = 64;

/// Everything a run reads, loaded and validated before any output exists.
pub struct CorpusInputs {
    pub config: GeneratorConfig,
    pub catalog: FontCatalog,
    pub vocabulary: Vocabulary,
    pub model: PixelModel,
}

impl CorpusInputs {
    pub fn load(config: &GeneratorConfig) -> Result<Self> {
        config.validate()?;
        let catalog = scan_fonts(&config.fonts.font_dir, config.fonts.recursive)?;
        for (path, why) in catalog.skipped() {
            log::warn!("skipped font {}: {why}", path.display());
        }
        let vocabulary = load_vocabulary(&config.render.vocabulary)?;
        let model = config.pixel_model()?;
        Ok(CorpusInputs { config: config.clone(), catalog, vocabulary, model })
    }

    pub fn plan(&self) -> SamplingPlan {
        plan(&self.vocabulary, &self.catalog, self.config.fonts.fonts_per_word as usize, self.config.render.seed as u64)
    }

    pub fn header(&self) -> ManifestHeader {
        ManifestHeader {
            config_digest: self.config.digest(),
            tool_version: TOOL_VERSION.to_string(),
            catalog_digest: self.catalog.digest(),
        }
    }

    /// Renders one plan entry.
    pub fn render(&self, entry: &PlanEntry) -> Result<(crate::appearance::GrayImage, SampleRecord)> {
        let word = &self.vocabulary.words()[entry.word_index as usize];
        generate_sample(entry, word, &self.config, &self.catalog, &self.model)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub planned: u64,
    pub written: u64,
    /// Sample indices dropped because they rendered no ink.
    pub skipped_samples: Vec<u64>,
    pub skipped_words: Vec<(u32, String)>,
    pub output_dir: PathBuf,
}

/// Plans without rendering.
pub fn dry_run(config: &GeneratorConfig) -> Result<RunSummary> {
    let inputs = CorpusInputs::load(config)?;
    let plan = inputs.plan();
    Ok(RunSummary {
        planned: plan.len(),
        written: 0,
        skipped_samples: Vec::new(),
        skipped_words: plan.skipped_words().to_vec(),
        output_dir: config.output.output_dir.clone(),
    })
}

/// Loads inputs and writes the corpus with `threads` workers.
pub fn generate_corpus(config: &GeneratorConfig, threads: usize) -> Result<RunSummary> {
    let inputs = CorpusInputs::load(config)?;
    generate_from(&inputs, threads)
}

/// Writes the corpus for already-loaded inputs. Output bytes do not depend on
/// `threads`.
pub fn generate_from(inputs: &CorpusInputs, threads: usize) -> Result<RunSummary> {
    let threads = threads.max(1);
    let out_dir = inputs.config.output.output_dir.clone();
    let plan = inputs.plan();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let marker = out_dir.join(INCOMPLETE_MARKER);
    fs::write(&marker, b"").map_err(|e| Error::io(&marker, e))?;

    let shard_size = inputs.config.output.shard_size;
    for shard in 0..plan.len().div_ceil(shard_size) {
        let dir = out_dir.join(format!("shard_{shard}"));
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let manifest_path = out_dir.join(MANIFEST_FILE);
    let file = File::create(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let mut writer =
        ManifestWriter::new(BufWriter::new(file), &inputs.header()).map_err(|e| Error::io(&manifest_path, e))?;

    let entries: Vec<PlanEntry> = plan.entries().collect();
    let mut skipped_samples = Vec::new();
    for batch in entries.chunks(BATCH_PER_THREAD * threads) {
        let results: Vec<Result<Option<SampleRecord>>> =
            pool.install(|| batch.par_iter().map(|entry| render_and_store(inputs, entry, &out_dir)).collect());
        for (entry, result) in batch.iter().zip(results) {
            match result? {
                Some(record) => writer.write(&record).map_err(|e| Error::io(&manifest_path, e))?,
                None => skipped_samples.push(entry.sample_index),
            }
        }
        log::info!("{} / {} samples", batch.last().map_or(0, |e| e.sample_index + 1), plan.len());
    }
    let written = writer.rows();
    writer.finish().map_err(|e| Error::io(&manifest_path, e))?;
    fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;

    Ok(RunSummary {
        planned: plan.len(),
        written,
        skipped_samples,
        skipped_words: plan.skipped_words().to_vec(),
        output_dir: out_dir,
    })
}

fn render_and_store(inputs: &CorpusInputs, entry: &PlanEntry, out_dir: &Path) -> Result<Option<SampleRecord>> {
    match inputs.render(entry) {
        Ok((image, record)) => {
            image.write_png(&out_dir.join(&record.image_path))?;
            Ok(Some(record))
        }
        Err(Error::ZeroInk) => {
            let word = &inputs.vocabulary.words()[entry.word_index as usize];
            log::warn!("sample {} ({word:?}) has no ink; skipped", entry.sample_index);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}
