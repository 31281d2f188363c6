//! Vocabulary, sampling plan, per-sample pipeline and corpus output.

pub mod config;
pub mod generate;
pub mod manifest;
pub mod plan;
pub mod sample;
pub mod vocabulary;

pub use config::GeneratorConfig;
pub use generate::{dry_run, generate_corpus, generate_from, CorpusInputs, RunSummary, INCOMPLETE_MARKER};
pub use manifest::{CorpusManifest, ManifestHeader, SampleRecord, MANIFEST_FILE};
pub use plan::{plan, sample_seed, PlanEntry, SamplingPlan};
pub use sample::{generate_sample, image_relpath};
pub use vocabulary::{load_vocabulary, Vocabulary};
