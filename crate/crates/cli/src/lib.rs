//! `hwforge` command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use hwforge_core::analytics::{read_tokens, word_frequency, zipf_report_with};
use hwforge_core::corpus::{self, CorpusInputs, GeneratorConfig, PlanEntry, Vocabulary};
use hwforge_core::{estimate_pixel_model, load_reference_dir, scan_fonts, Error, ErrorKind, GrayImage};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hwforge", version, about = "Synthetic handwritten word images from font collections")]
#[command(after_long_help = config_help())]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the fonts found in a directory.
    Fonts {
        dir: PathBuf,
        #[arg(short, long)]
        recursive: bool,
    },
    /// Estimate a pixel model from reference PNG images.
    Estimate {
        ref_dir: PathBuf,
        #[arg(short, long, default_value = "model.txt")]
        output: PathBuf,
    },
    /// Generate a corpus.
    #[command(after_long_help = config_help())]
    Generate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Worker threads; defaults to the number of cores.
        #[arg(long, env = "HWFORGE_THREADS")]
        threads: Option<usize>,
        /// Report the planned sample count without rendering.
        #[arg(long)]
        dry_run: bool,
    },
    /// Render a few samples per word for inspection.
    Preview {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated words.
        #[arg(long, value_delimiter = ',', required = true)]
        words: Vec<String>,
        /// Samples per word.
        #[arg(short = 'n', long, default_value_t = 5)]
        count: u32,
        #[arg(short, long, default_value = "preview")]
        output: PathBuf,
    },
    /// Word-frequency and Zipf report for a word list or manifest.
    Analyze {
        input: PathBuf,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
        #[arg(long)]
        fold_case: bool,
        /// Counts below this are rare.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        threshold: u64,
    },
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML configuration; defaults apply when omitted.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set augment.rot_max=3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Rescale outputs to this height.
    #[arg(long, value_name = "H")]
    pub normalize_height: Option<u32>,
}

impl ConfigArgs {
    pub fn load(&self) -> hwforge_core::Result<GeneratorConfig> {
        let mut overrides = self.overrides.clone();
        if let Some(h) = self.normalize_height {
            overrides.push(format!("output.normalize_height={h}"));
        }
        match &self.config {
            Some(path) => GeneratorConfig::load(path, &overrides),
            None => GeneratorConfig::from_toml_with_overrides("", &overrides),
        }
    }
}

fn config_help() -> String {
    format!("Configuration keys and defaults:\n{}", GeneratorConfig::describe_keys())
}

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Io => EXIT_IO,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command) -> hwforge_core::Result<()> {
    match command {
        Command::Fonts { dir, recursive } => {
            let catalog = scan_fonts(&dir, recursive)?;
            for (path, why) in catalog.skipped() {
                eprintln!("skipped {}: {why}", path.display());
            }
            print!("{}", catalog.listing());
        }
        Command::Estimate { ref_dir, output } => {
            let images = load_reference_dir(&ref_dir)?;
            let model = estimate_pixel_model(&images, &ref_dir.display().to_string())?;
            model.save(&output)?;
            print!("{}", model.to_text());
        }
        Command::Generate { config, threads, dry_run } => {
            let config = config.load()?;
            let summary = if dry_run {
                corpus::dry_run(&config)?
            } else {
                corpus::generate_corpus(&config, threads.unwrap_or_else(default_threads))?
            };
            for (i, word) in &summary.skipped_words {
                eprintln!("skipped word {i} {word:?}: no font covers it");
            }
            println!("planned\t{}", summary.planned);
            if !dry_run {
                println!("written\t{}", summary.written);
                println!("skipped_samples\t{}", summary.skipped_samples.len());
                println!("output\t{}", summary.output_dir.display());
            }
            println!("skipped_words\t{}", summary.skipped_words.len());
        }
        Command::Preview { config, words, count, output } => {
            let mut config = config.load()?;
            config.fonts.fonts_per_word = count.max(1);
            preview(config, &words, &output)?;
        }
        Command::Analyze { input, output, fold_case, threshold } => {
            let tokens = read_tokens(&input, fold_case)?;
            let report = zipf_report_with(&word_frequency(&tokens), threshold)?;
            report.write(&output)?;
            print!("{}", report.summary());
        }
    }
    Ok(())
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Writes `<word_index>_<slot>.png` per sample and a `grid.png` with one row per word.
fn preview(config: GeneratorConfig, words: &[String], out: &Path) -> hwforge_core::Result<()> {
    let catalog = scan_fonts(&config.fonts.font_dir, config.fonts.recursive)?;
    let model = config.pixel_model()?;
    let vocabulary = Vocabulary::from_text(&words.join("\n"), "--words")?;
    let inputs = CorpusInputs { config, catalog, vocabulary, model };
    let plan = inputs.plan();
    for (_, word) in plan.skipped_words() {
        eprintln!("skipped word {word:?}: no font covers it");
    }
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let mut rows: Vec<Vec<GrayImage>> = vec![Vec::new(); inputs.vocabulary.len()];
    let entries: Vec<PlanEntry> = plan.entries().collect();
    for entry in &entries {
        let (image, _) = match inputs.render(entry) {
            Err(Error::ZeroInk) => continue,
            other => other?,
        };
        image.write_png(&out.join(format!("{}_{}.png", entry.word_index, entry.slot)))?;
        rows[entry.word_index as usize].push(image);
    }
    let paper = inputs.model.bg_mean().round() as u8;
    if let Some(grid) = tile(&rows, 4, paper) {
        grid.write_png(&out.join("grid.png"))?;
    }
    println!("{} images in {}", entries.len(), out.display());
    Ok(())
}

fn tile(rows: &[Vec<GrayImage>], gap: u32, fill: u8) -> Option<GrayImage> {
    let row_width = |r: &Vec<GrayImage>| r.iter().map(|i| i.width() + gap).sum::<u32>() + gap;
    let row_height = |r: &Vec<GrayImage>| r.iter().map(GrayImage::height).max().unwrap_or(0);
    let rows: Vec<&Vec<GrayImage>> = rows.iter().filter(|r| !r.is_empty()).collect();
    if rows.is_empty() {
        return None;
    }
    let width = rows.iter().map(|r| row_width(r)).max()?;
    let height = rows.iter().map(|r| row_height(r) + gap).sum::<u32>() + gap;
    let mut grid = GrayImage::filled(width, height, fill);
    let mut y = gap;
    for row in rows {
        let mut x = gap;
        for img in row {
            grid.blit(img, x, y);
            x += img.width() + gap;
        }
        y += row_height(row) + gap;
    }
    Some(grid)
}
