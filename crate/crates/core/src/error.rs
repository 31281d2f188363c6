use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad configuration or invocation.
    Usage,
    /// Input data that cannot be processed.
    Data,
    /// Filesystem or encoding failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: not valid UTF-8", path.display())]
    Utf8 { path: PathBuf },
    #[error("{}: {message}", path.display())]
    Png { path: PathBuf, message: String },

    #[error("{}: {message}", path.display())]
    FontParse { path: PathBuf, message: String },
    #[error("no loadable fonts found")]
    EmptyCatalog,
    #[error("empty word")]
    EmptyWord,
    #[error("no font in the catalog covers {word:?}")]
    NoEligibleFont { word: String },
    #[error("font has no glyph for {0:?}")]
    MissingGlyph(char),
    #[error("word rasterized to no foreground pixels")]
    ZeroInk,
    #[error("invalid grid font: {0}")]
    GridFont(String),

    #[error("histogram has fewer than two distinct intensities")]
    DegenerateHistogram,
    #[error("no reference images supplied")]
    EmptyReference,
    #[error("every reference image was degenerate")]
    AllDegenerate,
    #[error("invalid pixel model: {0}")]
    InvalidModel(String),
    #[error("sigma must be non-negative, got {0}")]
    NegativeSigma(f64),

    #[error("invalid range for {name}: min {min} > max {max}")]
    InvalidRange { name: &'static str, min: f64, max: f64 },
    #[error("padding must be non-negative")]
    NegativePad,

    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("frequency table is empty")]
    EmptyTable,
    #[error("malformed manifest: {0}")]
    Manifest(String),

    #[error("configuration: {0}")]
    Config(String),
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. } => ErrorKind::Io,
            Error::Config(_) | Error::UnknownKey(_) | Error::InvalidRange { .. } => ErrorKind::Usage,
            _ => ErrorKind::Data,
        }
    }
}
