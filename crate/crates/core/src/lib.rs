//! Synthetic handwritten word-image generation from font collections.
//!
//! The pipeline renders each vocabulary word in many fonts, varies kerning and
//! stroke width, paints ink and paper with a Gaussian pixel model, smooths,
//! applies a random rotation/shear and pads. Every sample is a pure function
//! of the master seed and its index, so corpora reproduce byte for byte.

pub mod analytics;
pub mod appearance;
pub mod corpus;
pub mod digest;
pub mod error;
pub mod font_catalog;
pub mod geometry;
pub mod stream;
pub mod typesetter;

pub use appearance::{
    apply_pixel_model, estimate_pixel_model, gaussian_smooth, load_reference_dir, otsu_threshold, GrayImage, PixelModel,
};
pub use error::{Error, ErrorKind, Result};
pub use font_catalog::{scan_fonts, FontCatalog, FontEntry, FontFace};
pub use geometry::{apply_affine, pad, sample_augment, AugmentConfig, AugmentParams, Padding, ShearUnit};
pub use stream::RandomStream;
pub use typesetter::{adjust_stroke, layout, rasterize, render_word, BinaryMask, RenderSpec};
