//! Ink/paper appearance: Otsu segmentation of reference images, Gaussian
//! intensity statistics, per-pixel resampling and smoothing.

pub mod image;
pub mod model;
pub mod otsu;
pub mod smooth;

pub use self::image::GrayImage;
pub use model::{apply_pixel_model, estimate_pixel_model, load_reference_dir, PixelModel};
pub use otsu::otsu_threshold;
pub use smooth::{gaussian_kernel, gaussian_smooth};
