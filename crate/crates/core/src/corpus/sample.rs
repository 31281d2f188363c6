//! The end-to-end recipe for one image.

use crate::appearance::{apply_pixel_model, gaussian_smooth, GrayImage, PixelModel};
use crate::error::{Error, Result};
use crate::font_catalog::FontCatalog;
use crate::geometry::{apply_affine_with, pad, resize_to_height, sample_augment};
use crate::stream::RandomStream;
use crate::typesetter::{adjust_stroke, layout, rasterize, RenderSpec};

use super::config::GeneratorConfig;
use super::manifest::SampleRecord;
use super::plan::{sample_seed, PlanEntry};

/// Output-relative path of a sample's image.
pub fn image_relpath(sample_index: u64, shard_size: u64) -> String {
    format!("shard_{}/{}.png", sample_index / shard_size, sample_index)
}

/// Kerning in pixels: a uniform real over the configured range rounded half
/// away from zero, kept inside the integers of that range.
fn sample_kerning(config: &GeneratorConfig, stream: &mut RandomStream) -> i32 {
    let (lo, hi) = config.kerning_bounds_px();
    let v = stream.uniform_f64(lo, hi).round();
    let (int_lo, int_hi) = (lo.ceil(), hi.floor());
    let v = if int_lo <= int_hi { v.clamp(int_lo, int_hi) } else { v };
    v as i32
}

/// Draws the render parameters of a sample from its stream.
pub fn sample_render_spec(entry: &PlanEntry, config: &GeneratorConfig, stream: &mut RandomStream) -> RenderSpec {
    let kerning_px = sample_kerning(config, stream);
    let stroke_delta = stream.uniform_i64(config.render.stroke_min as i64, config.render.stroke_max as i64) as i32;
    RenderSpec { font_id: entry.font_id, font_size_px: config.render.font_size_px, kerning_px, stroke_delta }
}

/// Renders one planned sample.
///
/// All randomness comes from one stream seeded with
/// [`sample_seed`]`(master_seed, sample_index)`, consumed in this order:
/// kerning, stroke delta, ink/paper intensities, augmentation parameters,
/// affine fill, padding.
pub fn generate_sample(
    entry: &PlanEntry,
    word: &str,
    config: &GeneratorConfig,
    catalog: &FontCatalog,
    model: &PixelModel,
) -> Result<(GrayImage, SampleRecord)> {
    let seed = sample_seed(config.render.seed as u64, entry.sample_index);
    let mut stream = RandomStream::from_seed(seed);
    let font = catalog
        .get(entry.font_id)
        .ok_or_else(|| Error::Config(format!("font id {} is not in the catalog", entry.font_id)))?;

    let spec = sample_render_spec(entry, config, &mut stream);
    let placed = layout(word, font, &spec)?;
    let mask = rasterize(&placed.placements, font, spec.font_size_px)?;
    // Room for dilation so grown strokes are not clipped.
    let mask = mask.expanded(spec.stroke_delta.max(0) as u32);
    let mask = adjust_stroke(&mask, spec.stroke_delta);
    if mask.ink_count() == 0 {
        return Err(Error::ZeroInk);
    }

    let image = apply_pixel_model(&mask, model, &mut stream);
    let image = gaussian_smooth(&image, config.appearance.sigma)?;

    let augment = config.augment_config();
    let params = sample_augment(&augment, &mut stream)?;
    let image = apply_affine_with(&image, params.rotation_deg, params.shear, augment.shear_unit, || {
        model.sample_bg(&mut stream)
    });
    let image = pad(&image, &params.pad, model, &mut stream);
    let image = match config.output.normalize_height {
        0 => image,
        h => resize_to_height(&image, h),
    };

    let record = SampleRecord {
        sample_index: entry.sample_index,
        image_path: image_relpath(entry.sample_index, config.output.shard_size),
        label: word.to_string(),
        font_id: entry.font_id,
        font_size_px: spec.font_size_px,
        kerning_px: spec.kerning_px,
        stroke_delta: spec.stroke_delta,
        rotation_deg: params.rotation_deg,
        shear: params.shear,
        pad: params.pad,
        sample_seed: seed,
    };
    Ok((image, record))
}
