//! Generator configuration: a TOML document with five sections plus
//! `key=value` overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::appearance::PixelModel;
use crate::digest::fnv1a;
use crate::error::{Error, Result};
use crate::geometry::{check_range, AugmentConfig, ShearUnit};

/// Largest accepted stroke radius in either direction.
pub const MAX_STROKE_RADIUS: i32 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FontsSection {
    pub font_dir: PathBuf,
    pub recursive: bool,
    pub fonts_per_word: u32,
}

impl Default for FontsSection {
    fn default() -> Self {
        FontsSection { font_dir: "fonts".into(), recursive: false, fonts_per_word: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    pub vocabulary: PathBuf,
    pub seed: i64,
    pub font_size_px: u32,
    /// Kerning bounds as fractions of the em size.
    pub kern_min: f64,
    pub kern_max: f64,
    pub stroke_min: i32,
    pub stroke_max: i32,
}

impl Default for RenderSection {
    fn default() -> Self {
        RenderSection {
            vocabulary: "words.txt".into(),
            seed: 0,
            font_size_px: 64,
            kern_min: -0.05,
            kern_max: 0.15,
            stroke_min: -1,
            stroke_max: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppearanceSection {
    /// Model file written by `estimate`; when set it replaces the inline values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pixel_model: Option<PathBuf>,
    pub fg_mean: f64,
    pub fg_std: f64,
    pub bg_mean: f64,
    pub bg_std: f64,
    pub sigma: f64,
}

impl Default for AppearanceSection {
    fn default() -> Self {
        AppearanceSection { pixel_model: None, fg_mean: 60.0, fg_std: 8.0, bg_mean: 215.0, bg_std: 12.0, sigma: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentSection {
    pub rot_min: f64,
    pub rot_max: f64,
    pub shear_min: f64,
    pub shear_max: f64,
    pub shear_unit: ShearUnit,
    pub pad_max: u32,
}

impl Default for AugmentSection {
    fn default() -> Self {
        let d = AugmentConfig::default();
        AugmentSection {
            rot_min: d.rot_min,
            rot_max: d.rot_max,
            shear_min: d.shear_min,
            shear_max: d.shear_max,
            shear_unit: d.shear_unit,
            pad_max: d.pad_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub output_dir: PathBuf,
    pub shard_size: u64,
    pub format: String,
    /// Rescale every image to this height; 0 keeps the natural height.
    pub normalize_height: u32,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { output_dir: "out".into(), shard_size: 10_000, format: "png".into(), normalize_height: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub fonts: FontsSection,
    pub render: RenderSection,
    pub appearance: AppearanceSection,
    pub augment: AugmentSection,
    pub output: OutputSection,
}

/// Every configuration key: `(section, key, description)`.
pub const CONFIG_KEYS: &[(&str, &str, &str)] = &[
    ("fonts", "font_dir", "directory scanned for TrueType/OpenType fonts"),
    ("fonts", "recursive", "also scan subdirectories"),
    ("fonts", "fonts_per_word", "fonts sampled (images rendered) per word"),
    ("render", "vocabulary", "word list, one word per line"),
    ("render", "seed", "master seed"),
    ("render", "font_size_px", "nominal em size in pixels"),
    ("render", "kern_min", "lowest extra inter-character gap, fraction of em"),
    ("render", "kern_max", "highest extra inter-character gap, fraction of em"),
    ("render", "stroke_min", "lowest stroke radius change (negative thins)"),
    ("render", "stroke_max", "highest stroke radius change"),
    ("appearance", "pixel_model", "pixel model file; overrides the inline values"),
    ("appearance", "fg_mean", "ink intensity mean"),
    ("appearance", "fg_std", "ink intensity standard deviation"),
    ("appearance", "bg_mean", "paper intensity mean"),
    ("appearance", "bg_std", "paper intensity standard deviation"),
    ("appearance", "sigma", "Gaussian smoothing sigma in pixels"),
    ("augment", "rot_min", "lowest rotation, degrees"),
    ("augment", "rot_max", "highest rotation, degrees"),
    ("augment", "shear_min", "lowest horizontal shear"),
    ("augment", "shear_max", "highest horizontal shear"),
    ("augment", "shear_unit", "`degrees` (shear angle) or `factor`"),
    ("augment", "pad_max", "largest padding per side, pixels"),
    ("output", "output_dir", "output root"),
    ("output", "shard_size", "images per shard directory"),
    ("output", "format", "image format (png)"),
    ("output", "normalize_height", "rescale images to this height; 0 disables"),
];

impl GeneratorConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parses `text` and applies `key=value` overrides on top. Keys may be
    /// bare (`rot_max`) or qualified (`augment.rot_max`); values use TOML
    /// syntax, falling back to a plain string.
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let config: GeneratorConfig =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// FNV-1a of the canonical serialization.
    pub fn digest(&self) -> u64 {
        fnv1a(self.to_toml().as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        if self.fonts.fonts_per_word == 0 {
            return Err(Error::Config("fonts_per_word must be at least 1".into()));
        }
        if self.render.font_size_px == 0 {
            return Err(Error::Config("font_size_px must be positive".into()));
        }
        check_range("kerning", self.render.kern_min, self.render.kern_max)?;
        check_range("stroke", self.render.stroke_min as f64, self.render.stroke_max as f64)?;
        if self.render.stroke_min < -MAX_STROKE_RADIUS || self.render.stroke_max > MAX_STROKE_RADIUS {
            return Err(Error::Config(format!("stroke range must stay within ±{MAX_STROKE_RADIUS}")));
        }
        if !(self.appearance.sigma.is_finite() && self.appearance.sigma >= 0.0) {
            return Err(Error::Config(format!("sigma must be a non-negative number, got {}", self.appearance.sigma)));
        }
        if self.appearance.pixel_model.is_none() {
            self.inline_model()?;
        }
        self.augment_config().validate()?;
        if self.output.shard_size == 0 {
            return Err(Error::Config("shard_size must be at least 1".into()));
        }
        if self.output.format != "png" {
            return Err(Error::Config(format!("unsupported image format {:?}", self.output.format)));
        }
        Ok(())
    }

    pub fn augment_config(&self) -> AugmentConfig {
        let a = &self.augment;
        AugmentConfig {
            rot_min: a.rot_min,
            rot_max: a.rot_max,
            shear_min: a.shear_min,
            shear_max: a.shear_max,
            shear_unit: a.shear_unit,
            pad_max: a.pad_max,
        }
    }

    fn inline_model(&self) -> Result<PixelModel> {
        let a = &self.appearance;
        PixelModel::new(a.fg_mean, a.fg_std, a.bg_mean, a.bg_std, "manual")
    }

    /// The model file if configured, otherwise the inline parameters.
    pub fn pixel_model(&self) -> Result<PixelModel> {
        match &self.appearance.pixel_model {
            Some(path) => PixelModel::load(path),
            None => self.inline_model(),
        }
    }

    /// Kerning bounds in pixels for the configured em size.
    pub fn kerning_bounds_px(&self) -> (f64, f64) {
        let size = self.render.font_size_px as f64;
        (self.render.kern_min * size, self.render.kern_max * size)
    }

    /// Help text listing every key with its default value.
    pub fn describe_keys() -> String {
        let defaults = toml::Table::try_from(GeneratorConfig::default()).expect("defaults serialize");
        let mut out = String::new();
        let mut section = "";
        for &(sec, key, doc) in CONFIG_KEYS {
            if sec != section {
                out.push_str(&format!("[{sec}]\n"));
                section = sec;
            }
            let default =
                defaults.get(sec).and_then(|t| t.get(key)).map(|v| v.to_string()).unwrap_or_else(|| "(unset)".into());
            out.push_str(&format!("  {key} = {default}  # {doc}\n"));
        }
        out
    }
}

fn section_of(key: &str) -> Option<&'static str> {
    CONFIG_KEYS.iter().find(|(_, k, _)| *k == key).map(|(s, _, _)| *s)
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) =
        item.split_once('=').ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
    let key = key.trim();
    let (section, name) = match key.split_once('.') {
        Some((sec, name)) => {
            if !CONFIG_KEYS.iter().any(|(s, k, _)| *s == sec && *k == name) {
                return Err(Error::UnknownKey(key.to_string()));
            }
            (sec, name)
        }
        None => (section_of(key).ok_or_else(|| Error::UnknownKey(key.to_string()))?, key),
    };
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let sec = table.entry(section.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let sec = sec.as_table_mut().ok_or_else(|| Error::Config(format!("[{section}] is not a table")))?;
    sec.insert(name.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_mirror_reference_values() {
        let c = GeneratorConfig::default();
        assert_eq!(c.fonts.fonts_per_word, 100);
        assert_eq!((c.augment.rot_min, c.augment.rot_max), (-5.0, 5.0));
        assert_eq!((c.augment.shear_min, c.augment.shear_max), (-0.5, 0.5));
        assert_eq!(c.augment.shear_unit, ShearUnit::Degrees);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn empty_document_is_default() {
        assert_eq!(GeneratorConfig::from_toml("").unwrap(), GeneratorConfig::default());
    }

    #[test]
    fn overrides_match_file_values() {
        let from_file = GeneratorConfig::from_toml("[augment]\nrot_max = 3.0\nshear_unit = \"factor\"\n").unwrap();
        let from_flags = GeneratorConfig::from_toml_with_overrides(
            "",
            &["rot_max=3.0".to_string(), "augment.shear_unit=factor".to_string()],
        )
        .unwrap();
        assert_eq!(from_file, from_flags);
        assert_eq!(from_file.digest(), from_flags.digest());
    }

    #[test]
    fn unknown_override_names_key() {
        let err = GeneratorConfig::from_toml_with_overrides("", &["rotation_max=5".into()]).unwrap_err();
        assert!(matches!(&err, Error::UnknownKey(k) if k == "rotation_max"));
        let err = GeneratorConfig::from_toml_with_overrides("", &["render.rot_max=5".into()]).unwrap_err();
        assert!(matches!(err, Error::UnknownKey(_)));
    }

    #[test]
    fn unknown_file_key_rejected() {
        assert!(GeneratorConfig::from_toml("[augment]\nrotation_max = 1.0\n").is_err());
    }

    #[test]
    fn invalid_ranges_rejected() {
        assert!(GeneratorConfig::from_toml("[augment]\nrot_min = 2.0\nrot_max = 1.0\n").is_err());
        assert!(GeneratorConfig::from_toml("[fonts]\nfonts_per_word = 0\n").is_err());
        assert!(GeneratorConfig::from_toml("[output]\nshard_size = 0\n").is_err());
        assert!(GeneratorConfig::from_toml("[appearance]\nfg_mean = 230.0\nbg_mean = 20.0\n").is_err());
    }

    #[test]
    fn every_key_is_documented() {
        let defaults = toml::Table::try_from(GeneratorConfig::default()).unwrap();
        let mut serialized: Vec<(String, String)> = defaults
            .iter()
            .flat_map(|(s, t)| t.as_table().unwrap().keys().map(move |k| (s.clone(), k.clone())))
            .collect();
        serialized.push(("appearance".into(), "pixel_model".into()));
        serialized.sort();
        let mut documented: Vec<(String, String)> =
            CONFIG_KEYS.iter().map(|(s, k, _)| (s.to_string(), k.to_string())).collect();
        documented.sort();
        assert_eq!(serialized, documented);
        let help = GeneratorConfig::describe_keys();
        assert!(help.contains("rot_max = 5.0"));
        assert!(help.contains("fonts_per_word = 100"));
    }

    #[test]
    fn digest_tracks_effective_values() {
        let a = GeneratorConfig::default();
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.render.seed = 1;
        assert_ne!(a.digest(), b.digest());
    }
}
