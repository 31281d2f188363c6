mod common;

use std::collections::HashSet;

use hwforge_core::corpus::{
    self, generate_sample, sample_seed, CorpusInputs, CorpusManifest, GeneratorConfig, INCOMPLETE_MARKER, MANIFEST_FILE,
};
use hwforge_core::typesetter::render_word;
use hwforge_core::{Error, ErrorKind, GrayImage, RenderSpec};

fn degenerate_geometry(config: &mut GeneratorConfig) {
    config.render.kern_min = 0.0;
    config.render.kern_max = 0.0;
    config.render.stroke_min = 0;
    config.render.stroke_max = 0;
    config.augment.rot_min = 0.0;
    config.augment.rot_max = 0.0;
    config.augment.shear_min = 0.0;
    config.augment.shear_max = 0.0;
}

#[test]
fn same_entry_renders_identically() {
    let dir = tempfile::tempdir().unwrap();
    let config = common::desk_setup(dir.path(), 4, 6, 3);
    let inputs = CorpusInputs::load(&config).unwrap();
    for entry in inputs.plan().entries() {
        let a = inputs.render(&entry).unwrap();
        let b = inputs.render(&entry).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        assert_eq!(a.1.sample_seed, sample_seed(7, entry.sample_index));
    }
}

#[test]
fn image_size_is_mask_plus_padding() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = common::desk_setup(dir.path(), 3, 10, 4);
    degenerate_geometry(&mut config);
    let inputs = CorpusInputs::load(&config).unwrap();
    for entry in inputs.plan().entries() {
        let word = &inputs.vocabulary.words()[entry.word_index as usize];
        let (image, record) = inputs.render(&entry).unwrap();
        let spec = RenderSpec { font_id: entry.font_id, font_size_px: 64, kerning_px: 0, stroke_delta: 0 };
        let mask = render_word(word, inputs.catalog.get(entry.font_id).unwrap(), &spec).unwrap();
        assert_eq!(image.width(), mask.width() + record.pad.left + record.pad.right);
        assert_eq!(image.height(), mask.height() + record.pad.top + record.pad.bottom);
    }
}

#[test]
fn dilation_grows_the_canvas_by_its_radius() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = common::desk_setup(dir.path(), 2, 4, 2);
    degenerate_geometry(&mut config);
    config.render.stroke_min = 2;
    config.render.stroke_max = 2;
    config.augment.pad_max = 0;
    let inputs = CorpusInputs::load(&config).unwrap();
    for entry in inputs.plan().entries() {
        let word = &inputs.vocabulary.words()[entry.word_index as usize];
        let (image, record) = inputs.render(&entry).unwrap();
        assert_eq!(record.stroke_delta, 2);
        let spec = RenderSpec { font_id: entry.font_id, font_size_px: 64, kerning_px: 0, stroke_delta: 0 };
        let mask = render_word(word, inputs.catalog.get(entry.font_id).unwrap(), &spec).unwrap();
        assert_eq!((image.width(), image.height()), (mask.width() + 4, mask.height() + 4));
    }
}

#[test]
fn every_manifest_row_replays_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let config = common::desk_setup(dir.path(), 6, 12, 4);
    let summary = corpus::generate_corpus(&config, 3).unwrap();
    let out = &config.output.output_dir;
    let manifest = CorpusManifest::read(&out.join(MANIFEST_FILE)).unwrap();
    assert_eq!(manifest.records.len() as u64, summary.written);
    assert_eq!(manifest.header.config_digest, config.digest());

    let inputs = CorpusInputs::load(&config).unwrap();
    let plan = inputs.plan();
    for (i, record) in manifest.records.iter().enumerate() {
        assert_eq!(record.sample_index, i as u64);
        let entry = plan.entry(record.sample_index).unwrap();
        let (image, replayed) =
            generate_sample(&entry, &record.label, &config, &inputs.catalog, &inputs.model).unwrap();
        assert_eq!(replayed.to_row(), record.to_row());
        assert_eq!(GrayImage::read_png(&out.join(&record.image_path)).unwrap(), image);
    }
    assert!(!out.join(INCOMPLETE_MARKER).exists());
}

#[test]
fn shards_split_by_sample_index() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = common::desk_setup(dir.path(), 3, 7, 3);
    config.output.shard_size = 5;
    corpus::generate_corpus(&config, 2).unwrap();
    let out = &config.output.output_dir;
    let manifest = CorpusManifest::read(&out.join(MANIFEST_FILE)).unwrap();
    for r in &manifest.records {
        assert_eq!(r.image_path, format!("shard_{}/{}.png", r.sample_index / 5, r.sample_index));
        assert!(out.join(&r.image_path).is_file());
    }
    assert!(out.join("shard_4").is_dir());
    assert!(!out.join("shard_5").exists());
}

#[test]
fn uncovered_words_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let config = common::desk_setup(dir.path(), 3, 4, 2);
    let mut words = std::fs::read_to_string(&config.render.vocabulary).unwrap();
    words.push_str("\n∑x\nnaïve\n");
    std::fs::write(&config.render.vocabulary, words).unwrap();
    let summary = corpus::generate_corpus(&config, 1).unwrap();
    assert_eq!(summary.planned, 8);
    assert_eq!(summary.written, 8);
    let skipped: Vec<&str> = summary.skipped_words.iter().map(|(_, w)| w.as_str()).collect();
    assert_eq!(skipped, ["∑x", "naïve"]);
}

#[test]
fn inkless_words_are_zero_ink() {
    let dir = tempfile::tempdir().unwrap();
    let config = common::desk_setup(dir.path(), 2, 1, 2);
    let inputs = CorpusInputs::load(&config).unwrap();
    let entry = inputs.plan().entries().next().unwrap();
    assert!(inputs.catalog.get(entry.font_id).unwrap().covers("  ").unwrap());
    let result = generate_sample(&entry, "  ", &config, &inputs.catalog, &inputs.model);
    assert!(matches!(result, Err(Error::ZeroInk)));
}

#[test]
fn io_failure_leaves_the_incomplete_marker() {
    let dir = tempfile::tempdir().unwrap();
    let config = common::desk_setup(dir.path(), 2, 3, 2);
    let out = &config.output.output_dir;
    std::fs::create_dir_all(out).unwrap();
    std::fs::write(out.join("shard_0"), b"a file where a shard directory belongs").unwrap();
    let err = corpus::generate_corpus(&config, 1).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Io);
    assert!(out.join(INCOMPLETE_MARKER).exists());
}

#[test]
fn bad_inputs_fail_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = common::desk_setup(dir.path(), 2, 3, 2);
    config.render.vocabulary = dir.path().join("missing.txt");
    assert!(matches!(corpus::generate_corpus(&config, 1), Err(Error::Io { .. })));
    assert!(!config.output.output_dir.exists());

    let mut config = common::desk_setup(dir.path(), 2, 3, 2);
    config.appearance.pixel_model = Some(dir.path().join("no_model.txt"));
    assert!(corpus::generate_corpus(&config, 1).is_err());
    assert!(!config.output.output_dir.exists());

    let mut config = common::desk_setup(dir.path(), 2, 3, 2);
    config.augment.rot_min = 9.0;
    assert_eq!(corpus::generate_corpus(&config, 1).unwrap_err().kind(), ErrorKind::Usage);
    assert!(!config.output.output_dir.exists());
}

#[test]
fn pixel_model_file_drives_intensities() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = common::desk_setup(dir.path(), 2, 3, 2);
    let model = hwforge_core::PixelModel::new(30.0, 0.0, 240.0, 0.0, "file").unwrap();
    let path = dir.path().join("model.txt");
    model.save(&path).unwrap();
    config.appearance.pixel_model = Some(path);
    config.appearance.sigma = 0.0;
    degenerate_geometry(&mut config);
    let inputs = CorpusInputs::load(&config).unwrap();
    let (image, _) = inputs.render(&inputs.plan().entries().next().unwrap()).unwrap();
    let values: HashSet<u8> = image.pixels().iter().copied().collect();
    assert_eq!(values, HashSet::from([30, 240]));
}

#[test]
fn sample_seeds_do_not_collide() {
    for master in [0u64, 7, u64::MAX] {
        let mut seen = HashSet::with_capacity(1_000_000);
        for i in 0..1_000_000u64 {
            assert!(seen.insert(sample_seed(master, i)), "collision at master {master} index {i}");
        }
    }
}

#[test]
fn sample_seed_matches_splitmix64_reference() {
    // First outputs of the SplitMix64 generator seeded with 0; the seed of
    // index i under master 0 is the (i+1)-th output.
    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    let mut state = 0u64;
    assert_eq!(splitmix(&mut state), 0xE220_A839_7B1D_CDAF);
    let mut state = 0u64;
    for i in 0..1000 {
        assert_eq!(sample_seed(0, i), splitmix(&mut state));
    }
}
