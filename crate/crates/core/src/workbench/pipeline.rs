//! End-to-end benchmark: manifest -> features -> gallery + fusion model -> report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::RunConfig;
use super::persist;
use super::synth::DatasetManifest;
use crate::error::Result;
use crate::features::{extract, FeatureVector};
use crate::fusion::{prune_dependent_svs, train, training_samples, SvmModel};
use crate::identification::{enroll, evaluate, Gallery, LabeledQuery, Report};
use crate::imaging::{preprocess, read_image};

pub fn features_for_image(path: &Path, cfg: &RunConfig) -> Result<FeatureVector> {
    let raw = read_image(path)?;
    let views = preprocess(&raw, &cfg.preprocess)?;
    extract(&views, &cfg.features)
}

/// Load a manifest and return it with the directory its paths resolve against.
pub fn load_manifest(path: &Path) -> Result<(DatasetManifest, PathBuf)> {
    let manifest: DatasetManifest = persist::load(path)?;
    let dir = path.parent().unwrap_or(Path::new(".")).join(&manifest.root);
    Ok((manifest, dir))
}

#[derive(Debug, Clone)]
pub struct DatasetFeatures {
    pub enroll: BTreeMap<String, Vec<FeatureVector>>,
    pub genuine_tests: Vec<LabeledQuery>,
    pub forgeries: Vec<LabeledQuery>,
}

/// Preprocess and extract every file listed in the manifest, and nothing else.
pub fn extract_dataset(manifest: &DatasetManifest, dir: &Path, cfg: &RunConfig) -> Result<DatasetFeatures> {
    let jobs: Vec<(usize, u8, &str)> = manifest
        .subjects
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            s.enroll
                .iter()
                .map(move |f| (i, 0u8, f.as_str()))
                .chain(s.test.iter().map(move |f| (i, 1u8, f.as_str())))
                .chain(s.forgeries.iter().map(move |f| (i, 2u8, f.file.as_str())))
        })
        .collect();
    let vectors: Vec<FeatureVector> = jobs
        .par_iter()
        .map(|(_, _, f)| features_for_image(&dir.join(f), cfg))
        .collect::<Result<_>>()?;

    let mut out = DatasetFeatures {
        enroll: BTreeMap::new(),
        genuine_tests: Vec::new(),
        forgeries: Vec::new(),
    };
    for ((i, kind, _), fv) in jobs.into_iter().zip(vectors) {
        let subject = manifest.subjects[i].id.clone();
        match kind {
            0 => out.enroll.entry(subject).or_default().push(fv),
            1 => out.genuine_tests.push(LabeledQuery { subject, features: fv }),
            _ => out.forgeries.push(LabeledQuery { subject, features: fv }),
        }
    }
    Ok(out)
}

pub fn build_gallery(data: &DatasetFeatures, cfg: &RunConfig) -> Result<Gallery> {
    enroll(&data.enroll, &cfg.matcher)
}

pub fn train_fusion(data: &DatasetFeatures, cfg: &RunConfig) -> Result<SvmModel> {
    let samples = training_samples(&data.enroll, &cfg.matcher, cfg.fusion.neg_per_pos, cfg.svm.seed)?;
    log::info!("training fusion SVM on {} score vectors", samples.len());
    let model = train(&samples, &cfg.svm)?;
    Ok(if cfg.fusion.prune {
        prune_dependent_svs(&model, cfg.fusion.prune_eps)
    } else {
        model
    })
}

#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    pub gallery: Gallery,
    pub model: SvmModel,
    pub report: Report,
}

pub fn run_on_features(data: &DatasetFeatures, cfg: &RunConfig) -> Result<BenchmarkRun> {
    let gallery = build_gallery(data, cfg)?;
    let model = train_fusion(data, cfg)?;
    let report = evaluate(&gallery, &model, &data.genuine_tests, &data.forgeries)?;
    Ok(BenchmarkRun { gallery, model, report })
}

pub fn run_benchmark(manifest_path: &Path, cfg: &RunConfig) -> Result<BenchmarkRun> {
    cfg.validate()?;
    let (manifest, dir) = load_manifest(manifest_path)?;
    let data = extract_dataset(&manifest, &dir, cfg)?;
    run_on_features(&data, cfg)
}
