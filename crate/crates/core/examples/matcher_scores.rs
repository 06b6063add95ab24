//! Enroll one subject from six synthetic samples and score a genuine query
//! and another subject's signature with the three matchers.
//!
//! Run: `cargo run --example matcher_scores`

use sigfuse::features::{extract, FeatureConfig, FeatureVector};
use sigfuse::imaging::{preprocess, PreprocessConfig};
use sigfuse::matchers::{fit_subject_stats, score_triple, MatcherConfig};
use sigfuse::workbench::synth::render_subject_sample;
use sigfuse::workbench::SynthParams;

fn features(params: &SynthParams, subject: usize, sample: u64) -> sigfuse::Result<FeatureVector> {
    let views = preprocess(&render_subject_sample(params, subject, sample), &PreprocessConfig::default())?;
    extract(&views, &FeatureConfig::default())
}

fn main() -> sigfuse::Result<()> {
    let params = SynthParams::default();
    let cfg = MatcherConfig::default();
    let templates = (0..6)
        .map(|k| features(&params, 5, k))
        .collect::<sigfuse::Result<Vec<_>>>()?;
    let stats = fit_subject_stats("s005", &templates, &cfg)?;

    for (label, q) in [("genuine", features(&params, 5, 7)?), ("other subject", features(&params, 9, 7)?)] {
        let t = score_triple(&q, &stats, &cfg)?;
        println!(
            "{label:>14}: ED {:>9.4} (s={:.4})  MD {:>9.2} (s={:.4})  within 3 sd {:>3}/173 (s={:.4})",
            t.raw_ed, t.s_ed, t.raw_md, t.s_md, t.raw_ge, t.s_ge
        );
    }
    Ok(())
}
