//! Extract the 173-feature vector of a signature and print the global part.
//!
//! Run: `cargo run --example extract_features [-- IMAGE.pgm]`

use sigfuse::features::{extract, feature_names, FeatureConfig, N_GLOBAL};
use sigfuse::imaging::{preprocess, read_image, PreprocessConfig};
use sigfuse::workbench::synth::render_subject_sample;
use sigfuse::workbench::SynthParams;

fn main() -> sigfuse::Result<()> {
    let raw = match std::env::args().nth(1) {
        Some(path) => read_image(path)?,
        None => render_subject_sample(&SynthParams::default(), 1, 0),
    };
    let views = preprocess(&raw, &PreprocessConfig::default())?;
    let v = extract(&views, &FeatureConfig::default())?;

    for (name, value) in feature_names().zip(v.values()).take(N_GLOBAL) {
        println!("{name:>22} {value:>10.3}");
    }
    // first grid cell, to show the local layout
    for (name, value) in feature_names().zip(v.values()).skip(N_GLOBAL).take(6) {
        println!("{name:>22} {value:>10.3}");
    }
    println!("... {} features in total (schema {})", v.values().len(), v.schema_id());
    Ok(())
}
