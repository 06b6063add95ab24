//! Enroll a small synthetic gallery, train the fusion model and rank every
//! subject for one genuine query and one skilled forgery.
//!
//! Run: `cargo run --release --example identify_query`

use sigfuse::identification::{identify, rank_of};
use sigfuse::workbench::pipeline::{build_gallery, extract_dataset, load_manifest, train_fusion};
use sigfuse::workbench::{synth_dataset, RunConfig, SynthParams};

fn main() -> sigfuse::Result<()> {
    let dir = std::env::temp_dir().join("sigfuse-identify");
    let params = SynthParams {
        n_subjects: 12,
        ..SynthParams::default()
    };
    synth_dataset(&params, &dir)?;
    let cfg = RunConfig::default();
    let (manifest, root) = load_manifest(&dir.join("manifest.json"))?;
    let data = extract_dataset(&manifest, &root, &cfg)?;
    let gallery = build_gallery(&data, &cfg)?;
    let model = train_fusion(&data, &cfg)?;

    let genuine = &data.genuine_tests[0];
    let ranked = identify(&gallery, &model, &genuine.features)?;
    println!("genuine query of {}:", genuine.subject);
    for (rank, (id, fs)) in ranked.entries.iter().take(5).enumerate() {
        println!("  {:>2}. {id} FS = {fs:+.4}", rank + 1);
    }
    println!("  true subject at rank {}", rank_of(&ranked, &genuine.subject)?);

    if let Some(forgery) = data.forgeries.first() {
        let ranked = identify(&gallery, &model, &forgery.features)?;
        println!(
            "forgery targeting {}: ranked {} (top is {})",
            forgery.subject,
            rank_of(&ranked, &forgery.subject)?,
            ranked.top().unwrap_or("-")
        );
    }
    Ok(())
}
