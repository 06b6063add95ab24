//! Desk-scale benchmark: render the synthetic corpus, enroll 6 samples per
//! subject, train the fusion SVM and print rank-1 rates plus the CMC head.
//!
//! Run: `cargo run --release --example cmc_benchmark [-- OUT_DIR]`

use std::path::PathBuf;
use std::time::Instant;

use sigfuse::identification::{cmc_csv, render_cmc_svg};
use sigfuse::workbench::{run_benchmark, synth_dataset, RunConfig, SynthParams};

fn main() -> sigfuse::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sigfuse-benchmark"));
    let t0 = Instant::now();
    let params = SynthParams::default();
    let manifest = synth_dataset(&params, &out)?;
    println!("rendered {} images in {:.1?}", manifest.n_files(), t0.elapsed());

    let t1 = Instant::now();
    let run = run_benchmark(&out.join("manifest.json"), &RunConfig::default())?;
    println!("pipeline finished in {:.1?}", t1.elapsed());

    let r = &run.report;
    println!("subjects {}, genuine queries {}", r.n_subjects, r.n_genuine_queries);
    println!("rank-1  fused       {:.4}", r.fused.rank1_rate);
    println!("rank-1  euclidean   {:.4}", r.euclidean.rank1_rate);
    println!("rank-1  mahalanobis {:.4}", r.mahalanobis.rank1_rate);
    println!("rank-1  empirical   {:.4}", r.empirical.rank1_rate);
    if let Some(f) = &r.forgery {
        println!(
            "skilled forgeries ranked first for their target: fused {:.4} of {}",
            f.fused_rank1_rate, f.n_queries
        );
    }
    println!("fusion weights w = {:?}, b = {:.4}", run.model.weight_vector(), run.model.bias);

    let csv = cmc_csv(r);
    for line in csv.lines().take(6) {
        println!("{line}");
    }
    std::fs::write(out.join("cmc.csv"), csv).expect("write cmc.csv");
    std::fs::write(out.join("cmc.svg"), render_cmc_svg(r)).expect("write cmc.svg");
    println!("CMC written to {}", out.display());
    Ok(())
}
