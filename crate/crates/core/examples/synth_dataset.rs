//! Render a small synthetic corpus, audit its manifest and print the layout.
//!
//! Run: `cargo run --example synth_dataset [-- OUT_DIR]`

use std::path::PathBuf;

use sigfuse::workbench::{synth_dataset, SynthParams};

fn main() -> sigfuse::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sigfuse-synth"));
    let params = SynthParams {
        n_subjects: 8,
        ..SynthParams::default()
    };
    let manifest = synth_dataset(&params, &out)?;
    manifest.audit(&out)?;
    println!(
        "{} subjects, {} genuine + {} forged images in {}",
        manifest.subjects.len(),
        manifest.n_genuine(),
        manifest.n_files() - manifest.n_genuine(),
        out.display()
    );
    for s in manifest.subjects.iter().take(3) {
        let forgers: Vec<&str> = s.forgeries.iter().map(|f| f.forger.as_str()).collect();
        println!(
            "{}: enroll {:?}, test {:?}, forged by {:?}",
            s.id, s.enroll, s.test, forgers
        );
    }
    Ok(())
}
