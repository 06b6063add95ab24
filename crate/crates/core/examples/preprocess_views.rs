//! Run the preprocessing chain on one signature and write the four views.
//!
//! With no argument a synthetic signature is rendered first.
//!
//! Run: `cargo run --example preprocess_views [-- IMAGE.pgm]`

use std::path::PathBuf;

use sigfuse::imaging::{preprocess, read_image, write_pgm, PreprocessConfig};
use sigfuse::workbench::synth::render_subject_sample;
use sigfuse::workbench::SynthParams;

fn main() -> sigfuse::Result<()> {
    let raw = match std::env::args().nth(1) {
        Some(path) => read_image(path)?,
        None => render_subject_sample(&SynthParams::default(), 0, 0),
    };
    let cfg = PreprocessConfig::default();
    let views = preprocess(&raw, &cfg)?;

    let out = std::env::temp_dir().join("sigfuse-views");
    let files: [(&str, PathBuf); 4] = [
        ("gray", out.join("gray.pgm")),
        ("binary", out.join("binary.pgm")),
        ("thinned", out.join("thinned.pgm")),
        ("hpr", out.join("hpr.pgm")),
    ];
    write_pgm(&files[0].1, &views.gray)?;
    write_pgm(&files[1].1, &views.binary.to_gray())?;
    write_pgm(&files[2].1, &views.thinned.to_gray())?;
    write_pgm(&files[3].1, &views.hpr.to_gray())?;

    println!("input {}x{} -> frame {}x{}", raw.width(), raw.height(), views.width(), views.height());
    println!("ink pixels: binary {}, skeleton {}, high pressure {}",
        views.binary.count_ink(), views.thinned.count_ink(), views.hpr.count_ink());
    for (name, path) in &files {
        println!("{name:>8}: {}", path.display());
    }
    Ok(())
}
