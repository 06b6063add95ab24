//! Offline signature identification by score-level fusion.
//!
//! A scanned signature is normalized and cleaned into four views (gray,
//! binary, skeleton, high-pressure region), reduced to a fixed vector of
//! 173 geometric features, and compared with every enrolled subject by
//! three statistical matchers. A linear SVM fuses the three scores, and
//! subjects are ranked by the fused score.
//!
//! ```no_run
//! use sigfuse::workbench::{run_benchmark, synth_dataset, RunConfig, SynthParams};
//! # fn main() -> sigfuse::Result<()> {
//! let dir = std::path::Path::new("bench");
//! synth_dataset(&SynthParams::default(), dir)?;
//! let run = run_benchmark(&dir.join("manifest.json"), &RunConfig::default())?;
//! println!("fused rank-1: {:.3}", run.report.fused.rank1_rate);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod features;
pub mod fusion;
pub mod identification;
pub mod imaging;
pub mod matchers;
pub mod workbench;

pub use error::{Error, Result};
