//! Configuration, synthetic data, persistence, the benchmark pipeline and the CLI.

pub mod cli;
mod config;
pub mod persist;
pub mod pipeline;
pub mod synth;

pub use config::{EvalConfig, FusionConfig, RunConfig, CONFIG_ENV};
pub use persist::{load, save, Persist};
pub use pipeline::{run_benchmark, BenchmarkRun, DatasetFeatures};
pub use synth::{plan_dataset, synth_dataset, DatasetManifest, ForgeryEntry, SubjectEntry, SynthParams};
