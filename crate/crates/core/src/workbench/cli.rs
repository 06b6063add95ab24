//! Command-line front end. The `sigfuse` binary is a thin wrapper over [`run_cli`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{RunConfig, CONFIG_ENV};
use super::persist::{self, write_atomic};
use super::pipeline::{self, features_for_image};
use super::synth::{synth_dataset, SynthParams};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::fusion::SvmModel;
use crate::identification::{cmc_csv, identify, render_cmc_svg, Gallery};
use crate::imaging::{preprocess, read_image, write_pgm};

#[derive(Debug, Parser)]
#[command(name = "sigfuse", version, about = "Offline signature identification with SVM score fusion")]
struct Cli {
    /// JSON run configuration; falls back to $SIGFUSE_CONFIG, then built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct SvmOverrides {
    /// SVM box constraint.
    #[arg(long = "svm-c")]
    c: Option<f64>,
    /// KKT tolerance.
    #[arg(long = "svm-tol")]
    tol: Option<f64>,
    /// Iteration budget in passes over the training set.
    #[arg(long = "svm-max-iters")]
    max_iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a synthetic signature corpus and its manifest.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 40)]
        subjects: usize,
        #[arg(long, default_value_t = 9)]
        genuine: usize,
        #[arg(long, default_value_t = 3)]
        forgeries: usize,
        #[arg(long, default_value_t = 6)]
        enroll: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Write the gray, binary, thinned and HPR views of one image as PGM files.
    Preprocess {
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract feature vectors to CSV (subject id + 173 features).
    Extract {
        images: Vec<PathBuf>,
        /// Subject id written in the first column for loose images.
        #[arg(long, default_value = "unknown")]
        subject: String,
        /// Extract every file of a dataset manifest instead.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit per-subject statistics from the manifest's enrollment split.
    Enroll {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the fusion SVM from the manifest's enrollment split.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        svm: SvmOverrides,
    },
    /// Rank every enrolled subject for one query image.
    Identify {
        query: PathBuf,
        #[arg(long)]
        gallery: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Show only the best N subjects.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Full benchmark: report JSON, CMC CSV and SVG plot.
    Evaluate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        svm: SvmOverrides,
    },
}

/// Parse `argv` (including the program name) and run. Returns the exit code.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 2,
        Error::BadParameter(_) | Error::BadWindow(_) => 2,
        _ => 1,
    }
}

fn resolve_config(explicit: Option<&Path>) -> Result<RunConfig> {
    let from_env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let cfg = match explicit.map(Path::to_path_buf).or(from_env) {
        Some(p) => RunConfig::from_json_file(&p)?,
        None => RunConfig::default(),
    };
    Ok(cfg)
}

impl SvmOverrides {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(c) = self.c {
            cfg.svm.c = c;
        }
        if let Some(t) = self.tol {
            cfg.svm.tol = t;
        }
        if let Some(m) = self.max_iters {
            cfg.svm.max_iters = m;
        }
        if let Some(s) = self.seed {
            cfg.svm.seed = s;
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let mut cfg = resolve_config(cli.config.as_deref())?;
    if let Command::Train { svm, .. } | Command::Evaluate { svm, .. } = &cli.command {
        svm.apply(&mut cfg);
    }
    cfg.validate()?;
    log::info!(
        "resolved config: {}",
        serde_json::to_string(&cfg).expect("config serializes")
    );
    let wr = |e: std::io::Error| Error::io("<stdout>", e);

    match cli.command {
        Command::Synth {
            out: dir,
            subjects,
            genuine,
            forgeries,
            enroll,
            seed,
        } => {
            let params = SynthParams {
                n_subjects: subjects,
                genuine_per_subject: genuine,
                forgeries_per_subject: forgeries,
                enroll_per_subject: enroll,
                seed,
                ..SynthParams::default()
            };
            let m = synth_dataset(&params, &dir)?;
            writeln!(out, "wrote {} images for {} subjects to {}", m.n_files(), m.subjects.len(), dir.display())
                .map_err(wr)?;
        }
        Command::Preprocess { image, out: dir } => {
            let views = preprocess(&read_image(&image)?, &cfg.preprocess)?;
            write_pgm(dir.join("gray.pgm"), &views.gray)?;
            write_pgm(dir.join("binary.pgm"), &views.binary.to_gray())?;
            write_pgm(dir.join("thinned.pgm"), &views.thinned.to_gray())?;
            write_pgm(dir.join("hpr.pgm"), &views.hpr.to_gray())?;
            writeln!(out, "wrote 4 views ({}x{}) to {}", views.width(), views.height(), dir.display())
                .map_err(wr)?;
        }
        Command::Extract {
            images,
            subject,
            manifest,
            out: csv_path,
        } => {
            let rows: Vec<(String, FeatureVector)> = match manifest {
                Some(m) => {
                    let (manifest, dir) = pipeline::load_manifest(&m)?;
                    let mut rows = Vec::new();
                    for s in &manifest.subjects {
                        for f in s.enroll.iter().chain(&s.test) {
                            rows.push((s.id.clone(), features_for_image(&dir.join(f), &cfg)?));
                        }
                    }
                    rows
                }
                None => {
                    if images.is_empty() {
                        return Err(Error::BadParameter("no input images given".into()));
                    }
                    images
                        .iter()
                        .map(|p| Ok((subject.clone(), features_for_image(p, &cfg)?)))
                        .collect::<Result<_>>()?
                }
            };
            write_feature_csv(&csv_path, &rows)?;
            writeln!(out, "wrote {} feature rows to {}", rows.len(), csv_path.display()).map_err(wr)?;
        }
        Command::Enroll { manifest, out: path } => {
            let (m, dir) = pipeline::load_manifest(&manifest)?;
            let data = pipeline::extract_dataset(&m, &dir, &cfg)?;
            let gallery = pipeline::build_gallery(&data, &cfg)?;
            persist::save(&gallery, &path)?;
            writeln!(out, "enrolled {} subjects into {}", gallery.len(), path.display()).map_err(wr)?;
        }
        Command::Train { manifest, out: path, .. } => {
            let (m, dir) = pipeline::load_manifest(&manifest)?;
            let data = pipeline::extract_dataset(&m, &dir, &cfg)?;
            let model = pipeline::train_fusion(&data, &cfg)?;
            persist::save(&model, &path)?;
            writeln!(
                out,
                "trained on {} samples: {} support vectors, converged = {}",
                model.meta.n_samples,
                model.n_support(),
                model.meta.converged
            )
            .map_err(wr)?;
        }
        Command::Identify {
            query,
            gallery,
            model,
            top,
        } => {
            let gallery: Gallery = persist::load(&gallery)?;
            let model: SvmModel = persist::load(&model)?;
            let q = features_for_image(&query, &cfg)?;
            let ranked = identify(&gallery, &model, &q)?;
            let n = top.unwrap_or(ranked.entries.len());
            for (rank, (id, score)) in ranked.entries.iter().take(n).enumerate() {
                writeln!(out, "{}\t{}\t{:.6}", rank + 1, id, score).map_err(wr)?;
            }
        }
        Command::Evaluate { manifest, out: dir, .. } => {
            let run = pipeline::run_benchmark(&manifest, &cfg)?;
            persist::save(&run.report, dir.join("report.json"))?;
            persist::save(&run.model, dir.join("model.json"))?;
            persist::save(&cfg, dir.join("run_config.json"))?;
            write_atomic(&dir.join("cmc.csv"), cmc_csv(&run.report).as_bytes())?;
            write_atomic(&dir.join("cmc.svg"), render_cmc_svg(&run.report).as_bytes())?;
            let r = &run.report;
            writeln!(
                out,
                "rank-1 identification: fused {:.4}, euclidean {:.4}, mahalanobis {:.4}, empirical {:.4}",
                r.fused.rank1_rate, r.euclidean.rank1_rate, r.mahalanobis.rank1_rate, r.empirical.rank1_rate
            )
            .map_err(wr)?;
        }
    }
    Ok(())
}

fn write_feature_csv(path: &Path, rows: &[(String, FeatureVector)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::BadParameter(format!("csv: {e}"));
    w.write_record(FeatureVector::csv_header()).map_err(csv_err)?;
    for (subject, fv) in rows {
        w.write_record(fv.csv_record(subject)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::BadParameter(format!("csv: {e}")))?;
    write_atomic(path, &bytes)
}
