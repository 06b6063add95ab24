//! Acceptance suite. Prints one `[PASS]` / `[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    between_class, exhaustive_best, fitted_stats, fv, oracle_ed, oracle_ge, oracle_md, random_blob, random_stats,
    random_vector, separable_set,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use sigfuse::features::N_FEATURES;
use sigfuse::fusion::{kkt_audit, prune_dependent_svs, train, train_with_duals, FusionSample, SvmParams};
use sigfuse::identification::Report;
use sigfuse::imaging::{extract_hpr, otsu_threshold, preprocess, thin, PreprocessConfig};
use sigfuse::matchers::{
    empirical_match_count, euclidean_distance, mahalanobis_distance, CovKind, MatcherConfig,
};
use sigfuse::workbench::persist::to_bytes;
use sigfuse::workbench::synth::render_subject_sample;
use sigfuse::workbench::{run_benchmark, synth_dataset, BenchmarkRun, RunConfig, SynthParams};
use tempfile::TempDir;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Render the default desk corpus and run the whole pipeline on it.
fn desk_run() -> (BenchmarkRun, Duration) {
    let t0 = Instant::now();
    let dir = TempDir::new().expect("temp dir");
    synth_dataset(&SynthParams::default(), dir.path()).expect("synth");
    let run = run_benchmark(&dir.path().join("manifest.json"), &RunConfig::default()).expect("benchmark");
    (run, t0.elapsed())
}

fn probe_grid() -> Vec<[f64; 3]> {
    let steps = (0..=10).map(|i| i as f64 / 10.0);
    let mut out = Vec::with_capacity(1331);
    for a in steps.clone() {
        for b in steps.clone() {
            for c in steps.clone() {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn c1_fusion_dominance(run: &BenchmarkRun, elapsed: Duration) -> Outcome {
    let r = &run.report;
    let singles = [r.euclidean.rank1_rate, r.mahalanobis.rank1_rate, r.empirical.rank1_rate];
    let best = singles.iter().cloned().fold(f64::MIN, f64::max);
    let mean = singles.iter().sum::<f64>() / 3.0;
    let fused = r.fused.rank1_rate;
    let pass = fused >= best - 0.01 && fused > mean && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "fused {fused:.4} vs ED {:.4} / MD {:.4} / GE {:.4} (max {best:.4}, mean {mean:.4}); {:.1}s",
            singles[0],
            singles[1],
            singles[2],
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let shrunk = MatcherConfig {
        cov_model: CovKind::ShrunkFull,
        ..MatcherConfig::default()
    };
    let mut worst: f64 = 0.0;
    let mut ge_mismatch = 0;
    for i in 0..1000 {
        // every tenth pair uses the shrunk full covariance
        let s = if i % 10 == 9 {
            fitted_stats(&mut rng, &shrunk, 6)
        } else {
            random_stats(&mut rng, i % 2 == 0)
        };
        let q = random_vector(&mut rng);
        let qv = fv(q.clone());
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max(rel(euclidean_distance(&qv, &s).unwrap(), oracle_ed(&q, &s)));
        worst = worst.max(rel(mahalanobis_distance(&qv, &s).unwrap(), oracle_md(&q, &s)));
        for k in 1..=3 {
            if empirical_match_count(&qv, &s, k).unwrap() != oracle_ge(&q, &s, k) {
                ge_mismatch += 1;
            }
        }
    }
    outcome(
        worst <= 1e-9 && ge_mismatch == 0,
        format!("1000 pairs: worst relative error {worst:.2e}, empirical mismatches {ge_mismatch}"),
    )
}

fn c3_mahalanobis_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let root_n = (N_FEATURES as f64).sqrt();
    let mut worst: f64 = 0.0;
    let mut ratio = 0.0;
    for _ in 0..100 {
        let s = random_stats(&mut rng, true);
        let q = fv(random_vector(&mut rng));
        let ed = euclidean_distance(&q, &s).unwrap();
        let md = mahalanobis_distance(&q, &s).unwrap();
        worst = worst.max((md - root_n * ed).abs() / md.max(f64::MIN_POSITIVE));
        ratio = md / ed;
    }
    outcome(
        worst <= 1e-9,
        format!(
            "100 pairs: MD/ED = {ratio:.6} (sqrt(173) = {root_n:.6}); worst relative deviation from sqrt(173)*ED {worst:.3e}"
        ),
    )
}

fn c4_gaussian_rule() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let s = random_stats(&mut rng, true);
    let normals: Vec<Normal<f64>> = s
        .mean
        .iter()
        .zip(&s.std)
        .map(|(&m, &sd)| Normal::new(m, sd).unwrap())
        .collect();
    // 10^5 per-feature draws, packed into query vectors
    let n_queries = 100_000usize.div_ceil(N_FEATURES);
    let mut hits = [0u64; 3];
    for _ in 0..n_queries {
        let q = fv(normals.iter().map(|n| n.sample(&mut rng)).collect());
        for k in 1..=3u8 {
            hits[k as usize - 1] += empirical_match_count(&q, &s, k).unwrap() as u64;
        }
    }
    let total = (n_queries * N_FEATURES) as f64;
    let freq: Vec<f64> = hits.iter().map(|&h| h as f64 / total).collect();
    let target = [0.68, 0.95, 0.997];
    let pass = freq.iter().zip(target).all(|(f, t)| (f - t).abs() <= 0.01);
    outcome(
        pass,
        format!(
            "{} draws: k=1 {:.4}, k=2 {:.4}, k=3 {:.4} (targets 0.68 / 0.95 / 0.997 +- 0.01)",
            total, freq[0], freq[1], freq[2]
        ),
    )
}

fn c5_svm_correctness() -> Outcome {
    let toy = [
        FusionSample::new([-1.0, 0.0, 0.0], -1),
        FusionSample::new([1.0, 0.0, 0.0], 1),
    ];
    let params = SvmParams {
        c: 1e3,
        ..SvmParams::default()
    };
    let t = train_with_duals(&toy, &params).unwrap();
    let w = t.model.weight_vector();
    let toy_ok = t.model.bias.abs() <= 1e-3
        && t.duals.iter().all(|a| (a - 0.5).abs() <= 1e-3)
        && (w[0] - 1.0).abs() <= 1e-3
        && w[1] == 0.0
        && w[2] == 0.0;

    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let defaults = SvmParams::default();
    let mut kkt_fail = 0;
    let mut worst_kkt: f64 = 0.0;
    let mut worst_collapse: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(20..120);
        let samples = separable_set(&mut rng, n);
        let t = train_with_duals(&samples, &defaults).unwrap();
        let audit = kkt_audit(&t.model, &samples, &t.duals);
        worst_kkt = worst_kkt.max(audit.max_violation.max(audit.equality_residual));
        if !audit.passes(defaults.tol) {
            kkt_fail += 1;
        }
        let wv = t.model.weight_vector();
        for p in probe_grid() {
            let collapsed = wv[0] * p[0] + wv[1] * p[1] + wv[2] * p[2] + t.model.bias;
            let dv = t.model.decision_value(&p);
            worst_collapse = worst_collapse.max((dv - collapsed).abs() / dv.abs().max(1.0));
        }
    }
    outcome(
        toy_ok && kkt_fail == 0 && worst_collapse <= 1e-9,
        format!(
            "toy b={:.1e} alpha={:?} w={:?}; KKT failures {kkt_fail}/20 (worst residual {worst_kkt:.1e}); collapsed-form error {worst_collapse:.1e}",
            t.model.bias, t.duals, w
        ),
    )
}

fn c6_pruning_safety() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6006);
    let grid = probe_grid();
    let mut flips = 0;
    let mut before = 0;
    let mut after = 0;
    for _ in 0..20 {
        let n = rng.random_range(20..120);
        let samples = separable_set(&mut rng, n);
        let model = train(&samples, &SvmParams::default()).unwrap();
        let pruned = prune_dependent_svs(&model, 1e-8);
        before += model.n_support();
        after += pruned.n_support();
        flips += grid.iter().filter(|p| model.decide(p) != pruned.decide(p)).count();
    }
    outcome(
        flips == 0 && after <= before,
        format!("20 models, 1331 probes each: {flips} flipped decisions; support vectors {before} -> {after}"),
    )
}

fn c7_cmc_properties(reports: &[&Report]) -> Outcome {
    let mut bad = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        for (name, s) in [
            ("fused", &r.fused),
            ("ed", &r.euclidean),
            ("md", &r.mahalanobis),
            ("ge", &r.empirical),
        ] {
            let p = &s.cmc.probabilities;
            let ok = p.len() == r.n_subjects
                && p.windows(2).all(|w| w[0] <= w[1])
                && p.last() == Some(&1.0)
                && s.rank1_rate == p[0];
            if !ok {
                bad.push(format!("run {i} {name}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} runs x 4 curves checked; violations: {bad:?}", reports.len()),
    )
}

fn c8_imaging_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let mut otsu_bad = 0;
    for _ in 0..50 {
        let mut hist = [0u64; 256];
        for _ in 0..rng.random_range(2..60) {
            hist[rng.random_range(0..256)] += rng.random_range(1..1000);
        }
        let best = exhaustive_best(&hist);
        let ok = match otsu_threshold(&hist) {
            Some(t) => {
                let top = between_class(&hist, best[0]);
                (between_class(&hist, t) - top).abs() <= 1e-9 * top.max(1.0)
            }
            None => hist.iter().filter(|&&c| c > 0).count() < 2,
        };
        otsu_bad += usize::from(!ok);
    }

    let mut thin_bad = 0;
    for _ in 0..100 {
        let once = thin(&random_blob(&mut rng));
        thin_bad += usize::from(thin(&once) != once);
    }

    let params = SynthParams::default();
    let cfg = PreprocessConfig::default();
    let mut hpr_bad = 0;
    for i in 0..20 {
        let raw = render_subject_sample(&params, i * 2, i as u64);
        let gray = preprocess(&raw, &cfg).unwrap().gray;
        let n: Vec<usize> = [0.55, 0.75, 0.85]
            .iter()
            .map(|&f| extract_hpr(&gray, f).unwrap().count_ink())
            .collect();
        hpr_bad += usize::from(!(n[0] >= n[1] && n[1] >= n[2]));
    }
    outcome(
        otsu_bad + thin_bad + hpr_bad == 0,
        format!("Otsu mismatches {otsu_bad}/50; non-idempotent thinning {thin_bad}/100; non-monotone HPR {hpr_bad}/20"),
    )
}

fn c9_determinism(first: &BenchmarkRun) -> Outcome {
    let (second, _) = desk_run();
    let a = to_bytes(&first.report);
    let b = to_bytes(&second.report);
    let models = to_bytes(&first.model) == to_bytes(&second.model);
    outcome(
        a == b && models,
        format!("report bytes {} vs {}, identical = {}; models identical = {models}", a.len(), b.len(), a == b),
    )
}

fn main() -> ExitCode {
    let (run, elapsed) = desk_run();
    let extra = {
        let dir = TempDir::new().expect("temp dir");
        let params = SynthParams {
            n_subjects: 12,
            seed: 7,
            ..SynthParams::default()
        };
        synth_dataset(&params, dir.path()).expect("synth");
        run_benchmark(&dir.path().join("manifest.json"), &RunConfig::default()).expect("benchmark")
    };

    let results = [
        ("C1 fusion dominance", c1_fusion_dominance(&run, elapsed)),
        ("C2 matcher oracle equivalence", c2_oracle_equivalence()),
        ("C3 Mahalanobis sqrt(n) identity", c3_mahalanobis_identity()),
        ("C4 Gaussian empirical rule", c4_gaussian_rule()),
        ("C5 SVM correctness", c5_svm_correctness()),
        ("C6 pruning safety", c6_pruning_safety()),
        ("C7 CMC properties", c7_cmc_properties(&[&run.report, &extra.report])),
        ("C8 imaging oracles", c8_imaging_oracles()),
        ("C9 determinism", c9_determinism(&run)),
    ];

    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
