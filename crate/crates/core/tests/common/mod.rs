#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sigfuse::features::{FeatureVector, N_FEATURES};
use sigfuse::imaging::BinaryImage;
use sigfuse::fusion::FusionSample;
use sigfuse::matchers::{fit_subject_stats, CovModel, MatcherConfig, SubjectStats};

pub fn random_vector(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..N_FEATURES).map(|_| rng.random_range(-50.0..50.0)).collect()
}

pub fn fv(values: Vec<f64>) -> FeatureVector {
    FeatureVector::new(values).unwrap()
}

/// Diagonal-model stats with random mean, spread and weights.
pub fn random_stats(rng: &mut ChaCha8Rng, unit_weights: bool) -> SubjectStats {
    SubjectStats {
        subject: "s".into(),
        mean: random_vector(rng),
        std: (0..N_FEATURES).map(|_| rng.random_range(0.05..20.0)).collect(),
        weights: (0..N_FEATURES)
            .map(|_| if unit_weights { 1.0 } else { rng.random_range(0.0..3.0) })
            .collect(),
        cov_model: CovModel::Diagonal,
        n_templates: 6,
    }
}

/// Stats fitted from a handful of random templates.
pub fn fitted_stats(rng: &mut ChaCha8Rng, cfg: &MatcherConfig, n: usize) -> SubjectStats {
    let centre = random_vector(rng);
    let templates: Vec<FeatureVector> = (0..n)
        .map(|_| fv(centre.iter().map(|c| c + rng.random_range(-5.0..5.0)).collect()))
        .collect();
    fit_subject_stats("s", &templates, cfg).unwrap()
}

/// Points in the unit cube split by a random hyperplane through its centre,
/// none closer than 0.1 to it.
pub fn separable_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<FusionSample> {
    let w: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let b = -(w[0] + w[1] + w[2]) / 2.0;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let m: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let f = w[0] * m[0] + w[1] * m[1] + w[2] * m[2] + b;
        let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        if f.abs() < 0.1 * norm {
            continue;
        }
        out.push(FusionSample::new(m, if f > 0.0 { 1 } else { -1 }));
    }
    if out.iter().all(|s| s.label == out[0].label) {
        let flip = -out[0].label;
        let m = out[0].m.map(|v| 1.0 - v);
        out.push(FusionSample::new(m, flip));
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Between-class variance at every threshold, computed directly from class sums.
pub fn exhaustive_best(hist: &[u64; 256]) -> Vec<u8> {
    let total: f64 = hist.iter().map(|&c| c as f64).sum();
    let mut scores = Vec::with_capacity(256);
    for t in 0..256usize {
        let (mut n0, mut s0, mut n1, mut s1) = (0.0, 0.0, 0.0, 0.0);
        for (g, &c) in hist.iter().enumerate() {
            if g <= t {
                n0 += c as f64;
                s0 += (g as f64) * c as f64;
            } else {
                n1 += c as f64;
                s1 += (g as f64) * c as f64;
            }
        }
        let v = if n0 == 0.0 || n1 == 0.0 {
            f64::NEG_INFINITY
        } else {
            let (m0, m1) = (s0 / n0, s1 / n1);
            (n0 / total) * (n1 / total) * (m0 - m1).powi(2)
        };
        scores.push(v);
    }
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..256)
        .filter(|&t| scores[t] >= best - 1e-9 * best.abs().max(1.0))
        .map(|t| t as u8)
        .collect()
}

pub fn between_class(hist: &[u64; 256], t: u8) -> f64 {
    let total: f64 = hist.iter().map(|&c| c as f64).sum();
    let (mut n0, mut s0, mut n1, mut s1) = (0.0, 0.0, 0.0, 0.0);
    for (g, &c) in hist.iter().enumerate() {
        if g <= t as usize {
            n0 += c as f64;
            s0 += g as f64 * c as f64;
        } else {
            n1 += c as f64;
            s1 += g as f64 * c as f64;
        }
    }
    if n0 == 0.0 || n1 == 0.0 {
        return f64::NEG_INFINITY;
    }
    (n0 / total) * (n1 / total) * (s0 / n0 - s1 / n1).powi(2)
}

pub fn random_blob(rng: &mut ChaCha8Rng) -> BinaryImage {
    let (w, h) = (rng.random_range(8..40), rng.random_range(8..40));
    let discs: Vec<(f64, f64, f64)> = (0..rng.random_range(1..6))
        .map(|_| {
            (
                rng.random_range(0.0..w as f64),
                rng.random_range(0.0..h as f64),
                rng.random_range(1.0..7.0),
            )
        })
        .collect();
    BinaryImage::from_fn(w, h, |x, y| {
        discs
            .iter()
            .any(|&(cx, cy, r)| (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2) <= r * r)
    })
}

pub fn oracle_ed(q: &[f64], s: &SubjectStats) -> f64 {
    let mut acc = 0.0;
    for i in 0..q.len() {
        let z = (q[i] - s.mean[i]) / s.std[i];
        acc += s.weights[i] * z * z;
    }
    acc.sqrt() / q.len() as f64
}

pub fn oracle_md(q: &[f64], s: &SubjectStats) -> f64 {
    let n = q.len();
    let cov = match &s.cov_model {
        CovModel::Diagonal => DMatrix::from_fn(n, n, |i, j| if i == j { s.std[i] * s.std[i] } else { 0.0 }),
        CovModel::ShrunkFull { matrix, .. } => DMatrix::from_row_slice(n, n, matrix),
    };
    let d = DVector::from_iterator(n, q.iter().zip(&s.mean).map(|(a, b)| a - b));
    let inv = cov.try_inverse().expect("invertible");
    (d.transpose() * inv * &d)[(0, 0)].sqrt()
}

pub fn oracle_ge(q: &[f64], s: &SubjectStats, k: u8) -> u32 {
    q.iter()
        .zip(&s.mean)
        .zip(&s.std)
        .filter(|((x, m), sd)| (*m - *x).abs() <= k as f64 * **sd)
        .count() as u32
}

