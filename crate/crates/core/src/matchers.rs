//! Per-subject matchers: weighted normalized Euclidean distance,
//! Mahalanobis distance and the Gaussian empirical-rule match count.

use std::sync::OnceLock;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureVector, N_FEATURES};

/// Standard-deviation floor shared by all matchers.
pub const STD_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovKind {
    Diagonal,
    ShrunkFull,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatcherConfig {
    /// Empirical-rule width in standard deviations: 1, 2 or 3.
    pub k: u8,
    /// Per-feature weights for the Euclidean matcher; all ones when absent.
    pub weights: Option<Vec<f64>>,
    pub cov_model: CovKind,
    /// Shrinkage intensity: lambda = shrinkage * trace(S) / n.
    pub shrinkage: f64,
    pub std_floor: f64,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        Self {
            k: 3,
            weights: None,
            cov_model: CovKind::Diagonal,
            shrinkage: 0.1,
            std_floor: STD_FLOOR,
        }
    }
}

impl MatcherConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.k) {
            return Err(Error::BadParameter(format!("k must be 1, 2 or 3, got {}", self.k)));
        }
        if let Some(w) = &self.weights {
            if w.len() != N_FEATURES {
                return Err(Error::DimensionMismatch {
                    expected: N_FEATURES,
                    found: w.len(),
                });
            }
            if w.iter().any(|c| !c.is_finite() || *c < 0.0) {
                return Err(Error::BadParameter("weights must be finite and >= 0".into()));
            }
        }
        if !(self.std_floor > 0.0) || !(self.shrinkage >= 0.0) {
            return Err(Error::BadParameter("std_floor must be > 0 and shrinkage >= 0".into()));
        }
        Ok(())
    }
}

/// Covariance model behind the Mahalanobis matcher.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovModel {
    /// `diag(std^2)`.
    Diagonal,
    /// `S + lambda I`, stored row-major.
    ShrunkFull {
        lambda: f64,
        matrix: Vec<f64>,
        #[serde(skip)]
        chol: OnceLock<Option<Cholesky<f64, Dyn>>>,
    },
}

impl PartialEq for CovModel {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CovModel::Diagonal, CovModel::Diagonal) => true,
            (
                CovModel::ShrunkFull { lambda: a, matrix: m, .. },
                CovModel::ShrunkFull { lambda: b, matrix: n, .. },
            ) => a == b && m == n,
            _ => false,
        }
    }
}

/// Enrollment statistics of one subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectStats {
    pub subject: String,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub weights: Vec<f64>,
    pub cov_model: CovModel,
    pub n_templates: usize,
}

/// Per-feature mean and population standard deviation (divisor `n`),
/// with the deviation floored at `cfg.std_floor`.
pub fn fit_subject_stats(
    subject: &str,
    templates: &[FeatureVector],
    cfg: &MatcherConfig,
) -> Result<SubjectStats> {
    cfg.validate()?;
    if templates.is_empty() {
        return Err(Error::NoTemplates(subject.to_string()));
    }
    let dim = templates[0].values().len();
    for t in templates {
        if t.values().len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: t.values().len(),
            });
        }
    }
    let n = templates.len() as f64;
    let mean: Vec<f64> = (0..dim)
        .map(|i| templates.iter().map(|t| t.values()[i]).sum::<f64>() / n)
        .collect();
    let std: Vec<f64> = (0..dim)
        .map(|i| {
            let var = templates
                .iter()
                .map(|t| (t.values()[i] - mean[i]).powi(2))
                .sum::<f64>()
                / n;
            var.sqrt().max(cfg.std_floor)
        })
        .collect();
    let weights = cfg.weights.clone().unwrap_or_else(|| vec![1.0; dim]);

    let cov_model = match cfg.cov_model {
        CovKind::Diagonal => CovModel::Diagonal,
        CovKind::ShrunkFull => {
            let mut s = DMatrix::<f64>::zeros(dim, dim);
            for t in templates {
                let d = DVector::from_iterator(dim, t.values().iter().zip(&mean).map(|(x, m)| x - m));
                s += &d * d.transpose();
            }
            s /= n;
            let lambda = (cfg.shrinkage * s.trace() / dim as f64).max(cfg.std_floor);
            for i in 0..dim {
                s[(i, i)] += lambda;
            }
            CovModel::ShrunkFull {
                lambda,
                // nalgebra is column-major; the matrix is symmetric so either order reads the same
                matrix: s.as_slice().to_vec(),
                chol: OnceLock::new(),
            }
        }
    };

    Ok(SubjectStats {
        subject: subject.to_string(),
        mean,
        std,
        weights,
        cov_model,
        n_templates: templates.len(),
    })
}

impl SubjectStats {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    fn check_dim(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: q.len(),
            });
        }
        Ok(())
    }
}

/// `(1/n) * sqrt(sum_i C_i (x_i - M_i)^2 / sigma_i^2)`.
pub fn euclidean_distance(q: &FeatureVector, s: &SubjectStats) -> Result<f64> {
    euclidean_raw(q.values(), s)
}

pub(crate) fn euclidean_raw(q: &[f64], s: &SubjectStats) -> Result<f64> {
    s.check_dim(q)?;
    let sum: f64 = q
        .iter()
        .zip(&s.mean)
        .zip(&s.std)
        .zip(&s.weights)
        .map(|(((x, m), sd), c)| c * (x - m).powi(2) / (sd * sd))
        .sum();
    Ok(sum.sqrt() / q.len() as f64)
}

/// `sqrt((f - mu)^T C^-1 (f - mu))` under the subject's covariance model.
pub fn mahalanobis_distance(q: &FeatureVector, s: &SubjectStats) -> Result<f64> {
    mahalanobis_raw(q.values(), s)
}

pub(crate) fn mahalanobis_raw(q: &[f64], s: &SubjectStats) -> Result<f64> {
    s.check_dim(q)?;
    match &s.cov_model {
        CovModel::Diagonal => Ok(q
            .iter()
            .zip(&s.mean)
            .zip(&s.std)
            .map(|((x, m), sd)| (x - m).powi(2) / (sd * sd))
            .sum::<f64>()
            .sqrt()),
        CovModel::ShrunkFull { matrix, chol, .. } => {
            let dim = s.dim();
            let chol = chol
                .get_or_init(|| DMatrix::from_column_slice(dim, dim, matrix).cholesky())
                .as_ref()
                .ok_or(Error::SingularCovariance)?;
            let d = DVector::from_iterator(dim, q.iter().zip(&s.mean).map(|(x, m)| x - m));
            let y = chol
                .l_dirty()
                .solve_lower_triangular(&d)
                .ok_or(Error::SingularCovariance)?;
            Ok(y.norm())
        }
    }
}

/// Number of features with `|mu_i - x_i| <= k sigma_i`.
pub fn empirical_match_count(q: &FeatureVector, s: &SubjectStats, k: u8) -> Result<u32> {
    empirical_raw(q.values(), s, k)
}

pub(crate) fn empirical_raw(q: &[f64], s: &SubjectStats, k: u8) -> Result<u32> {
    s.check_dim(q)?;
    if !(1..=3).contains(&k) {
        return Err(Error::BadParameter(format!("k must be 1, 2 or 3, got {k}")));
    }
    let k = k as f64;
    Ok(q.iter()
        .zip(&s.mean)
        .zip(&s.std)
        .filter(|((x, m), sd)| (*m - *x).abs() <= k * **sd)
        .count() as u32)
}

/// Raw matcher outputs and their `[0, 1]` similarities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub s_ed: f64,
    pub s_md: f64,
    pub s_ge: f64,
    pub raw_ed: f64,
    pub raw_md: f64,
    pub raw_ge: u32,
}

impl ScoreTriple {
    pub fn from_raw(raw_ed: f64, raw_md: f64, raw_ge: u32, dim: usize) -> Self {
        Self {
            s_ed: 1.0 / (1.0 + raw_ed),
            s_md: 1.0 / (1.0 + raw_md),
            s_ge: raw_ge as f64 / dim as f64,
            raw_ed,
            raw_md,
            raw_ge,
        }
    }

    /// The fusion input `(s_ed, s_md, s_ge)`.
    pub fn similarities(&self) -> [f64; 3] {
        [self.s_ed, self.s_md, self.s_ge]
    }
}

pub fn score_triple(q: &FeatureVector, s: &SubjectStats, cfg: &MatcherConfig) -> Result<ScoreTriple> {
    let v = q.values();
    Ok(ScoreTriple::from_raw(
        euclidean_raw(v, s)?,
        mahalanobis_raw(v, s)?,
        empirical_raw(v, s, cfg.k)?,
        v.len(),
    ))
}
