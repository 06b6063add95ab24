use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cmc::{cmc, CmcCurve};
use super::gallery::{rank_of, rank_scores, Gallery};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::fusion::SvmModel;
use crate::matchers::{score_triple, ScoreTriple};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledQuery {
    pub subject: String,
    pub features: FeatureVector,
}

/// What a ranking is ordered by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreSource {
    Fused,
    Euclidean,
    Mahalanobis,
    Empirical,
}

impl ScoreSource {
    pub const ALL: [ScoreSource; 4] = [
        ScoreSource::Fused,
        ScoreSource::Euclidean,
        ScoreSource::Mahalanobis,
        ScoreSource::Empirical,
    ];

    fn score(self, model: &SvmModel, t: &ScoreTriple) -> f64 {
        match self {
            ScoreSource::Fused => model.decision_value(&t.similarities()),
            ScoreSource::Euclidean => t.s_ed,
            ScoreSource::Mahalanobis => t.s_md,
            ScoreSource::Empirical => t.s_ge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatcherSummary {
    pub rank1_rate: f64,
    pub cmc: CmcCurve,
}

/// Skilled-forgery queries ranked against the gallery; a "hit" is the
/// forged subject coming out on top, i.e. a misidentification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgerySummary {
    pub n_queries: usize,
    pub fused_rank1_rate: f64,
    pub euclidean_rank1_rate: f64,
    pub mahalanobis_rank1_rate: f64,
    pub empirical_rank1_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n_subjects: usize,
    pub n_genuine_queries: usize,
    pub fused: MatcherSummary,
    pub euclidean: MatcherSummary,
    pub mahalanobis: MatcherSummary,
    pub empirical: MatcherSummary,
    pub forgery: Option<ForgerySummary>,
}

impl Report {
    pub fn summary(&self, source: ScoreSource) -> &MatcherSummary {
        match source {
            ScoreSource::Fused => &self.fused,
            ScoreSource::Euclidean => &self.euclidean,
            ScoreSource::Mahalanobis => &self.mahalanobis,
            ScoreSource::Empirical => &self.empirical,
        }
    }
}

/// Ranks of the claimed subject under each of the four score sources.
fn query_ranks(g: &Gallery, model: &SvmModel, q: &LabeledQuery) -> Result<[usize; 4]> {
    g.check_schema(&q.features)?;
    if !g.entries.contains_key(&q.subject) {
        return Err(Error::UnknownSubject(q.subject.clone()));
    }
    let triples = g
        .entries
        .iter()
        .map(|(id, stats)| Ok((id, score_triple(&q.features, stats, &g.matcher)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = [0; 4];
    for (slot, source) in out.iter_mut().zip(ScoreSource::ALL) {
        let list = rank_scores(
            triples
                .iter()
                .map(|(id, t)| ((*id).clone(), source.score(model, t)))
                .collect(),
        );
        *slot = rank_of(&list, &q.subject)?;
    }
    Ok(out)
}

fn all_ranks(g: &Gallery, model: &SvmModel, queries: &[LabeledQuery]) -> Result<Vec<[usize; 4]>> {
    queries.par_iter().map(|q| query_ranks(g, model, q)).collect()
}

pub fn evaluate(
    g: &Gallery,
    model: &SvmModel,
    genuine: &[LabeledQuery],
    forgeries: &[LabeledQuery],
) -> Result<Report> {
    let n = g.len();
    let ranks = all_ranks(g, model, genuine)?;
    let summary = |k: usize| -> Result<MatcherSummary> {
        let r: Vec<usize> = ranks.iter().map(|q| q[k]).collect();
        let curve = cmc(&r, n)?;
        Ok(MatcherSummary {
            rank1_rate: curve.rank1(),
            cmc: curve,
        })
    };

    let forgery = if forgeries.is_empty() {
        None
    } else {
        let fr = all_ranks(g, model, forgeries)?;
        let rate = |k: usize| fr.iter().filter(|q| q[k] == 1).count() as f64 / fr.len() as f64;
        Some(ForgerySummary {
            n_queries: fr.len(),
            fused_rank1_rate: rate(0),
            euclidean_rank1_rate: rate(1),
            mahalanobis_rank1_rate: rate(2),
            empirical_rank1_rate: rate(3),
        })
    };

    Ok(Report {
        n_subjects: n,
        n_genuine_queries: genuine.len(),
        fused: summary(0)?,
        euclidean: summary(1)?,
        mahalanobis: summary(2)?,
        empirical: summary(3)?,
        forgery,
    })
}

/// `rank,p_fused,p_ed,p_md,p_ge` rows.
pub fn cmc_csv(report: &Report) -> String {
    let mut out = String::from("rank,p_fused,p_ed,p_md,p_ge\n");
    for r in 0..report.n_subjects {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r + 1,
            report.fused.cmc.probabilities[r],
            report.euclidean.cmc.probabilities[r],
            report.mahalanobis.cmc.probabilities[r],
            report.empirical.cmc.probabilities[r],
        ));
    }
    out
}
