use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureVector, SCHEMA_ID};
use crate::fusion::SvmModel;
use crate::matchers::{fit_subject_stats, score_triple, MatcherConfig, SubjectStats};

/// Enrolled subjects keyed by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gallery {
    pub schema_id: String,
    pub matcher: MatcherConfig,
    pub entries: BTreeMap<String, SubjectStats>,
}

impl Gallery {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn check_schema(&self, q: &FeatureVector) -> Result<()> {
        if q.schema_id() != self.schema_id {
            return Err(Error::SchemaMismatch {
                expected: self.schema_id.clone(),
                found: q.schema_id().to_string(),
            });
        }
        Ok(())
    }
}

pub fn enroll(templates: &BTreeMap<String, Vec<FeatureVector>>, cfg: &MatcherConfig) -> Result<Gallery> {
    if templates.is_empty() {
        return Err(Error::BadParameter("cannot enroll an empty template set".into()));
    }
    let entries = templates
        .iter()
        .map(|(id, ts)| Ok((id.clone(), fit_subject_stats(id, ts, cfg)?)))
        .collect::<Result<_>>()?;
    Ok(Gallery {
        schema_id: SCHEMA_ID.to_string(),
        matcher: cfg.clone(),
        entries,
    })
}

/// Subjects ordered by descending score, ties by ascending subject id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub entries: Vec<(String, f64)>,
}

impl RankedList {
    pub fn top(&self) -> Option<&str> {
        self.entries.first().map(|(id, _)| id.as_str())
    }
}

pub fn rank_scores(mut scores: Vec<(String, f64)>) -> RankedList {
    scores.sort_by(|(ia, sa), (ib, sb)| match sb.total_cmp(sa) {
        Ordering::Equal => ia.cmp(ib),
        o => o,
    });
    RankedList { entries: scores }
}

pub fn identify(g: &Gallery, model: &SvmModel, q: &FeatureVector) -> Result<RankedList> {
    g.check_schema(q)?;
    let scores = g
        .entries
        .iter()
        .map(|(id, stats)| {
            let triple = score_triple(q, stats, &g.matcher)?;
            Ok((id.clone(), model.decision_value(&triple.similarities())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rank_scores(scores))
}

/// 1-based position of `subject`.
pub fn rank_of(r: &RankedList, subject: &str) -> Result<usize> {
    r.entries
        .iter()
        .position(|(id, _)| id == subject)
        .map(|p| p + 1)
        .ok_or_else(|| Error::UnknownSubject(subject.to_string()))
}
