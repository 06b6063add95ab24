use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::svm::FusionSample;
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::matchers::{fit_subject_stats, score_triple, MatcherConfig, SubjectStats};

/// Score vectors for fusion training.
///
/// Each enrollment template is held out in turn. Scored against statistics
/// fit on its own subject's remaining templates it is a genuine (+1)
/// sample; scored against every other subject's full statistics it is an
/// impostor (-1) sample. Impostors are then subsampled without replacement
/// to `neg_per_pos` per genuine sample.
pub fn training_samples(
    templates: &BTreeMap<String, Vec<FeatureVector>>,
    cfg: &MatcherConfig,
    neg_per_pos: usize,
    seed: u64,
) -> Result<Vec<FusionSample>> {
    let full: BTreeMap<&str, SubjectStats> = templates
        .iter()
        .map(|(id, ts)| Ok((id.as_str(), fit_subject_stats(id, ts, cfg)?)))
        .collect::<Result<_>>()?;

    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for (id, ts) in templates {
        for (held, q) in ts.iter().enumerate() {
            if ts.len() > 1 {
                let rest: Vec<FeatureVector> = ts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != held)
                    .map(|(_, t)| t.clone())
                    .collect();
                let stats = fit_subject_stats(id, &rest, cfg)?;
                positives.push(FusionSample::new(score_triple(q, &stats, cfg)?.similarities(), 1));
            }
            for (other, stats) in &full {
                if *other != id.as_str() {
                    negatives.push(FusionSample::new(score_triple(q, stats, cfg)?.similarities(), -1));
                }
            }
        }
    }
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::DegenerateTrainingSet);
    }

    let keep = (positives.len() * neg_per_pos).min(negatives.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, negatives.len(), keep).into_vec();
    picked.sort_unstable();
    positives.extend(picked.into_iter().map(|i| negatives[i]));
    Ok(positives)
}
