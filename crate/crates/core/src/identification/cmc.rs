use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `probabilities[r - 1]` is the fraction of trials whose true subject
/// ranked at `r` or better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmcCurve {
    pub probabilities: Vec<f64>,
}

impl CmcCurve {
    pub fn rank1(&self) -> f64 {
        self.probabilities.first().copied().unwrap_or(0.0)
    }

    /// Probability at 1-based rank `r`.
    pub fn at(&self, r: usize) -> f64 {
        self.probabilities[r - 1]
    }

    pub fn is_monotone(&self) -> bool {
        self.probabilities.windows(2).all(|w| w[0] <= w[1])
    }
}

pub fn cmc(ranks: &[usize], n_subjects: usize) -> Result<CmcCurve> {
    if ranks.is_empty() {
        return Err(Error::EmptyTrials);
    }
    let mut hist = vec![0usize; n_subjects];
    for &r in ranks {
        if r == 0 || r > n_subjects {
            return Err(Error::BadParameter(format!("rank {r} outside 1..={n_subjects}")));
        }
        hist[r - 1] += 1;
    }
    let total = ranks.len() as f64;
    let mut cum = 0;
    let probabilities = hist
        .into_iter()
        .map(|h| {
            cum += h;
            cum as f64 / total
        })
        .collect();
    Ok(CmcCurve { probabilities })
}
