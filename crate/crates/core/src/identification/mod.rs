//! One-vs-all identification, rank-order statistics and CMC curves.

mod cmc;
mod gallery;
mod report;
mod svg;

pub use cmc::{cmc, CmcCurve};
pub use gallery::{enroll, identify, rank_of, rank_scores, Gallery, RankedList};
pub use report::{cmc_csv, evaluate, ForgerySummary, LabeledQuery, MatcherSummary, Report, ScoreSource};
pub use svg::render_cmc_svg;
