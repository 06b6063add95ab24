//! Score-level fusion with a linear support vector machine.

mod pairs;
mod prune;
mod svm;

pub use pairs::training_samples;
pub use prune::prune_dependent_svs;
pub use svm::{
    kernel, kkt_audit, train, train_with_duals, FusionSample, Kernel, KktAudit, ScoreVector,
    SvmModel, SvmParams, Trained, TrainingMeta,
};
