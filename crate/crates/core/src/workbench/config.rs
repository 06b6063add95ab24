use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::fusion::SvmParams;
use crate::imaging::PreprocessConfig;
use crate::matchers::MatcherConfig;
use crate::workbench::persist::{self, Persist};

/// Environment variable naming a default config file for the CLI.
pub const CONFIG_ENV: &str = "SIGFUSE_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FusionConfig {
    /// Impostor samples kept per genuine sample when building the SVM training set.
    pub neg_per_pos: usize,
    /// Fold linearly dependent support vectors after training.
    pub prune: bool,
    pub prune_eps: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            neg_per_pos: 5,
            prune: false,
            prune_eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub enroll_per_subject: usize,
    pub test_per_subject: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            enroll_per_subject: 6,
            test_per_subject: 3,
        }
    }
}

/// Every tunable of a run. Written next to each output.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preprocess: PreprocessConfig,
    pub features: FeatureConfig,
    pub matcher: MatcherConfig,
    pub svm: SvmParams,
    pub fusion: FusionConfig,
    pub evaluation: EvalConfig,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.preprocess.validate()?;
        self.features.validate()?;
        self.matcher.validate()?;
        self.svm.validate()?;
        if self.fusion.neg_per_pos == 0 {
            return Err(Error::BadParameter("neg_per_pos must be >= 1".into()));
        }
        if !(self.fusion.prune_eps >= 0.0) {
            return Err(Error::BadParameter("prune_eps must be >= 0".into()));
        }
        if self.evaluation.enroll_per_subject == 0 || self.evaluation.test_per_subject == 0 {
            return Err(Error::BadParameter("enrollment and test split sizes must be >= 1".into()));
        }
        Ok(())
    }

    /// Read a JSON config file; absent fields take defaults. Accepts a bare
    /// object or the versioned envelope that `evaluate` writes.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let parse_err = |e: serde_json::Error| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        };
        let value: serde_json::Value = serde_json::from_slice(&bytes).map_err(parse_err)?;
        let cfg: RunConfig = if value.get("kind").and_then(|k| k.as_str()) == Some(<Self as Persist>::KIND) {
            persist::from_bytes(&bytes, path)?
        } else {
            serde_json::from_slice(&bytes).map_err(parse_err)?
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
