use serde::{Deserialize, Serialize};

use super::schema::{feature_names, N_FEATURES, SCHEMA_ID};
use crate::error::{Error, Result};

/// A 173-entry feature vector in schema order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    values: Vec<f64>,
    schema_id: String,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() != N_FEATURES {
            return Err(Error::DimensionMismatch {
                expected: N_FEATURES,
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::BadParameter(format!("feature {i} is not finite")));
        }
        Ok(Self {
            values,
            schema_id: SCHEMA_ID.to_string(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn schema_id(&self) -> &str {
        &self.schema_id
    }

    pub fn globals(&self) -> &[f64] {
        &self.values[..super::N_GLOBAL]
    }

    pub fn locals(&self) -> &[f64] {
        &self.values[super::N_GLOBAL..]
    }

    /// JSON object keyed by schema names, in schema order.
    pub fn to_json_object(&self) -> serde_json::Map<String, serde_json::Value> {
        feature_names()
            .zip(&self.values)
            .map(|(k, &v)| (k.to_string(), serde_json::Value::from(v)))
            .collect()
    }

    pub fn csv_header() -> Vec<String> {
        std::iter::once("subject".to_string())
            .chain(feature_names().map(str::to_string))
            .collect()
    }

    pub fn csv_record(&self, subject: &str) -> Vec<String> {
        std::iter::once(subject.to_string())
            .chain(self.values.iter().map(|v| v.to_string()))
            .collect()
    }
}
