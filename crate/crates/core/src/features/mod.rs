//! Geometric global and grid-local features over the preprocessed views.

mod extract;
mod projection;
pub mod schema;
mod vector;

pub use extract::{extract, global_features, local_features, FeatureConfig};
pub use projection::{
    center_of_gravity, edge_limits, global_baseline, ink_extent, projection, smooth, Axis,
    EdgeLimits, Extent, Projection,
};
pub use schema::{feature_names, index_of, FeatureSpec, N_FEATURES, N_GLOBAL, N_LOCAL, SCHEMA_ID};
pub use vector::FeatureVector;
