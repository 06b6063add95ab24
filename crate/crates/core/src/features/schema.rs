use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub const SCHEMA_ID: &str = "geom173-v1";
pub const N_GLOBAL: usize = 23;
pub const GRID: usize = 5;
pub const N_CELLS: usize = GRID * GRID;
pub const PER_CELL: usize = 6;
pub const N_LOCAL: usize = N_CELLS * PER_CELL;
pub const N_FEATURES: usize = N_GLOBAL + N_LOCAL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceView {
    Binary,
    Thinned,
    Hpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Pixels,
    Count,
    Ratio,
    Row,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpec {
    pub index: usize,
    pub name: String,
    pub source: SourceView,
    pub unit: Unit,
}

use SourceView::*;
use Unit::*;

const GLOBALS: [(&str, SourceView, Unit); N_GLOBAL] = [
    ("width", Binary, Pixels),
    ("height", Binary, Pixels),
    ("aspect_ratio", Binary, Ratio),
    ("hproj_support_binary", Binary, Count),
    ("hproj_support_thinned", Thinned, Count),
    ("vproj_support_binary", Binary, Count),
    ("vproj_support_thinned", Thinned, Count),
    ("area_binary", Binary, Count),
    ("area_thinned", Thinned, Count),
    ("area_hpr", Hpr, Count),
    ("narea_binary", Binary, Ratio),
    ("narea_thinned", Thinned, Ratio),
    ("narea_hpr", Hpr, Ratio),
    ("cog_x", Binary, Pixels),
    ("cog_y", Binary, Pixels),
    ("vproj_smooth_max", Binary, Count),
    ("vproj_smooth_min", Binary, Count),
    ("hproj_smooth_max", Binary, Count),
    ("hproj_smooth_min", Binary, Count),
    ("global_baseline", Binary, Row),
    ("upper_edge_limit", Binary, Row),
    ("lower_edge_limit", Binary, Row),
    ("middle_zone", Binary, Pixels),
];

const LOCALS: [(&str, SourceView, Unit); PER_CELL] = [
    ("area_binary", Binary, Count),
    ("narea_binary", Binary, Ratio),
    ("cog_x_rel", Binary, Pixels),
    ("cog_y_rel", Binary, Pixels),
    ("area_thinned", Thinned, Count),
    ("area_hpr", Hpr, Count),
];

/// The fixed 173-entry feature catalogue. Local names are `cRC_<name>` with
/// `R`, `C` the grid row and column.
pub fn schema() -> &'static [FeatureSpec] {
    static SCHEMA: OnceLock<Vec<FeatureSpec>> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        let mut specs: Vec<FeatureSpec> = GLOBALS
            .iter()
            .enumerate()
            .map(|(index, &(name, source, unit))| FeatureSpec {
                index,
                name: name.to_string(),
                source,
                unit,
            })
            .collect();
        for cell in 0..N_CELLS {
            for &(name, source, unit) in &LOCALS {
                specs.push(FeatureSpec {
                    index: specs.len(),
                    name: format!("c{}{}_{}", cell / GRID, cell % GRID, name),
                    source,
                    unit,
                });
            }
        }
        specs
    })
}

pub fn feature_names() -> impl Iterator<Item = &'static str> {
    schema().iter().map(|s| s.name.as_str())
}

pub fn index_of(name: &str) -> Option<usize> {
    schema().iter().position(|s| s.name == name)
}
