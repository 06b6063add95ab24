//! Raster preprocessing: geometric normalization, denoising, Otsu
//! binarization, thinning and high-pressure-region extraction.

mod filters;
mod hpr;
mod image;
mod otsu;
pub mod pgm;
mod preprocess;
mod thinning;

pub use filters::{denoise, normalize_geometry, DenoiseKind};
pub use hpr::{extract_hpr, hpr_threshold};
pub use image::{BinaryImage, GrayImage};
pub use otsu::{binarize, histogram, otsu_threshold, threshold_at};
pub use pgm::{read_image, write_pgm};
pub use preprocess::{preprocess, PreprocessConfig, SignatureViews};
pub use thinning::thin;
