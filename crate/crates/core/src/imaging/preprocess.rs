use serde::{Deserialize, Serialize};

use super::{
    binarize, denoise, extract_hpr, normalize_geometry, thin, BinaryImage, DenoiseKind, GrayImage,
};
use crate::error::{Error, Result};

/// The four rasters features are measured on. All share one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureViews {
    pub gray: GrayImage,
    pub binary: BinaryImage,
    pub thinned: BinaryImage,
    pub hpr: BinaryImage,
}

impl SignatureViews {
    pub fn width(&self) -> usize {
        self.gray.width()
    }

    pub fn height(&self) -> usize {
        self.gray.height()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    pub target_height: usize,
    pub median_window: usize,
    pub mean_window: usize,
    pub hpr_factor: f64,
    /// Fewer binary ink pixels than this rejects the scan.
    pub min_ink_pixels: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            target_height: 128,
            median_window: 3,
            mean_window: 3,
            hpr_factor: 0.75,
            min_ink_pixels: 10,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_height < 8 {
            return Err(Error::BadParameter(format!(
                "target_height must be >= 8, got {}",
                self.target_height
            )));
        }
        for w in [self.median_window, self.mean_window] {
            if w < 3 || w % 2 == 0 {
                return Err(Error::BadWindow(w));
            }
        }
        if !(self.hpr_factor > 0.0 && self.hpr_factor < 1.0) {
            return Err(Error::BadParameter(format!(
                "hpr_factor must lie in (0, 1), got {}",
                self.hpr_factor
            )));
        }
        Ok(())
    }
}

/// normalize -> median -> mean -> { Otsu binarize -> thin ; HPR on the denoised gray }.
pub fn preprocess(raw: &GrayImage, cfg: &PreprocessConfig) -> Result<SignatureViews> {
    cfg.validate()?;
    let gray = normalize_geometry(raw, cfg.target_height)?;
    let gray = denoise(&gray, DenoiseKind::Median, cfg.median_window)?;
    let gray = denoise(&gray, DenoiseKind::Mean, cfg.mean_window)?;

    let binary = binarize(&gray);
    let ink = binary.count_ink();
    if ink < cfg.min_ink_pixels {
        return Err(Error::EmptySignature {
            ink,
            required: cfg.min_ink_pixels,
        });
    }
    let thinned = thin(&binary);
    let hpr = extract_hpr(&gray, cfg.hpr_factor)?;
    Ok(SignatureViews {
        gray,
        binary,
        thinned,
        hpr,
    })
}
