use serde::{Deserialize, Serialize};

use super::GrayImage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DenoiseKind {
    Mean,
    Median,
}

/// Nearest-neighbor resize to `target_height`, keeping the aspect ratio.
///
/// Output width is `round(width * target_height / height)`, at least 1.
/// Source pixel for output `(x, y)` is `(x * w / out_w, y * h / out_h)`.
pub fn normalize_geometry(img: &GrayImage, target_height: usize) -> Result<GrayImage> {
    if target_height == 0 {
        return Err(Error::BadParameter("target height must be positive".into()));
    }
    let (w, h) = (img.width(), img.height());
    let out_h = target_height;
    let out_w = ((w * out_h) as f64 / h as f64).round().max(1.0) as usize;
    if (out_w, out_h) == (w, h) {
        return Ok(img.clone());
    }
    GrayImage::from_fn(out_w, out_h, |x, y| img.get(x * w / out_w, y * h / out_h))
}

/// Square-window mean or median filter with edge replication.
///
/// The mean is rounded to the nearest integer.
pub fn denoise(img: &GrayImage, kind: DenoiseKind, window: usize) -> Result<GrayImage> {
    if window < 3 || window % 2 == 0 {
        return Err(Error::BadWindow(window));
    }
    let r = (window / 2) as isize;
    let n = window * window;
    let mut buf = Vec::with_capacity(n);
    let mut pixels = Vec::with_capacity(img.pixels().len());
    for y in 0..img.height() as isize {
        for x in 0..img.width() as isize {
            buf.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    buf.push(img.get_clamped(x + dx, y + dy));
                }
            }
            let v = match kind {
                DenoiseKind::Mean => {
                    let sum: usize = buf.iter().map(|&p| p as usize).sum();
                    ((sum + n / 2) / n) as u8
                }
                DenoiseKind::Median => {
                    let (_, m, _) = buf.select_nth_unstable(n / 2);
                    *m
                }
            };
            pixels.push(v);
        }
    }
    GrayImage::new(img.width(), img.height(), pixels)
}
