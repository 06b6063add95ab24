//! Global binarization with Otsu's threshold.

use super::{BinaryImage, GrayImage};

pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    hist
}

/// Otsu threshold over a 256-bin histogram.
///
/// Class 0 is `{v <= t}`. Returns `None` when fewer than two bins are
/// occupied, since no threshold separates anything. When several thresholds
/// share the maximal between-class variance (empty bins between the modes),
/// the midpoint of the first and last maximizer is returned.
pub fn otsu_threshold(hist: &[u64; 256]) -> Option<u8> {
    let total: u64 = hist.iter().sum();
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return None;
    }
    let total_sum: u64 = hist.iter().enumerate().map(|(v, &c)| v as u64 * c).sum();

    let mut best = f64::NEG_INFINITY;
    let (mut first, mut last) = (0usize, 0usize);
    let (mut n0, mut s0) = (0u64, 0u64);
    for t in 0..255 {
        n0 += hist[t];
        s0 += t as u64 * hist[t];
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        // n0*n1*(mu0-mu1)^2 / N^2 rescaled to integers: (N*s0 - n0*S)^2 / (n0*n1)
        let num = (total as i128 * s0 as i128 - n0 as i128 * total_sum as i128) as f64;
        let var = num * num / (n0 as f64 * n1 as f64);
        if var > best {
            best = var;
            first = t;
            last = t;
        } else if var == best {
            last = t;
        }
    }
    Some(((first + last) / 2) as u8)
}

/// Ink where `gray <= T`; an image with a single gray level has no ink.
pub fn binarize(img: &GrayImage) -> BinaryImage {
    match otsu_threshold(&histogram(img)) {
        Some(t) => threshold_at(img, t),
        None => BinaryImage::blank(img.width(), img.height()),
    }
}

pub fn threshold_at(img: &GrayImage, t: u8) -> BinaryImage {
    let ink = img.pixels().iter().map(|&p| p <= t).collect();
    BinaryImage::new(img.width(), img.height(), ink).expect("same dimensions")
}
