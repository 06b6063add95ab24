use super::{BinaryImage, GrayImage};
use crate::error::{Error, Result};

/// Gray level at or below which a pixel counts as high-pressure ink.
///
/// `None` when the image has a single gray level.
pub fn hpr_threshold(gray: &GrayImage, factor: f64) -> Option<f64> {
    let (lo, hi) = gray.min_max();
    (lo != hi).then(|| lo as f64 + (1.0 - factor) * (hi as f64 - lo as f64))
}

/// High-pressure region: the darkest ink, `gray <= g_min + (1 - factor)(g_max - g_min)`.
///
/// Min and max run over every pixel of `gray`. A larger factor keeps fewer
/// pixels.
pub fn extract_hpr(gray: &GrayImage, factor: f64) -> Result<BinaryImage> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(Error::BadParameter(format!(
            "HPR factor must lie in (0, 1), got {factor}"
        )));
    }
    let (w, h) = (gray.width(), gray.height());
    Ok(match hpr_threshold(gray, factor) {
        None => BinaryImage::blank(w, h),
        Some(t) => {
            let ink = gray.pixels().iter().map(|&p| p as f64 <= t).collect();
            BinaryImage::new(w, h, ink)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_gray_gives_empty_mask() {
        let img = GrayImage::filled(6, 6, 90).unwrap();
        assert_eq!(extract_hpr(&img, 0.75).unwrap().count_ink(), 0);
    }

    #[test]
    fn threshold_formula_at_default_factor() {
        // values 0..=200 in steps of 1, min 0 and max 200 -> keep <= 50
        let img = GrayImage::from_fn(201, 1, |x, _| x as u8).unwrap();
        let mask = extract_hpr(&img, 0.75).unwrap();
        for x in 0..201 {
            assert_eq!(mask.get(x, 0), x <= 50, "x = {x}");
        }
    }

    #[test]
    fn factor_ordering() {
        let img = GrayImage::from_fn(64, 16, |x, y| ((x * 37 + y * 11) % 256) as u8).unwrap();
        let n = |f| extract_hpr(&img, f).unwrap().count_ink();
        assert!(n(0.85) <= n(0.75));
        assert!(n(0.75) <= n(0.55));
    }

    #[test]
    fn factor_out_of_range() {
        let img = GrayImage::filled(2, 2, 0).unwrap();
        assert!(extract_hpr(&img, 1.0).is_err());
        assert!(extract_hpr(&img, 0.0).is_err());
    }
}
