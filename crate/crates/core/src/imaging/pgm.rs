//! Netpbm grayscale I/O. Binary `P5` is read and written; `P2` (ASCII) is
//! accepted on input. PNG input is available with the `png` feature.

use std::path::Path;

use super::GrayImage;
use crate::error::{Error, Result};
use crate::workbench::persist::write_atomic;

/// Decode a PGM byte stream.
pub fn decode_pgm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos).ok_or("missing magic number")?;
    let ascii = match magic.as_slice() {
        b"P5" => false,
        b"P2" => true,
        other => return Err(format!("unsupported magic {:?}", String::from_utf8_lossy(other))),
    };
    let width = parse_header_int(bytes, &mut pos, "width")?;
    let height = parse_header_int(bytes, &mut pos, "height")?;
    let maxval = parse_header_int(bytes, &mut pos, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(format!("unsupported maxval {maxval} (only 8-bit images)"));
    }
    let n = width.checked_mul(height).ok_or("image dimensions overflow")?;

    let raw: Vec<u8> = if ascii {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(parse_header_int(bytes, &mut pos, "pixel")?.min(maxval) as u8);
        }
        v
    } else {
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let data = bytes.get(pos..pos + n).ok_or_else(|| {
            format!(
                "truncated raster: expected {n} bytes, found {}",
                bytes.len().saturating_sub(pos)
            )
        })?;
        data.to_vec()
    };

    let pixels = if maxval == 255 {
        raw
    } else {
        raw.into_iter()
            .map(|p| ((p as usize * 255 + maxval / 2) / maxval) as u8)
            .collect()
    };
    GrayImage::new(width, height, pixels).map_err(|e| e.to_string())
}

/// Encode as binary PGM (`P5`, maxval 255).
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    write_atomic(path.as_ref(), &encode_pgm(img))
}

/// Read a grayscale image from disk, sniffing PGM or PNG from the leading bytes.
pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |msg: String| Error::ImageFormat {
        path: path.to_path_buf(),
        msg,
    };
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P2") {
        return decode_pgm(&bytes).map_err(bad);
    }
    if bytes.starts_with(b"\x89PNG") {
        return decode_png(&bytes).map_err(bad);
    }
    Err(bad("not a PGM or PNG file".into()))
}

#[cfg(feature = "png")]
fn decode_png(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| e.to_string())?
        .into_luma8();
    let (w, h) = img.dimensions();
    GrayImage::new(w as usize, h as usize, img.into_raw()).map_err(|e| e.to_string())
}

#[cfg(not(feature = "png"))]
fn decode_png(_bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    Err("PNG support was not compiled in (enable the `png` feature)".into())
}

fn next_token(bytes: &[u8], pos: &mut usize) -> Option<Vec<u8>> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| bytes[start..*pos].to_vec())
}

fn parse_header_int(bytes: &[u8], pos: &mut usize, what: &str) -> std::result::Result<usize, String> {
    let tok = next_token(bytes, pos).ok_or_else(|| format!("missing {what}"))?;
    std::str::from_utf8(&tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| format!("bad {what}: {:?}", String::from_utf8_lossy(&tok)))
}
