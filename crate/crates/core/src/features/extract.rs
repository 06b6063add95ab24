use serde::{Deserialize, Serialize};

use super::projection::{
    center_of_gravity, edge_limits_of, ink_extent, projection, smooth, Axis, Extent, Projection,
};
use super::schema::{GRID, N_CELLS, N_GLOBAL, N_LOCAL, PER_CELL};
use super::FeatureVector;
use crate::error::{Error, Result};
use crate::imaging::{BinaryImage, SignatureViews};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    /// Window for the smoothed-projection extrema (features 15-18).
    pub smooth_window: usize,
    /// Window for the edge-limit comparison (features 20-22).
    pub edge_window: usize,
    /// A projection bin belongs to the ink extent when it holds more than this.
    pub extent_min_count: u32,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            smooth_window: 5,
            edge_window: 3,
            extent_min_count: 3,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        for w in [self.smooth_window, self.edge_window] {
            if w < 3 || w % 2 == 0 {
                return Err(Error::BadWindow(w));
            }
        }
        Ok(())
    }
}

/// Ink extent, widened to the plain bounding range when no bin passes the
/// count threshold (a one-pixel-thin stroke).
fn robust_extent(p: &Projection, min_count: u32) -> Extent {
    let e = ink_extent(p, min_count);
    if e.span > 0 {
        e
    } else {
        ink_extent(p, 0)
    }
}

fn smoothed_extrema(p: &Projection, extent: Extent, window: usize) -> Result<(f64, f64)> {
    let s = smooth(p, window)?;
    let inside = &s.counts[extent.lo..=extent.hi];
    let max = inside.iter().copied().max().unwrap_or(0);
    let min = inside.iter().copied().min().unwrap_or(0);
    Ok((max as f64, min as f64))
}

fn ensure_signature(v: &SignatureViews) -> Result<usize> {
    let ink = v.binary.count_ink();
    if ink == 0 {
        return Err(Error::EmptySignature { ink, required: 1 });
    }
    Ok(ink)
}

pub fn global_features(v: &SignatureViews, cfg: &FeatureConfig) -> Result<[f64; N_GLOBAL]> {
    cfg.validate()?;
    let area_binary = ensure_signature(v)? as f64;
    let area_thinned = v.thinned.count_ink() as f64;
    let area_hpr = v.hpr.count_ink() as f64;

    let rows_b = projection(&v.binary, Axis::Horizontal);
    let cols_b = projection(&v.binary, Axis::Vertical);
    let rows_t = projection(&v.thinned, Axis::Horizontal);
    let cols_t = projection(&v.thinned, Axis::Vertical);

    let x_extent = robust_extent(&cols_b, cfg.extent_min_count);
    let y_extent = robust_extent(&rows_b, cfg.extent_min_count);
    let width = x_extent.span as f64;
    let height = y_extent.span as f64;
    let bbox = width * height;
    let narea = |a: f64| (a / bbox).min(1.0);

    let (cog_x, cog_y) = center_of_gravity(&v.binary)?;
    let (vmax, vmin) = smoothed_extrema(&cols_b, x_extent, cfg.smooth_window)?;
    let (hmax, hmin) = smoothed_extrema(&rows_b, y_extent, cfg.smooth_window)?;
    let edges = edge_limits_of(&rows_b, cfg.edge_window)?;
    let baseline = super::projection::global_baseline(&v.binary)?;

    Ok([
        width,
        height,
        width / height,
        rows_b.support() as f64,
        rows_t.support() as f64,
        cols_b.support() as f64,
        cols_t.support() as f64,
        area_binary,
        area_thinned,
        area_hpr,
        narea(area_binary),
        narea(area_thinned),
        narea(area_hpr),
        cog_x,
        cog_y,
        vmax,
        vmin,
        hmax,
        hmin,
        baseline as f64,
        edges.upper as f64,
        edges.lower as f64,
        edges.middle_zone as f64,
    ])
}

/// Cell boundaries along one axis: `GRID` equal parts, the last one taking
/// the remainder.
fn cell_bounds(len: usize) -> [(usize, usize); GRID] {
    let step = len / GRID;
    std::array::from_fn(|i| {
        let start = i * step;
        let end = if i + 1 == GRID { len } else { start + step };
        (start, end)
    })
}

#[derive(Default, Clone, Copy)]
struct CellAcc {
    binary: u64,
    sx: u64,
    sy: u64,
    thinned: u64,
    hpr: u64,
}

fn cell_map(len: usize) -> Vec<usize> {
    let bounds = cell_bounds(len);
    let mut map = vec![0; len];
    for (cell, &(start, end)) in bounds.iter().enumerate() {
        map[start..end].fill(cell);
    }
    map
}

fn accumulate(img: &BinaryImage, cols: &[usize], rows: &[usize], mut f: impl FnMut(usize, usize, usize)) {
    for (x, y) in img.ink_coords() {
        f(rows[y] * GRID + cols[x], x, y);
    }
}

pub fn local_features(v: &SignatureViews) -> Result<[f64; N_LOCAL]> {
    ensure_signature(v)?;
    let (w, h) = (v.width(), v.height());
    let (xb, yb) = (cell_bounds(w), cell_bounds(h));
    let (cols, rows) = (cell_map(w), cell_map(h));

    let mut acc = [CellAcc::default(); N_CELLS];
    accumulate(&v.binary, &cols, &rows, |c, x, y| {
        acc[c].binary += 1;
        acc[c].sx += x as u64;
        acc[c].sy += y as u64;
    });
    accumulate(&v.thinned, &cols, &rows, |c, _, _| acc[c].thinned += 1);
    accumulate(&v.hpr, &cols, &rows, |c, _, _| acc[c].hpr += 1);

    let mut out = [0.0; N_LOCAL];
    for (c, a) in acc.iter().enumerate() {
        let (x0, x1) = xb[c % GRID];
        let (y0, y1) = yb[c / GRID];
        let (cw, ch) = ((x1 - x0) as f64, (y1 - y0) as f64);
        let cell_area = cw * ch;
        let (cog_x, cog_y) = if a.binary == 0 {
            (cw / 2.0, ch / 2.0)
        } else {
            let n = a.binary as f64;
            (a.sx as f64 / n - x0 as f64, a.sy as f64 / n - y0 as f64)
        };
        let slot = &mut out[c * PER_CELL..(c + 1) * PER_CELL];
        slot.copy_from_slice(&[
            a.binary as f64,
            if cell_area > 0.0 { a.binary as f64 / cell_area } else { 0.0 },
            cog_x,
            cog_y,
            a.thinned as f64,
            a.hpr as f64,
        ]);
    }
    Ok(out)
}

/// Globals followed by cell-major locals.
pub fn extract(v: &SignatureViews, cfg: &FeatureConfig) -> Result<FeatureVector> {
    let mut values = Vec::with_capacity(N_GLOBAL + N_LOCAL);
    values.extend_from_slice(&global_features(v, cfg)?);
    values.extend_from_slice(&local_features(v)?);
    FeatureVector::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::GrayImage;

    fn views_from(binary: BinaryImage) -> SignatureViews {
        SignatureViews {
            gray: binary.to_gray(),
            thinned: binary.clone(),
            hpr: binary.clone(),
            binary,
        }
    }

    #[test]
    fn cell_bounds_absorb_remainder() {
        assert_eq!(cell_bounds(128), [(0, 25), (25, 50), (50, 75), (75, 100), (100, 128)]);
    }

    #[test]
    fn full_ink_frame() {
        let v = views_from(BinaryImage::from_fn(256, 128, |_, _| true));
        let g = global_features(&v, &FeatureConfig::default()).unwrap();
        assert_eq!(g[0], 256.0);
        assert_eq!(g[1], 128.0);
        assert_eq!(g[2], 2.0);
        assert_eq!(g[7], 32768.0);
        assert_eq!(g[10], 1.0);
        let l = local_features(&v).unwrap();
        for c in 0..N_CELLS {
            assert_eq!(l[c * PER_CELL + 1], 1.0);
        }
    }

    #[test]
    fn empty_cell_convention() {
        // ink only in the top-left cell of a 50x50 frame
        let v = views_from(BinaryImage::from_fn(50, 50, |x, y| x < 10 && y < 10));
        let l = local_features(&v).unwrap();
        let last = &l[24 * PER_CELL..];
        assert_eq!(last, &[0.0, 0.0, 5.0, 5.0, 0.0, 0.0]);
        assert_eq!(&l[..PER_CELL], &[100.0, 1.0, 4.5, 4.5, 100.0, 100.0]);
    }

    #[test]
    fn thin_horizontal_line_keeps_finite_width() {
        // every column has a single ink pixel, so no column passes "> 3"
        let v = views_from(BinaryImage::from_fn(40, 16, |x, y| y == 8 && (5..35).contains(&x)));
        let g = global_features(&v, &FeatureConfig::default()).unwrap();
        assert_eq!(g[0], 30.0);
        assert_eq!(g[1], 1.0);
        assert!(g.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn no_ink_is_empty_signature() {
        let gray = GrayImage::filled(10, 10, 255).unwrap();
        let blank = BinaryImage::blank(10, 10);
        let v = SignatureViews {
            gray,
            binary: blank.clone(),
            thinned: blank.clone(),
            hpr: blank,
        };
        assert!(matches!(extract(&v, &FeatureConfig::default()), Err(Error::EmptySignature { .. })));
    }
}
