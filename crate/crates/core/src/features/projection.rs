use crate::error::{Error, Result};
use crate::imaging::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// One bin per row.
    Horizontal,
    /// One bin per column.
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub axis: Axis,
    pub counts: Vec<u32>,
}

/// First and last qualifying bins and the inclusive span between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extent {
    pub lo: usize,
    pub hi: usize,
    pub span: usize,
}

impl Projection {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Number of bins holding at least one ink pixel.
    pub fn support(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

pub fn projection(bin: &BinaryImage, axis: Axis) -> Projection {
    let mut counts = vec![
        0u32;
        match axis {
            Axis::Horizontal => bin.height(),
            Axis::Vertical => bin.width(),
        }
    ];
    for (x, y) in bin.ink_coords() {
        match axis {
            Axis::Horizontal => counts[y] += 1,
            Axis::Vertical => counts[x] += 1,
        }
    }
    Projection { axis, counts }
}

/// Moving average with edge replication, rounded to the nearest count.
pub fn smooth(p: &Projection, window: usize) -> Result<Projection> {
    if window < 3 || window % 2 == 0 {
        return Err(Error::BadWindow(window));
    }
    let n = p.counts.len() as isize;
    let r = (window / 2) as isize;
    let counts = (0..n)
        .map(|i| {
            let sum: u64 = (i - r..=i + r)
                .map(|j| p.counts[j.clamp(0, n - 1) as usize] as u64)
                .sum();
            (sum as f64 / window as f64).round() as u32
        })
        .collect();
    Ok(Projection {
        axis: p.axis,
        counts,
    })
}

/// Bins with more than `min_count` ink pixels. Degenerate `(0, 0, 0)` if none qualify.
pub fn ink_extent(p: &Projection, min_count: u32) -> Extent {
    let mut hits = p
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > min_count)
        .map(|(i, _)| i);
    match hits.next() {
        None => Extent { lo: 0, hi: 0, span: 0 },
        Some(lo) => {
            let hi = hits.last().unwrap_or(lo);
            Extent {
                lo,
                hi,
                span: hi - lo + 1,
            }
        }
    }
}

/// Mean `(x, y)` over ink pixels.
pub fn center_of_gravity(bin: &BinaryImage) -> Result<(f64, f64)> {
    let (mut sx, mut sy, mut n) = (0u64, 0u64, 0u64);
    for (x, y) in bin.ink_coords() {
        sx += x as u64;
        sy += y as u64;
        n += 1;
    }
    if n == 0 {
        return Err(Error::NoInk);
    }
    Ok((sx as f64 / n as f64, sy as f64 / n as f64))
}

/// Row holding the median ink pixel when pixels are ordered by row; lower
/// median for even counts.
pub fn global_baseline(bin: &BinaryImage) -> Result<usize> {
    baseline_of(&projection(bin, Axis::Horizontal))
}

fn baseline_of(rows: &Projection) -> Result<usize> {
    let total = rows.total();
    if total == 0 {
        return Err(Error::NoInk);
    }
    let target = total.div_ceil(2);
    let mut cum = 0u64;
    for (r, &c) in rows.counts.iter().enumerate() {
        cum += c as u64;
        if cum >= target {
            return Ok(r);
        }
    }
    unreachable!("cumulative count reaches the total")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLimits {
    pub upper: usize,
    pub lower: usize,
    pub middle_zone: usize,
}

/// Outermost rows above and below the baseline where the smoothed row
/// projection departs from the raw one. Falls back to the baseline itself.
pub fn edge_limits(bin: &BinaryImage, window: usize) -> Result<EdgeLimits> {
    edge_limits_of(&projection(bin, Axis::Horizontal), window)
}

pub(crate) fn edge_limits_of(rows: &Projection, window: usize) -> Result<EdgeLimits> {
    let b = baseline_of(rows)?;
    let s = smooth(rows, window)?;
    let differs = |r: &usize| s.counts[*r] != rows.counts[*r];
    let upper = (0..b).find(differs).unwrap_or(b);
    let lower = (b + 1..rows.counts.len()).rev().find(differs).unwrap_or(b);
    Ok(EdgeLimits {
        upper,
        lower,
        middle_zone: lower - upper,
    })
}
