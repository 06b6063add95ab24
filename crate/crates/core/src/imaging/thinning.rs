//! Zhang-Suen thinning.
//!
//! Each sub-iteration marks deletable pixels against a snapshot of the image,
//! as in the classic parallel formulation, then re-checks every mark against
//! the partially updated image before clearing it. The re-check only matters
//! for two-pixel-thick strokes, which the purely parallel form erases
//! completely (a 2x2 block vanishes). With it, a pixel is removed only while
//! its ink neighbors form one contiguous run and it is not an end point, so
//! no 8-connected component ever splits or disappears.

use super::BinaryImage;

/// Neighbors P2..P9, clockwise from north.
const RING: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

#[derive(Clone, Copy)]
enum Pass {
    First,
    Second,
}

fn neighbors(img: &BinaryImage, x: usize, y: usize) -> [bool; 8] {
    let mut n = [false; 8];
    for (slot, (dx, dy)) in n.iter_mut().zip(RING) {
        *slot = img.get_or_blank(x as isize + dx, y as isize + dy);
    }
    n
}

fn deletable(img: &BinaryImage, x: usize, y: usize, pass: Pass) -> bool {
    let n = neighbors(img, x, y);
    let b = n.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&i| !n[i] && n[(i + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    // indices into RING: 0=P2 (N), 2=P4 (E), 4=P6 (S), 6=P8 (W)
    let (p2, p4, p6, p8) = (n[0], n[2], n[4], n[6]);
    match pass {
        Pass::First => !(p2 && p4 && p6) && !(p4 && p6 && p8),
        Pass::Second => !(p2 && p4 && p8) && !(p2 && p6 && p8),
    }
}

fn sub_iteration(img: &mut BinaryImage, pass: Pass) -> bool {
    let marked: Vec<(usize, usize)> = img
        .ink_coords()
        .filter(|&(x, y)| deletable(img, x, y, pass))
        .collect();
    let mut changed = false;
    for (x, y) in marked {
        if deletable(img, x, y, pass) {
            img.set(x, y, false);
            changed = true;
        }
    }
    changed
}

/// Reduce every ink stroke to a one-pixel-wide skeleton. Idempotent.
pub fn thin(bin: &BinaryImage) -> BinaryImage {
    let mut img = bin.clone();
    loop {
        let a = sub_iteration(&mut img, Pass::First);
        let b = sub_iteration(&mut img, Pass::Second);
        if !a && !b {
            return img;
        }
    }
}
