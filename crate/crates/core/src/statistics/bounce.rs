use crate::combinatorics::{eta_inverse, NcPartition, Polyomino, Step};

use super::StatError;

/// Bounce path of a polyomino with, for every step, the number of east-north
/// turns made strictly before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BouncePath {
    pub steps: Vec<Step>,
    pub labels: Vec<u32>,
}

impl BouncePath {
    pub fn label_sum(&self) -> u32 {
        self.labels.iter().sum()
    }
}

/// Inclusive range of coordinates a path occupies on each column (or row).
fn occupancy(points: &[(u32, u32)], size: u32, by_column: bool) -> Vec<(u32, u32)> {
    let mut ranges = vec![(u32::MAX, 0u32); size as usize + 1];
    for &(x, y) in points {
        let (key, val) = if by_column { (x, y) } else { (y, x) };
        let r = &mut ranges[key as usize];
        r.0 = r.0.min(val);
        r.1 = r.1.max(val);
    }
    ranges
}

// Smallest coordinate strictly above `from` inside `range`.
fn next_hit(range: (u32, u32), from: u32) -> Option<u32> {
    let (lo, hi) = range;
    if lo > hi || from >= hi {
        None
    } else {
        Some(lo.max(from + 1))
    }
}

/// One east step, then alternate: north until the ceiling, east until the
/// floor, until `(w, h)` is reached.
pub fn bounce_path(p: &Polyomino) -> Result<BouncePath, StatError> {
    let (w, h) = (p.width(), p.height());
    let ceiling = occupancy(&Polyomino::points(p.upper()), w, true);
    let floor = occupancy(&Polyomino::points(p.lower()), h, false);

    let mut steps = vec![Step::E];
    let mut labels = vec![0];
    let (mut x, mut y) = (1u32, 0u32);
    let mut turns = 0u32;
    while (x, y) != (w, h) {
        let ny = next_hit(ceiling[x as usize], y)
            .ok_or_else(|| StatError::Internal(format!("bounce path stuck at ({x},{y}) going north")))?;
        turns += 1;
        for _ in y..ny {
            steps.push(Step::N);
            labels.push(turns);
        }
        y = ny;
        if (x, y) == (w, h) {
            break;
        }
        let nx = next_hit(floor[y as usize], x)
            .ok_or_else(|| StatError::Internal(format!("bounce path stuck at ({x},{y}) going east")))?;
        for _ in x..nx {
            steps.push(Step::E);
            labels.push(turns);
        }
        x = nx;
    }
    Ok(BouncePath { steps, labels })
}

/// Cells between the paths, minus `w + h - 1`.
pub fn area_pp(p: &Polyomino) -> u32 {
    p.cell_count() - (p.width() + p.height() - 1)
}

/// Sum of bounce-path labels, minus `w + h - 1`.
pub fn bounce_pp(p: &Polyomino) -> Result<u32, StatError> {
    let path = bounce_path(p)?;
    Ok(path.label_sum() - (p.width() + p.height() - 1))
}

/// Bounce of the polyomino that `eta` sends to `p`.
pub fn bounce_nc(p: &NcPartition) -> Result<u32, StatError> {
    bounce_pp(&eta_inverse(p)?)
}

/// Bounce of the reflected partition.
pub fn bounce_flip_nc(p: &NcPartition) -> Result<u32, StatError> {
    bounce_nc(&p.flip())
}
