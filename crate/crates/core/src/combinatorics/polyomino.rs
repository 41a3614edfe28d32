use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::{CombError, NcPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    E,
    N,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
        }
    }

    fn swapped(self) -> Step {
        match self {
            Step::E => Step::N,
            Step::N => Step::E,
        }
    }
}

/// Parallelogram polyomino of width `w` and height `h`: two monotone lattice
/// paths from `(0,0)` to `(w,h)` that touch only at their endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyomino {
    w: u32,
    h: u32,
    lower: Vec<Step>,
    upper: Vec<Step>,
}

impl Polyomino {
    pub fn new(w: u32, h: u32, lower: Vec<Step>, upper: Vec<Step>) -> Result<Self, CombError> {
        if w == 0 || h == 0 {
            return Err(CombError::InvalidArgument(format!("polyomino needs w, h >= 1, got {w}x{h}")));
        }
        let len = (w + h) as usize;
        for path in [&lower, &upper] {
            let norths = path.iter().filter(|s| **s == Step::N).count();
            if path.len() != len || norths != h as usize {
                return Err(CombError::InvalidPolyomino(format!("path does not end at ({w},{h})")));
            }
        }
        // Equal prefix lengths put both paths on the same antidiagonal, so
        // "strictly above" is "strictly more north steps so far".
        let (mut up, mut lo) = (0u32, 0u32);
        for j in 0..len - 1 {
            up += (upper[j] == Step::N) as u32;
            lo += (lower[j] == Step::N) as u32;
            if up <= lo {
                return Err(CombError::InvalidPolyomino(format!("paths meet or cross after {} steps", j + 1)));
            }
        }
        Ok(Polyomino { w, h, lower, upper })
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    pub fn height(&self) -> u32 {
        self.h
    }

    pub fn lower(&self) -> &[Step] {
        &self.lower
    }

    pub fn upper(&self) -> &[Step] {
        &self.upper
    }

    /// Lattice points visited by a path, starting with `(0,0)`.
    pub(crate) fn points(path: &[Step]) -> Vec<(u32, u32)> {
        let mut pts = Vec::with_capacity(path.len() + 1);
        let (mut x, mut y) = (0, 0);
        pts.push((x, y));
        for s in path {
            match s {
                Step::E => x += 1,
                Step::N => y += 1,
            }
            pts.push((x, y));
        }
        pts
    }

    /// Height of each path's east step in columns `0..w`.
    pub(crate) fn column_heights(path: &[Step], w: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(w as usize);
        let mut y = 0;
        for s in path {
            match s {
                Step::E => out.push(y),
                Step::N => y += 1,
            }
        }
        debug_assert_eq!(out.len(), w as usize);
        out
    }

    /// Number of unit cells enclosed between the two paths.
    pub fn cell_count(&self) -> u32 {
        let lo = Self::column_heights(&self.lower, self.w);
        let up = Self::column_heights(&self.upper, self.w);
        lo.iter().zip(&up).map(|(l, u)| u - l).sum()
    }

    /// Reflection through the diagonal, giving a polyomino of size `h x w`.
    pub fn transpose(&self) -> Polyomino {
        Polyomino {
            w: self.h,
            h: self.w,
            lower: self.upper.iter().map(|s| s.swapped()).collect(),
            upper: self.lower.iter().map(|s| s.swapped()).collect(),
        }
    }

    /// Text form `w,h:LOWER/UPPER`.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Polyomino, CombError> {
        let bad = || CombError::Malformed(format!("bad polyomino text {text:?}"));
        let (dims, paths) = text.trim().split_once(':').ok_or_else(bad)?;
        let (w, h) = dims.split_once(',').ok_or_else(bad)?;
        let w: u32 = w.trim().parse().map_err(|_| bad())?;
        let h: u32 = h.trim().parse().map_err(|_| bad())?;
        let (lower, upper) = paths.split_once('/').ok_or_else(bad)?;
        let steps = |s: &str| -> Result<Vec<Step>, CombError> {
            s.chars()
                .map(|c| match c {
                    'E' => Ok(Step::E),
                    'N' => Ok(Step::N),
                    _ => Err(bad()),
                })
                .collect()
        };
        Polyomino::new(w, h, steps(lower)?, steps(upper)?)
    }

    /// Floor-adjacent cells `(col, row)` in indexing-label order.
    fn floor_cells(&self) -> Vec<(u32, u32)> {
        let pts = Self::points(&self.lower);
        pts[1..pts.len() - 1].iter().map(|&(x, y)| (x - 1, y)).collect()
    }

    /// Ceiling-adjacent cells `(col, row)`, bottom row to top, left to right.
    fn ceiling_cells(&self) -> Vec<(u32, u32)> {
        let pts = Self::points(&self.upper);
        pts[1..pts.len() - 1].iter().map(|&(x, y)| (x, y - 1)).collect()
    }
}

impl fmt::Display for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}:", self.w, self.h)?;
        for s in &self.lower {
            write!(f, "{}", s.as_char())?;
        }
        f.write_str("/")?;
        for s in &self.upper {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// All polyominoes of size `w x h`, ordered by `(lower, upper)` with `E < N`.
pub fn enumerate_pp(w: u32, h: u32) -> Result<Vec<Polyomino>, CombError> {
    if w == 0 || h == 0 {
        return Err(CombError::InvalidArgument(format!("polyomino needs w, h >= 1, got {w}x{h}")));
    }
    let mut out = Vec::new();
    let mut lower = vec![Step::E];
    let mut upper = vec![Step::N];
    // State: north counts of upper and lower after the current prefix.
    fn rec(w: u32, h: u32, un: u32, ln: u32, lower: &mut Vec<Step>, upper: &mut Vec<Step>, out: &mut Vec<Polyomino>) {
        let len = lower.len() as u32;
        let total = w + h;
        if len == total - 1 {
            // Lower must finish with N and upper with E.
            if un == h && ln == h - 1 {
                lower.push(Step::N);
                upper.push(Step::E);
                out.push(Polyomino { w, h, lower: lower.clone(), upper: upper.clone() });
                lower.pop();
                upper.pop();
            }
            return;
        }
        let ue = len - un;
        let le = len - ln;
        for us in [Step::E, Step::N] {
            let (nun, nue) = if us == Step::N { (un + 1, ue) } else { (un, ue + 1) };
            if nun > h || nue > w {
                continue;
            }
            for ls in [Step::E, Step::N] {
                let (nln, nle) = if ls == Step::N { (ln + 1, le) } else { (ln, le + 1) };
                if nln > h || nle > w || nun <= nln {
                    continue;
                }
                lower.push(ls);
                upper.push(us);
                rec(w, h, nun, nln, lower, upper, out);
                lower.pop();
                upper.pop();
            }
        }
    }
    rec(w, h, 1, 0, &mut lower, &mut upper, &mut out);
    out.sort_unstable_by(|a, b| (&a.lower, &a.upper).cmp(&(&b.lower, &b.upper)));
    Ok(out)
}

/// The bijection `PP(w, h) -> NC(w + h - 1, w)`; the image has one block per
/// row of the polyomino.
///
/// Floor-adjacent cells receive indexing labels `1..=w+h-1` bottom to top,
/// left to right. Ceiling-adjacent cells are then visited in the same order,
/// each taking the largest unused label whose floor cell sits in the same
/// row or lower. The labels collected in each row form a block.
pub fn eta(p: &Polyomino) -> NcPartition {
    let floor = p.floor_cells();
    let ceiling = p.ceiling_cells();
    let n = floor.len();
    let mut used = vec![false; n];
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); p.h as usize];
    for &(_, row) in &ceiling {
        let label = (0..n)
            .rev()
            .find(|&j| !used[j] && floor[j].1 <= row)
            .expect("a valid polyomino always has a free indexing label");
        used[label] = true;
        rows[row as usize].push(label as u32 + 1);
    }
    let blocks: Vec<Vec<u32>> = rows
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect();
    NcPartition::new(n as u32, blocks).expect("eta produces a noncrossing partition")
}

/// Inverse of [`eta`] at a fixed size, built by forward enumeration.
pub struct EtaTable {
    w: u32,
    h: u32,
    polyominoes: Vec<Polyomino>,
    index: HashMap<NcPartition, usize>,
}

impl EtaTable {
    pub fn build(w: u32, h: u32) -> Result<Self, CombError> {
        let polyominoes = enumerate_pp(w, h)?;
        let mut index = HashMap::with_capacity(polyominoes.len());
        for (i, p) in polyominoes.iter().enumerate() {
            if index.insert(eta(p), i).is_some() {
                return Err(CombError::Internal(format!("eta is not injective on PP({w},{h})")));
            }
        }
        Ok(EtaTable { w, h, polyominoes, index })
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.w, self.h)
    }

    pub fn polyominoes(&self) -> &[Polyomino] {
        &self.polyominoes
    }

    pub fn preimage(&self, p: &NcPartition) -> Option<&Polyomino> {
        self.index.get(p).map(|&i| &self.polyominoes[i])
    }

    pub fn len(&self) -> usize {
        self.polyominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polyominoes.is_empty()
    }
}

/// Shared [`EtaTable`] for `PP(w, h)`, built on first use.
pub fn eta_table(w: u32, h: u32) -> Result<Arc<EtaTable>, CombError> {
    type Cache = Mutex<HashMap<(u32, u32), Arc<EtaTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(w, h)) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(EtaTable::build(w, h)?);
    let mut guard = cache.lock().unwrap();
    Ok(Arc::clone(guard.entry((w, h)).or_insert(table)))
}

/// The polyomino mapped by [`eta`] onto `p`.
///
/// Row `r` of the preimage holds the block with the `r`-th smallest maximum:
/// that maximum is the last indexing label of the row, and the block size is
/// the number of ceiling cells in the row. Both paths follow from these
/// counts; the result is checked by mapping it forward again.
pub fn eta_inverse(p: &NcPartition) -> Result<Polyomino, CombError> {
    let mut rows: Vec<&Vec<u32>> = p.blocks().iter().collect();
    rows.sort_unstable_by_key(|b| b[b.len() - 1]);
    let mut lower = vec![Step::E];
    let mut upper = vec![Step::N];
    let mut prev_top = 0;
    for (r, block) in rows.iter().enumerate() {
        let top = block[block.len() - 1];
        let floor_cells = top - prev_top;
        prev_top = top;
        lower.extend(std::iter::repeat_n(Step::E, floor_cells as usize - 1));
        lower.push(Step::N);
        upper.extend(std::iter::repeat_n(Step::E, block.len() - 1));
        upper.push(if r + 1 < rows.len() { Step::N } else { Step::E });
    }
    let poly = Polyomino::new(p.k(), p.num_blocks() as u32, lower, upper)
        .map_err(|e| CombError::Internal(format!("no eta preimage for {p}: {e}")))?;
    if &eta(&poly) != p {
        return Err(CombError::Internal(format!("no eta preimage for {p}")));
    }
    Ok(poly)
}
