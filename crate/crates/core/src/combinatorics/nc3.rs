use serde::{Deserialize, Serialize};

use super::{CombError, NcPartition};

/// How the four marked elements of an `NC(n, 3)` partition are grouped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Nc3Shape {
    /// One block `{a, b, d}` (encoded with `b == c`).
    Triple,
    /// Blocks `{a, b}` and `{c, d}`.
    Sequential,
    /// Blocks `{a, d}` and `{b, c}`.
    Nested,
}

/// Compact encoding of a partition in `NC(n, 3)`: the sorted elements of its
/// non-singleton blocks `a < b <= c < d` plus the grouping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Nc3 {
    n: u32,
    elems: [u32; 4],
    shape: Nc3Shape,
}

impl Nc3 {
    pub fn new(n: u32, elems: [u32; 4], shape: Nc3Shape) -> Result<Self, CombError> {
        let [a, b, c, d] = elems;
        if !(1 <= a && a < b && b <= c && c < d && d <= n) {
            return Err(CombError::Encoding(format!("elements {elems:?} not ordered inside [1, {n}]")));
        }
        if (b == c) != (shape == Nc3Shape::Triple) {
            return Err(CombError::Encoding(format!("shape {shape:?} inconsistent with {elems:?}")));
        }
        Ok(Nc3 { n, elems, shape })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn elems(&self) -> [u32; 4] {
        self.elems
    }

    pub fn shape(&self) -> Nc3Shape {
        self.shape
    }

    /// Block-wise tuple `(a, b, c, d)`: `{a, b}` is the block holding the
    /// overall minimum and `{c, d}` the other; a triple `{a, b, d}` reads as
    /// `(a, b, b, d)`.
    pub fn block_encoding(&self) -> (i64, i64, i64, i64) {
        let [a, b, c, d] = self.elems.map(i64::from);
        match self.shape {
            Nc3Shape::Triple | Nc3Shape::Sequential => (a, b, c, d),
            Nc3Shape::Nested => (a, d, b, c),
        }
    }

    pub fn to_partition(&self) -> NcPartition {
        let [a, b, c, d] = self.elems;
        let built = match self.shape {
            Nc3Shape::Triple => NcPartition::from_nonsingletons(self.n, &[&[a, b, d]]),
            Nc3Shape::Sequential => NcPartition::from_nonsingletons(self.n, &[&[a, b], &[c, d]]),
            Nc3Shape::Nested => NcPartition::from_nonsingletons(self.n, &[&[a, d], &[b, c]]),
        };
        built.expect("valid NC3 decodes to a valid partition")
    }

    pub fn from_partition(p: &NcPartition) -> Result<Self, CombError> {
        let n = p.n();
        if n < 3 || p.num_blocks() != (n - 2) as usize {
            return Err(CombError::Encoding(format!(
                "expected {} blocks for NC({n}, 3), found {}",
                n.saturating_sub(2),
                p.num_blocks()
            )));
        }
        let big: Vec<&Vec<u32>> = p.nonsingleton_blocks().collect();
        match big.as_slice() {
            [t] if t.len() == 3 => Nc3::new(n, [t[0], t[1], t[1], t[2]], Nc3Shape::Triple),
            [x, y] if x.len() == 2 && y.len() == 2 => {
                // Blocks are ordered by minimum, so x[0] is the overall minimum.
                if x[1] < y[0] {
                    Nc3::new(n, [x[0], x[1], y[0], y[1]], Nc3Shape::Sequential)
                } else {
                    Nc3::new(n, [x[0], y[0], y[1], x[1]], Nc3Shape::Nested)
                }
            }
            _ => Err(CombError::Encoding("unexpected block structure for k = 3".into())),
        }
    }
}

impl TryFrom<&NcPartition> for Nc3 {
    type Error = CombError;

    fn try_from(p: &NcPartition) -> Result<Self, CombError> {
        Nc3::from_partition(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_nc;

    #[test]
    fn examples() {
        let nested = NcPartition::from_nonsingletons(4, &[&[1, 4], &[2, 3]]).unwrap();
        let e = Nc3::from_partition(&nested).unwrap();
        assert_eq!(e.elems(), [1, 2, 3, 4]);
        assert_eq!(e.shape(), Nc3Shape::Nested);
        assert_eq!(e.block_encoding(), (1, 4, 2, 3));

        let triple = NcPartition::from_nonsingletons(4, &[&[1, 2, 4]]).unwrap();
        let t = Nc3::from_partition(&triple).unwrap();
        assert_eq!(t.elems(), [1, 2, 2, 4]);
        assert_eq!(t.shape(), Nc3Shape::Triple);
    }

    #[test]
    fn round_trip_nc_12_3() {
        let all = enumerate_nc(12, 3).unwrap();
        for p in &all {
            let e = Nc3::from_partition(p).unwrap();
            assert_eq!(&e.to_partition(), p);
            assert_eq!(Nc3::from_partition(&e.to_partition()).unwrap(), e);
        }
    }

    #[test]
    fn rejects_wrong_block_count() {
        let p = NcPartition::from_nonsingletons(5, &[&[1, 2], &[3, 4, 5]]).unwrap();
        assert!(matches!(Nc3::from_partition(&p), Err(CombError::Encoding(_))));
        assert!(Nc3::new(4, [1, 2, 3, 4], Nc3Shape::Triple).is_err());
        assert!(Nc3::new(4, [1, 2, 2, 4], Nc3Shape::Nested).is_err());
        assert!(Nc3::new(4, [1, 2, 3, 5], Nc3Shape::Nested).is_err());
    }
}
