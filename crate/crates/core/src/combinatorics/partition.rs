use std::fmt;

use super::CombError;

/// A noncrossing set partition of `{1..n}`.
///
/// Blocks are stored canonically: each block ascending, blocks ordered by
/// their minimum. Singletons are stored explicitly. The derived ordering
/// compares `n` first and then the block lists lexicographically, which is
/// the enumeration order used everywhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NcPartition {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl NcPartition {
    /// Validates and canonicalizes `blocks` as a noncrossing partition of `[n]`.
    pub fn new(n: u32, blocks: Vec<Vec<u32>>) -> Result<Self, CombError> {
        let blocks = canonicalize(blocks);
        if !is_noncrossing(&blocks, n)? {
            return Err(CombError::Crossing);
        }
        Ok(NcPartition { n, blocks })
    }

    /// Builds a partition from its non-singleton blocks; every other element of
    /// `[n]` becomes a singleton.
    pub fn from_nonsingletons(n: u32, blocks: &[&[u32]]) -> Result<Self, CombError> {
        let mut seen = vec![false; n as usize + 1];
        let mut all: Vec<Vec<u32>> = Vec::new();
        for b in blocks {
            for &x in b.iter() {
                if x == 0 || x > n {
                    return Err(CombError::NotAPartition(format!("element {x} outside [1, {n}]")));
                }
                if seen[x as usize] {
                    return Err(CombError::NotAPartition(format!("element {x} repeated")));
                }
                seen[x as usize] = true;
            }
            all.push(b.to_vec());
        }
        for x in 1..=n {
            if !seen[x as usize] {
                all.push(vec![x]);
            }
        }
        Self::new(n, all)
    }

    /// The partition of `[n]` into singletons.
    pub fn singletons(n: u32) -> Self {
        NcPartition { n, blocks: (1..=n).map(|x| vec![x]).collect() }
    }

    pub(crate) fn from_canonical_unchecked(n: u32, blocks: Vec<Vec<u32>>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0][0] < w[1][0]));
        NcPartition { n, blocks }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The `k` for which this partition lies in `NC(n, k)`, i.e. `n - #blocks + 1`.
    pub fn k(&self) -> u32 {
        self.n + 1 - self.blocks.len() as u32
    }

    pub fn nonsingleton_blocks(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.blocks.iter().filter(|b| b.len() > 1)
    }

    /// Largest element lying in a non-singleton block, 0 if there is none.
    pub fn m_of(&self) -> u32 {
        self.nonsingleton_blocks().map(|b| *b.last().unwrap()).max().unwrap_or(0)
    }

    /// Reflection `i -> n + 1 - i`.
    pub fn flip(&self) -> NcPartition {
        let n = self.n;
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| n + 1 - x).collect()).collect();
        NcPartition { n, blocks: canonicalize(blocks) }
    }

    /// Adds 1 to every element of every non-singleton block; the vacated
    /// positions become singletons.
    pub fn shift(&self) -> Result<NcPartition, CombError> {
        if self.m_of() >= self.n {
            return Err(CombError::ShiftOutOfRange { n: self.n });
        }
        let moved: Vec<Vec<u32>> = self.nonsingleton_blocks().map(|b| b.iter().map(|x| x + 1).collect()).collect();
        let refs: Vec<&[u32]> = moved.iter().map(Vec::as_slice).collect();
        Self::from_nonsingletons(self.n, &refs)
    }

    /// Inverse of [`shift`](Self::shift): subtracts 1 from every element of
    /// every non-singleton block. `None` when 1 lies in a non-singleton block.
    pub fn unshift(&self) -> Option<NcPartition> {
        if self.nonsingleton_blocks().any(|b| b[0] == 1) {
            return None;
        }
        let moved: Vec<Vec<u32>> = self.nonsingleton_blocks().map(|b| b.iter().map(|x| x - 1).collect()).collect();
        let refs: Vec<&[u32]> = moved.iter().map(Vec::as_slice).collect();
        Self::from_nonsingletons(self.n, &refs).ok()
    }

    /// Same partition viewed inside `[n + 1]`, with `n + 1` as a new singleton.
    pub fn append_singleton(&self) -> NcPartition {
        let mut blocks = self.blocks.clone();
        blocks.push(vec![self.n + 1]);
        NcPartition { n: self.n + 1, blocks }
    }

    /// Canonical text: blocks joined by `|`, elements by `,`, singletons included.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, n: u32) -> Result<NcPartition, CombError> {
        let text = text.trim();
        if text.is_empty() {
            if n == 0 {
                return Ok(NcPartition { n, blocks: Vec::new() });
            }
            return Err(CombError::Malformed("empty partition text".into()));
        }
        let mut blocks = Vec::new();
        for part in text.split('|') {
            let mut block = Vec::new();
            for item in part.split(',') {
                let item = item.trim();
                let x: u32 = item.parse().map_err(|_| CombError::Malformed(format!("bad element {item:?}")))?;
                block.push(x);
            }
            blocks.push(block);
        }
        Self::new(n, blocks)
    }
}

impl fmt::Display for NcPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

fn canonicalize(mut blocks: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort_unstable_by_key(|b| b.first().copied().unwrap_or(0));
    blocks
}

/// Checks that `blocks` partition `[n]` and reports whether the partition is
/// noncrossing.
///
/// Scans `1..=n` keeping a stack of blocks that have started but not ended;
/// a crossing exists exactly when an element continues a block that is not
/// on top of the stack.
pub fn is_noncrossing(blocks: &[Vec<u32>], n: u32) -> Result<bool, CombError> {
    let mut owner = vec![usize::MAX; n as usize + 1];
    for (bi, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(CombError::NotAPartition("empty block".into()));
        }
        for &x in b {
            if x == 0 || x > n {
                return Err(CombError::NotAPartition(format!("element {x} outside [1, {n}]")));
            }
            if owner[x as usize] != usize::MAX {
                return Err(CombError::NotAPartition(format!("element {x} repeated")));
            }
            owner[x as usize] = bi;
        }
    }
    if let Some(x) = (1..=n).find(|&x| owner[x as usize] == usize::MAX) {
        return Err(CombError::NotAPartition(format!("element {x} missing")));
    }
    let bounds: Vec<(u32, u32)> = blocks.iter().map(|b| (*b.iter().min().unwrap(), *b.iter().max().unwrap())).collect();
    let mut open: Vec<usize> = Vec::new();
    for x in 1..=n {
        let bi = owner[x as usize];
        let (lo, hi) = bounds[bi];
        if lo == hi {
            continue;
        }
        if x == lo {
            open.push(bi);
            continue;
        }
        if open.last() != Some(&bi) {
            return Ok(false);
        }
        if x == hi {
            open.pop();
        }
    }
    Ok(true)
}

/// All noncrossing partitions of `[n]` with `n - k + 1` blocks, in canonical
/// order.
pub fn enumerate_nc(n: u32, k: u32) -> Result<Vec<NcPartition>, CombError> {
    if n == 0 || k == 0 || k > n {
        return Err(CombError::InvalidArgument(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let target_blocks = (n - k + 1) as usize;
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    grow(1, n, target_blocks, &mut blocks, &mut stack, &mut out);
    out.sort_unstable();
    Ok(out)
}

// Element `x` either opens a new block or joins a block on the open stack,
// which closes every block above it for good.
fn grow(x: u32, n: u32, target: usize, blocks: &mut Vec<Vec<u32>>, stack: &mut Vec<usize>, out: &mut Vec<NcPartition>) {
    if x > n {
        if blocks.len() == target {
            out.push(NcPartition::from_canonical_unchecked(n, blocks.clone()));
        }
        return;
    }
    let remaining = (n - x + 1) as usize;
    if blocks.len() + remaining >= target && blocks.len() < target {
        blocks.push(vec![x]);
        stack.push(blocks.len() - 1);
        grow(x + 1, n, target, blocks, stack, out);
        stack.pop();
        blocks.pop();
    }
    if blocks.len() + remaining > target {
        for depth in (0..stack.len()).rev() {
            let bi = stack[depth];
            let saved: Vec<usize> = stack.drain(depth + 1..).collect();
            blocks[bi].push(x);
            grow(x + 1, n, target, blocks, stack, out);
            blocks[bi].pop();
            stack.extend(saved);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crosses_brute(blocks: &[Vec<u32>]) -> bool {
        for (i, p) in blocks.iter().enumerate() {
            for (j, q) in blocks.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &a in p {
                    for &c in p {
                        for &b in q {
                            for &d in q {
                                if a < b && b < c && c < d {
                                    return true;
                                }
                            }
                        }
                    }
                }
            }
        }
        false
    }

    // Restricted growth strings enumerate every set partition once.
    fn all_set_partitions(n: u32) -> Vec<Vec<Vec<u32>>> {
        fn rec(x: u32, n: u32, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
            if x > n {
                out.push(cur.clone());
                return;
            }
            for i in 0..cur.len() {
                cur[i].push(x);
                rec(x + 1, n, cur, out);
                cur[i].pop();
            }
            cur.push(vec![x]);
            rec(x + 1, n, cur, out);
            cur.pop();
        }
        let mut out = Vec::new();
        rec(1, n, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn noncrossing_check_matches_quadruple_search() {
        for n in 1..=7 {
            for p in all_set_partitions(n) {
                assert_eq!(is_noncrossing(&p, n).unwrap(), !crosses_brute(&p), "{p:?}");
            }
        }
    }

    #[test]
    fn enumeration_matches_filtered_set_partitions() {
        for n in 1..=8u32 {
            for k in 1..=n {
                let h = (n - k + 1) as usize;
                let mut expected: Vec<NcPartition> = all_set_partitions(n)
                    .into_iter()
                    .filter(|p| p.len() == h && !crosses_brute(p))
                    .map(|p| NcPartition::new(n, p).unwrap())
                    .collect();
                expected.sort();
                assert_eq!(enumerate_nc(n, k).unwrap(), expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn nc_4_3_listing() {
        let got: Vec<String> = enumerate_nc(4, 3).unwrap().iter().map(|p| p.serialize()).collect();
        assert_eq!(got, ["1|2,3,4", "1,2|3,4", "1,2,3|4", "1,2,4|3", "1,3,4|2", "1,4|2,3"]);
    }

    #[test]
    fn nc_14_3_count() {
        assert_eq!(enumerate_nc(14, 3).unwrap().len(), 2366);
    }

    #[test]
    fn k_one_is_all_singletons() {
        for n in 1..=9 {
            assert_eq!(enumerate_nc(n, 1).unwrap(), vec![NcPartition::singletons(n)]);
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(matches!(enumerate_nc(3, 4), Err(CombError::InvalidArgument(_))));
        assert!(matches!(enumerate_nc(0, 0), Err(CombError::InvalidArgument(_))));
        assert!(matches!(is_noncrossing(&[vec![1, 2]], 3), Err(CombError::NotAPartition(_))));
        assert!(matches!(is_noncrossing(&[vec![1, 2], vec![2, 3]], 3), Err(CombError::NotAPartition(_))));
    }

    #[test]
    fn crossing_examples() {
        assert!(is_noncrossing(&[vec![1, 4], vec![2, 3]], 4).unwrap());
        assert!(!is_noncrossing(&[vec![1, 3], vec![2, 4]], 4).unwrap());
        assert!(is_noncrossing(&[(1..=9).collect()], 9).unwrap());
    }

    #[test]
    fn text_format() {
        let p = NcPartition::new(5, vec![vec![4, 1], vec![5], vec![3, 2]]).unwrap();
        assert_eq!(p.serialize(), "1,4|2,3|5");
        assert_eq!(NcPartition::parse("1,4|2,3|5", 5).unwrap(), p);
        assert!(matches!(NcPartition::parse("1,3|2,4", 4), Err(CombError::Crossing)));
        assert!(matches!(NcPartition::parse("1,x|2", 3), Err(CombError::Malformed(_))));
        assert!(matches!(NcPartition::parse("1,2", 3), Err(CombError::NotAPartition(_))));
        assert!(matches!(NcPartition::parse("", 3), Err(CombError::Malformed(_))));
    }

    #[test]
    fn round_trip_nc_8_3() {
        for p in enumerate_nc(8, 3).unwrap() {
            assert_eq!(NcPartition::parse(&p.serialize(), 8).unwrap(), p);
        }
    }

    #[test]
    fn flip_examples() {
        let p = NcPartition::from_nonsingletons(4, &[&[1, 2, 4]]).unwrap();
        assert_eq!(p.flip(), NcPartition::from_nonsingletons(4, &[&[1, 3, 4]]).unwrap());
        let q = NcPartition::from_nonsingletons(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(q.flip(), q);
        let r = NcPartition::from_nonsingletons(9, &[&[1, 4, 5], &[6, 8, 9]]).unwrap();
        assert_eq!(r.flip(), NcPartition::from_nonsingletons(9, &[&[5, 6, 9], &[1, 2, 4]]).unwrap());
    }

    #[test]
    fn shift_examples() {
        let p = NcPartition::from_nonsingletons(4, &[&[1, 2, 3]]).unwrap();
        assert_eq!(p.shift().unwrap(), NcPartition::from_nonsingletons(4, &[&[2, 3, 4]]).unwrap());
        let q = NcPartition::from_nonsingletons(5, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(q.shift().unwrap(), NcPartition::from_nonsingletons(5, &[&[2, 3], &[4, 5]]).unwrap());
        let full = NcPartition::from_nonsingletons(4, &[&[1, 4]]).unwrap();
        assert!(matches!(full.shift(), Err(CombError::ShiftOutOfRange { .. })));
        assert_eq!(q.shift().unwrap().unshift().unwrap(), q);
        assert!(q.unshift().is_none());
    }

    #[test]
    fn flip_and_shift_preserve_structure() {
        let sizes = |p: &NcPartition| {
            let mut s: Vec<usize> = p.blocks().iter().map(Vec::len).collect();
            s.sort();
            s
        };
        for n in 1..=10 {
            for k in 1..=n {
                for p in enumerate_nc(n, k).unwrap() {
                    let f = p.flip();
                    assert!(is_noncrossing(f.blocks(), n).unwrap());
                    assert_eq!(sizes(&f), sizes(&p));
                    assert_eq!(f.flip(), p);
                    if p.m_of() < n {
                        let s = p.shift().unwrap();
                        assert!(is_noncrossing(s.blocks(), n).unwrap());
                        assert_eq!(sizes(&s), sizes(&p));
                    }
                }
            }
        }
    }

    #[test]
    fn m_of_examples() {
        let p = NcPartition::from_nonsingletons(7, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.m_of(), 4);
        assert_eq!(NcPartition::from_nonsingletons(3, &[&[1, 2, 3]]).unwrap().m_of(), 3);
        assert_eq!(NcPartition::singletons(5).m_of(), 0);
    }
}
