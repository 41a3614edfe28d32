//! Statistics on noncrossing partitions and polyominoes, the `k = 3`
//! exchanging bijection, and homogeneity testing.
//!
//! Formulas for `NC(n, 3)` statistics read an [`Nc3`] through its block
//! encoding `(a, b, c, d)`: `{a, b}` is the block containing the smallest
//! marked element, `{c, d}` the other one, and a triple `{a, b, d}` is read as
//! `(a, b, b, d)`.

mod bounce;
mod registry;

pub use bounce::{area_pp, bounce_flip_nc, bounce_nc, bounce_path, bounce_pp, BouncePath};
pub use registry::{StatDomain, StatisticFn, BUILTIN_NAMES};

use thiserror::Error;

use crate::combinatorics::{enumerate_nc, CombError, Nc3, Nc3Shape, NcPartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatError {
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown statistic {0:?}")]
    UnknownStatistic(String),
    #[error("statistic {name} failed on {object}: {reason}")]
    Evaluation { name: String, object: String, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
}

fn nat(v: i64) -> u32 {
    u32::try_from(v).expect("statistic value is a natural number")
}

fn ceil_half(x: i64) -> i64 {
    (x + 1).div_euclid(2)
}

/// Total number of skipped labels inside blocks.
pub fn skip(p: &NcPartition) -> u32 {
    p.blocks().iter().map(|b| b[b.len() - 1] - b[0] + 1 - b.len() as u32).sum()
}

/// `c - 2 + max(0, c - b)`, or `b - 2` on a triple.
pub fn leap(e: &Nc3) -> u32 {
    let (_, b, c, _) = e.block_encoding();
    nat(c - 2 + (c - b).max(0))
}

/// `c - 2 + (a if b < c else 0)`, or `b - 2` on a triple.
pub fn skew(e: &Nc3) -> u32 {
    let (a, b, c, _) = e.block_encoding();
    nat(c - 2 + if b < c { a } else { 0 })
}

/// `a + c - 2 - ceil((min(b, c) - a) / 2)`.
///
/// When `b <= c` (sequential blocks and triples) this is
/// `a + max(b, c) - 2 - ceil((b - a) / 2)`. On nested blocks that expression
/// breaks the pairing with skip already on `NC(4, 3)`, so the second block's
/// minimum `c` takes the place of `b` there.
pub fn mag(e: &Nc3) -> u32 {
    let (a, b, c, _) = e.block_encoding();
    nat(a + c - 2 - ceil_half(b.min(c) - a))
}

/// [`skew`] of the reflected partition.
pub fn skew_flip(e: &Nc3) -> u32 {
    let flipped = Nc3::from_partition(&e.to_partition().flip()).expect("flip preserves NC(n, 3)");
    skew(&flipped)
}

/// `sum over blocks of (sum - max)`, minus `k(k-1)/2`.
pub fn warmstart(p: &NcPartition, k: u32) -> i64 {
    let raw: i64 =
        p.blocks().iter().map(|b| b.iter().map(|&x| i64::from(x)).sum::<i64>() - i64::from(b[b.len() - 1])).sum();
    raw - i64::from(k) * (i64::from(k) - 1) / 2
}

/// Sum over ordered block pairs `(β, β')` of `#{i in β' : i < max β < max β'}`.
pub fn area_nc(p: &NcPartition) -> u32 {
    let blocks = p.blocks();
    let mut total = 0;
    for lower in blocks {
        let top = lower[lower.len() - 1];
        for upper in blocks {
            if top < upper[upper.len() - 1] {
                total += upper.iter().take_while(|&&i| i < top).count() as u32;
            }
        }
    }
    total
}

/// Selected arcs of the min-gap-arc construction, as `(left, right)` pairs.
pub fn mingarc_arcs(p: &NcPartition) -> Result<Vec<(u32, u32)>, StatError> {
    let k = p.k();
    if k < 2 {
        return Err(StatError::InvalidArgument(format!("mingarc needs k >= 2, got k = {k}")));
    }
    let n = p.n();
    let blocks = p.blocks();
    let mut minima: Vec<u32> = blocks.iter().map(|b| b[0]).collect();
    let mut maxima: Vec<u32> = blocks.iter().map(|b| b[b.len() - 1]).collect();
    minima.sort_unstable();
    maxima.sort_unstable();
    minima.push(n + 1);

    let mut is_max = vec![false; n as usize + 1];
    for &c in &maxima {
        is_max[c as usize] = true;
    }
    let left: Vec<u32> = (1..=n).filter(|&x| !is_max[x as usize]).collect();
    let mut right = Vec::with_capacity(left.len());
    for (r, &c) in maxima.iter().enumerate() {
        let gap = minima[r + 1] - minima[r] - 1;
        right.extend(std::iter::repeat_n(c, gap as usize));
    }
    if left.len() != right.len() {
        return Err(StatError::Internal("mingarc endpoint lists differ in length".into()));
    }

    let mut kept: Vec<(u32, u32)> = Vec::new();
    for (&x, &y) in left.iter().zip(&right) {
        match kept.last() {
            Some(&(_, last)) if x <= last => {}
            _ => kept.push((x, y)),
        }
    }
    Ok(kept)
}

/// Sum of `n - right` over the greedily selected candidate arcs.
pub fn mingarc(p: &NcPartition) -> Result<u32, StatError> {
    let n = p.n();
    Ok(mingarc_arcs(p)?.iter().map(|&(_, y)| n - y).sum())
}

/// The involution on `NC(n, 3)` exchanging skip and leap:
/// `(a, b, c, d) -> (d - c, b + d - a - c, d - a, d)` on the sorted marked
/// elements, swapping sequential and nested pairs.
pub fn exchange_skip_leap(e: &Nc3) -> Nc3 {
    let [a, b, c, d] = e.elems();
    let elems = [d - c, b + d - a - c, d - a, d];
    let shape = match e.shape() {
        Nc3Shape::Triple => Nc3Shape::Triple,
        Nc3Shape::Sequential => Nc3Shape::Nested,
        Nc3Shape::Nested => Nc3Shape::Sequential,
    };
    Nc3::new(e.n(), elems, shape).expect("exchange maps NC3 into NC3")
}

/// The unique `h` with `s(shift(p)) = s(p) + h` for every shiftable `p` in
/// `NC(n, 3)`, `3 <= n <= n_max`; `None` when no single `h` works.
pub fn homogeneity_degree(s: &StatisticFn, n_max: u32) -> Result<Option<i64>, StatError> {
    let mut degree = None;
    for n in 3..=n_max {
        for p in enumerate_nc(n, 3)? {
            if p.m_of() >= n {
                continue;
            }
            let diff = i64::from(s.eval(&p.shift()?)?) - i64::from(s.eval(&p)?);
            match degree {
                None => degree = Some(diff),
                Some(h) if h != diff => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(n: u32, blocks: &[&[u32]]) -> NcPartition {
        NcPartition::from_nonsingletons(n, blocks).unwrap()
    }

    fn enc(n: u32, blocks: &[&[u32]]) -> Nc3 {
        Nc3::from_partition(&part(n, blocks)).unwrap()
    }

    #[test]
    fn skip_examples() {
        assert_eq!(skip(&part(9, &[&[1, 4, 5], &[6, 8, 9]])), 3);
        assert_eq!(skip(&part(4, &[&[1, 4], &[2, 3]])), 2);
        assert_eq!(skip(&NcPartition::singletons(6)), 0);
    }

    #[test]
    fn skip_and_leap_on_nc_4_3() {
        // (partition, skip, leap) as drawn for n = 4.
        let table: [(&[&[u32]], u32, u32); 6] = [
            (&[&[1, 2, 3]], 0, 0),
            (&[&[1, 2, 4]], 1, 0),
            (&[&[1, 3, 4]], 1, 1),
            (&[&[2, 3, 4]], 0, 1),
            (&[&[1, 2], &[3, 4]], 0, 2),
            (&[&[1, 4], &[2, 3]], 2, 0),
        ];
        for (blocks, s, l) in table {
            let p = part(4, blocks);
            assert_eq!(skip(&p), s, "{p}");
            assert_eq!(leap(&Nc3::from_partition(&p).unwrap()), l, "{p}");
        }
    }

    #[test]
    fn skew_mag_examples() {
        assert_eq!(skew(&enc(4, &[&[1, 2], &[3, 4]])), 2);
        assert_eq!(skew(&enc(4, &[&[1, 4], &[2, 3]])), 0);
        assert_eq!(skew(&enc(4, &[&[1, 3, 4]])), 1);
        assert_eq!(mag(&enc(4, &[&[1, 2], &[3, 4]])), 1);
        assert_eq!(mag(&enc(4, &[&[1, 4], &[2, 3]])), 0);
        assert_eq!(mag(&enc(4, &[&[2, 3, 4]])), 2);
        assert_eq!(mag(&enc(4, &[&[1, 2, 3]])), 0);
    }

    #[test]
    fn skew_flip_examples() {
        assert_eq!(skew_flip(&enc(4, &[&[1, 2], &[3, 4]])), 2);
        assert_eq!(skew_flip(&enc(4, &[&[1, 2, 4]])), 1);
    }

    #[test]
    fn warmstart_examples() {
        assert_eq!(warmstart(&part(4, &[&[2, 3, 4]]), 3), 2);
        assert_eq!(warmstart(&part(4, &[&[1, 2, 3]]), 3), 0);
    }

    #[test]
    fn area_examples() {
        assert_eq!(area_nc(&part(4, &[&[1, 2, 4]])), 2);
        assert_eq!(area_nc(&part(4, &[&[1, 2, 3]])), 0);
        let mut all: Vec<u32> = enumerate_nc(4, 3).unwrap().iter().map(area_nc).collect();
        all.sort();
        assert_eq!(all, vec![0, 0, 0, 1, 1, 2]);
    }

    #[test]
    fn mingarc_examples() {
        let a = part(6, &[&[1, 6], &[2, 3], &[4, 5]]);
        assert_eq!(mingarc_arcs(&a).unwrap(), vec![(1, 5)]);
        assert_eq!(mingarc(&a).unwrap(), 1);
        let b = part(6, &[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(mingarc_arcs(&b).unwrap(), vec![(1, 2), (3, 4), (5, 6)]);
        assert_eq!(mingarc(&b).unwrap(), 6);
        assert_eq!(mingarc(&part(4, &[&[1, 2, 4]])).unwrap(), 1);
        assert!(matches!(mingarc(&NcPartition::singletons(3)), Err(StatError::InvalidArgument(_))));
    }

    #[test]
    fn mingarc_closed_forms_for_k3() {
        for n in 3..=12u32 {
            for p in enumerate_nc(n, 3).unwrap() {
                let e = Nc3::from_partition(&p).unwrap();
                let [_, b, c, d] = e.elems();
                let closed = match e.shape() {
                    Nc3Shape::Triple => n - b - 1,
                    Nc3Shape::Sequential => 2 * n - b - d,
                    // Sorted (a, b, c, d) nested is {a, d} | {b, c}: the inner
                    // pair ends at c.
                    Nc3Shape::Nested => n - c - 1,
                };
                assert_eq!(mingarc(&p).unwrap(), closed, "{p}");
                assert_eq!(mingarc(&p).unwrap(), skew_flip(&e), "{p}");
            }
        }
    }

    #[test]
    fn exchange_examples() {
        let t = enc(4, &[&[1, 2, 4]]);
        assert_eq!(exchange_skip_leap(&t).to_partition(), part(4, &[&[2, 3, 4]]));
        let s = enc(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(exchange_skip_leap(&s).to_partition(), part(4, &[&[1, 4], &[2, 3]]));
        let fixed = enc(4, &[&[1, 3, 4]]);
        assert_eq!(exchange_skip_leap(&fixed), fixed);
    }

    #[test]
    fn exchange_is_an_involution_swapping_skip_and_leap() {
        for n in 3..=12 {
            for p in enumerate_nc(n, 3).unwrap() {
                let e = Nc3::from_partition(&p).unwrap();
                let x = exchange_skip_leap(&e);
                assert_eq!(exchange_skip_leap(&x), e);
                assert_eq!(skip(&x.to_partition()), leap(&e), "{p}");
                assert_eq!(leap(&x), skip(&p), "{p}");
            }
        }
    }

    #[test]
    fn values_within_sanity_bound() {
        for n in 3..=10u32 {
            for p in enumerate_nc(n, 3).unwrap() {
                let e = Nc3::from_partition(&p).unwrap();
                for v in [skip(&p), leap(&e), skew(&e), skew_flip(&e), mag(&e), area_nc(&p), mingarc(&p).unwrap()] {
                    assert!(v <= 2 * n);
                }
                assert!(warmstart(&p, 3) >= 0);
                assert!(bounce_nc(&p).unwrap() <= 2 * n);
            }
        }
    }

    #[test]
    fn uncorrected_nested_case_breaks_pairing() {
        // The `max(b, c)` form on every shape: skip and this value on NC(4, 3).
        let uncorrected = |e: &Nc3| {
            let (a, b, c, _) = e.block_encoding();
            a + b.max(c) - 2 - ceil_half(b - a)
        };
        let mut joint: Vec<(u32, i64)> = enumerate_nc(4, 3)
            .unwrap()
            .iter()
            .map(|p| (skip(p), uncorrected(&Nc3::from_partition(p).unwrap())))
            .collect();
        joint.sort();
        assert_eq!(joint, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 1)]);
    }

    #[test]
    fn homogeneity_degrees() {
        let get = |name: &str| StatisticFn::builtin(name).unwrap();
        assert_eq!(homogeneity_degree(&get("skip"), 10).unwrap(), Some(0));
        assert_eq!(homogeneity_degree(&get("leap"), 10).unwrap(), Some(1));
        assert_eq!(homogeneity_degree(&get("mag"), 10).unwrap(), Some(2));
        // Shifting moves three elements of a triple but four of two pairs.
        let total = StatisticFn::new("total", registry::StatDomain::Nc, |p: &NcPartition| {
            Ok(p.nonsingleton_blocks().flatten().sum())
        });
        assert_eq!(homogeneity_degree(&total, 8).unwrap(), None);
    }

    #[test]
    fn shift_preserves_skip() {
        for p in enumerate_nc(10, 3).unwrap() {
            if p.m_of() < 10 {
                assert_eq!(skip(&p.shift().unwrap()), skip(&p));
            }
        }
    }
}
