//! Exact q,t-Narayana polynomials and pairing checks against them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::combinatorics::{enumerate_nc, enumerate_pp, CombError};
use crate::statistics::{area_pp, bounce_pp, StatError, StatisticFn};

#[derive(Debug, Error)]
pub enum NarayanaError {
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Sparse polynomial in `q, t` with positive integer coefficients, keyed by
/// `(q exponent, t exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QtPolynomial {
    coeffs: BTreeMap<(u32, u32), u64>,
}

impl QtPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_terms([((0, 0), 1)])
    }

    /// Sums the given terms; zero counts are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), u64)>) -> Self {
        let mut p = Self::zero();
        for (key, c) in terms {
            p.add_term(key.0, key.1, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, count: u64) {
        if count > 0 {
            *self.coeffs.entry((i, j)).or_insert(0) += count;
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> u64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at `q = t = 1`.
    pub fn total_mass(&self) -> u64 {
        self.coeffs.values().sum()
    }

    /// Coefficients of `q^i` as a map `j -> count`.
    pub fn q_slice(&self, i: u32) -> BTreeMap<u32, u64> {
        self.coeffs.range((i, 0)..=(i, u32::MAX)).map(|(&(_, j), &c)| (j, c)).collect()
    }

    /// `F(t, q)`.
    pub fn swapped(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((j, i), c)).collect() }
    }

    /// Coefficientwise difference; fails if any coefficient would go negative.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, NarayanaError> {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.coeffs {
            let have = out.coeff(i, j);
            if have < c {
                return Err(NarayanaError::Invariant(format!(
                    "coefficient of q^{i}*t^{j} would be {}",
                    have as i128 - c as i128
                )));
            }
            if have == c {
                out.coeffs.remove(&(i, j));
            } else {
                out.coeffs.insert((i, j), have - c);
            }
        }
        Ok(out)
    }

    /// True when every coefficient of `self` is at least that of `other`.
    pub fn dominates(&self, other: &Self) -> bool {
        other.coeffs.iter().all(|(&(i, j), &c)| self.coeff(i, j) >= c)
    }
}

impl fmt::Display for QtPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, ((i, j), c)) in self.terms().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*q^{i}*t^{j}")?;
        }
        Ok(())
    }
}

impl FromStr for QtPolynomial {
    type Err = NarayanaError;

    /// Reads the `c*q^i*t^j + ...` form written by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut p = Self::zero();
        if s == "0" {
            return Ok(p);
        }
        for term in s.split(" + ") {
            let bad = || NarayanaError::Parse(format!("bad term {term:?}"));
            let mut parts = term.trim().split('*');
            let (Some(c), Some(q), Some(t), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            let c: u64 = c.parse().map_err(|_| bad())?;
            let i: u32 = q.strip_prefix("q^").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            let j: u32 = t.strip_prefix("t^").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            if c == 0 {
                return Err(bad());
            }
            p.add_term(i, j, c);
        }
        Ok(p)
    }
}

impl Serialize for QtPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

type Cache = Mutex<HashMap<(u32, u32), Arc<QtPolynomial>>>;

/// `N_{n,k}(q, t)`: the joint (area, bounce) distribution over the
/// polyominoes that `eta` sends onto `NC(n, k)`, namely `PP(k, n - k + 1)`.
///
/// Zero when `k == 0` or `n < k`.
pub fn qt_narayana(n: u32, k: u32) -> Arc<QtPolynomial> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&(n, k)) {
        return p.clone();
    }
    let mut poly = QtPolynomial::zero();
    if k >= 1 && n >= k {
        for p in enumerate_pp(k, n - k + 1).expect("positive dimensions") {
            let b = bounce_pp(&p).expect("bounce path exists on every polyomino");
            poly.add_term(area_pp(&p), b, 1);
        }
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert((n, k), poly.clone());
    poly
}

/// `N_{m,k} - N_{m-1,k}`, which has nonnegative coefficients.
pub fn incremental(m: u32, k: u32) -> Result<QtPolynomial, NarayanaError> {
    if k == 0 || m < k {
        return Err(NarayanaError::InvalidArgument(format!("incremental needs 1 <= k <= m, got m={m}, k={k}")));
    }
    qt_narayana(m, k).checked_sub(&qt_narayana(m - 1, k))
}

pub fn is_symmetric(f: &QtPolynomial) -> bool {
    f.terms().all(|((i, j), c)| f.coeff(j, i) == c)
}

/// One coefficient where the observed joint distribution differs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub q_exp: u32,
    pub t_exp: u32,
    pub observed: u64,
    pub expected: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub s1: String,
    pub s2: String,
    pub n: u32,
    pub k: u32,
    #[serde(rename = "match")]
    pub matches: bool,
    pub polynomial_observed: QtPolynomial,
    pub polynomial_expected: QtPolynomial,
    pub first_discrepancy: Option<Discrepancy>,
}

/// Joint distribution of `(s1, s2)` over `NC(n, k)`.
pub fn joint_distribution(s1: &StatisticFn, s2: &StatisticFn, n: u32, k: u32) -> Result<QtPolynomial, NarayanaError> {
    let mut poly = QtPolynomial::zero();
    for p in enumerate_nc(n, k)? {
        poly.add_term(s1.eval(&p)?, s2.eval(&p)?, 1);
    }
    Ok(poly)
}

/// Compares the joint distribution of `(s1, s2)` on `NC(n, k)` with `N_{n,k}`.
pub fn verify_pairing(s1: &StatisticFn, s2: &StatisticFn, n: u32, k: u32) -> Result<PairingReport, NarayanaError> {
    let observed = joint_distribution(s1, s2, n, k)?;
    let expected = (*qt_narayana(n, k)).clone();
    let keys: std::collections::BTreeSet<(u32, u32)> =
        observed.terms().chain(expected.terms()).map(|(key, _)| key).collect();
    let first_discrepancy = keys.into_iter().find_map(|(i, j)| {
        let (o, e) = (observed.coeff(i, j), expected.coeff(i, j));
        (o != e).then_some(Discrepancy { q_exp: i, t_exp: j, observed: o, expected: e })
    });
    Ok(PairingReport {
        s1: s1.name().to_string(),
        s2: s2.name().to_string(),
        n,
        k,
        matches: first_discrepancy.is_none(),
        polynomial_observed: observed,
        polynomial_expected: expected,
        first_discrepancy,
    })
}
