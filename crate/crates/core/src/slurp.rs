//! Rigid-proportion instances: objects grouped into bags, each bag carrying
//! an exact multiset of values that a candidate statistic must reproduce.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::combinatorics::{enumerate_nc, CombError, NcPartition};
use crate::narayana::{incremental, qt_narayana, NarayanaError};
use crate::statistics::skip;

#[derive(Debug, Error)]
pub enum SlurpError {
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    Narayana(#[from] NarayanaError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent instance: {0}")]
    Consistency(String),
    #[error("malformed instance file: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Identifies a bag: by skip value alone, or by filtration level and skip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BagKey {
    Plain { u: u32 },
    Refined { m: u32, u: u32 },
}

impl BagKey {
    pub fn u(&self) -> u32 {
        match *self {
            BagKey::Plain { u } | BagKey::Refined { u, .. } => u,
        }
    }

    pub fn m(&self) -> Option<u32> {
        match *self {
            BagKey::Plain { .. } => None,
            BagKey::Refined { m, .. } => Some(m),
        }
    }
}

impl fmt::Display for BagKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BagKey::Plain { u } => write!(f, "u={u}"),
            BagKey::Refined { m, u } => write!(f, "m={m};u={u}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bag {
    pub key: BagKey,
    /// Global object indices, ascending.
    pub members: Vec<usize>,
    /// Required value multiset: value to multiplicity.
    pub target: BTreeMap<i64, u64>,
}

impl Bag {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The target multiset expanded and sorted ascending.
    pub fn target_sorted(&self) -> Vec<i64> {
        self.target.iter().flat_map(|(&v, &c)| std::iter::repeat_n(v, c as usize)).collect()
    }
}

/// Result of a distance computation; `Invalid` ranks above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(u64),
    Invalid,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Invalid => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Distance::Finite(0)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Invalid => f.write_str("invalid"),
        }
    }
}

/// A rigid-proportion instance over `NC(n, k)` in canonical order.
#[derive(Clone, Debug)]
pub struct SlurpInstance {
    n: u32,
    k: u32,
    refined: bool,
    objects: Vec<NcPartition>,
    bags: Vec<Bag>,
    bag_of: Vec<usize>,
    index: HashMap<NcPartition, usize>,
}

impl PartialEq for SlurpInstance {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.k, self.refined) == (other.n, other.k, other.refined)
            && self.objects == other.objects
            && self.bags == other.bags
    }
}

/// Level whose incremental polynomial supplies the target of a refined bag.
/// Only `k = 1` has objects with `m = 0 < k`; that single object uses level `k`.
fn target_level(m: u32, k: u32) -> u32 {
    m.max(k)
}

impl SlurpInstance {
    /// Builds the skip-pairing benchmark on `NC(n, k)`.
    ///
    /// Unrefined bags group by `u = skip`; their targets are the `q^u` slices of
    /// `N_{n,k}`. Refined bags group by `(m, u)` with targets taken from the
    /// incremental polynomial at level `m`.
    pub fn build(n: u32, k: u32, refined: bool) -> Result<Self, SlurpError> {
        let objects = enumerate_nc(n, k)?;
        let mut groups: BTreeMap<BagKey, Vec<usize>> = BTreeMap::new();
        for (i, p) in objects.iter().enumerate() {
            let u = skip(p);
            let key = if refined { BagKey::Refined { m: p.m_of(), u } } else { BagKey::Plain { u } };
            groups.entry(key).or_default().push(i);
        }
        let mut level_cache: HashMap<u32, crate::narayana::QtPolynomial> = HashMap::new();
        let mut bags = Vec::with_capacity(groups.len());
        for (key, members) in groups {
            let slice = match key {
                BagKey::Plain { u } => qt_narayana(n, k).q_slice(u),
                BagKey::Refined { m, u } => {
                    let level = target_level(m, k);
                    let poly = match level_cache.entry(level) {
                        Entry::Occupied(e) => e.into_mut(),
                        Entry::Vacant(e) => e.insert(incremental(level, k)?),
                    };
                    poly.q_slice(u)
                }
            };
            let target = slice.into_iter().map(|(v, c)| (i64::from(v), c)).collect();
            bags.push(Bag { key, members, target });
        }
        let inst = Self::from_parts(n, k, refined, objects, bags)?;
        let mass: u64 = inst.bags.iter().map(|b| b.target.values().sum::<u64>()).sum();
        let expected = qt_narayana(n, k).total_mass();
        if mass != expected {
            return Err(SlurpError::Consistency(format!(
                "total target mass {mass} differs from N({n},{k}) = {expected}"
            )));
        }
        Ok(inst)
    }

    /// Assembles an instance and checks every structural invariant: objects are
    /// exactly `NC(n, k)` in canonical order, bags are disjoint and cover them,
    /// keys are unique and agree with each member, and each bag's target mass
    /// equals its size.
    pub fn from_parts(
        n: u32,
        k: u32,
        refined: bool,
        objects: Vec<NcPartition>,
        mut bags: Vec<Bag>,
    ) -> Result<Self, SlurpError> {
        let consistency = |msg: String| Err(SlurpError::Consistency(msg));
        if objects != enumerate_nc(n, k)? {
            return consistency(format!("objects are not NC({n},{k}) in canonical order"));
        }
        bags.sort_by_key(|b| b.key);
        let mut bag_of = vec![usize::MAX; objects.len()];
        for (bi, bag) in bags.iter_mut().enumerate() {
            bag.members.sort_unstable();
            if bag.members.is_empty() {
                return consistency(format!("bag {} is empty", bag.key));
            }
            if matches!(bag.key, BagKey::Refined { .. }) != refined {
                return consistency(format!("bag key {} does not match refined={refined}", bag.key));
            }
            let mass: u64 = bag.target.values().sum();
            if bag.target.values().any(|&c| c == 0) {
                return consistency(format!("bag {} has a zero multiplicity", bag.key));
            }
            if mass != bag.members.len() as u64 {
                return consistency(format!(
                    "bag {} has {} members but target mass {mass}",
                    bag.key,
                    bag.members.len()
                ));
            }
            for &i in &bag.members {
                let Some(p) = objects.get(i) else {
                    return consistency(format!("bag {} references object {i} out of range", bag.key));
                };
                if bag_of[i] != usize::MAX {
                    return consistency(format!("object {i} lies in two bags"));
                }
                bag_of[i] = bi;
                let ok = match bag.key {
                    BagKey::Plain { u } => skip(p) == u,
                    BagKey::Refined { m, u } => skip(p) == u && p.m_of() == m,
                };
                if !ok {
                    return consistency(format!("object {p} does not belong to bag {}", bag.key));
                }
            }
        }
        if let Some(w) = bags.windows(2).find(|w| w[0].key == w[1].key) {
            return consistency(format!("bag key {} repeated", w[0].key));
        }
        if let Some(i) = bag_of.iter().position(|&b| b == usize::MAX) {
            return consistency(format!("object {} is in no bag", objects[i]));
        }
        let index = objects.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(SlurpInstance { n, k, refined, objects, bags, bag_of, index })
    }

    /// Same bags, with each target replaced by the multiset of `values` on it.
    /// Any statistic is then an exact solution of the resulting instance.
    pub fn with_targets_from(&self, values: &[i64]) -> Result<Self, SlurpError> {
        self.check_len(values)?;
        let mut out = self.clone();
        for bag in &mut out.bags {
            bag.target.clear();
            for &i in &bag.members {
                *bag.target.entry(values[i]).or_insert(0) += 1;
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn refined(&self) -> bool {
        self.refined
    }

    pub fn objects(&self) -> &[NcPartition] {
        &self.objects
    }

    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Index of the bag containing object `i`.
    pub fn bag_of(&self, i: usize) -> usize {
        self.bag_of[i]
    }

    pub fn index_of(&self, p: &NcPartition) -> Option<usize> {
        self.index.get(p).copied()
    }

    fn check_len(&self, values: &[i64]) -> Result<(), SlurpError> {
        if values.len() != self.objects.len() {
            return Err(SlurpError::InvalidArgument(format!(
                "expected {} values, got {}",
                self.objects.len(),
                values.len()
            )));
        }
        Ok(())
    }

    /// Sum over bags of the L1 distance between target and observed counts.
    pub fn delta(&self, values: &[i64]) -> Result<u64, SlurpError> {
        self.check_len(values)?;
        let mut total = 0u64;
        for bag in &self.bags {
            let mut observed: BTreeMap<i64, u64> = BTreeMap::new();
            for &i in &bag.members {
                *observed.entry(values[i]).or_insert(0) += 1;
            }
            for (v, &c) in &bag.target {
                total += c.abs_diff(observed.get(v).copied().unwrap_or(0));
            }
            for (v, &c) in &observed {
                if !bag.target.contains_key(v) {
                    total += c;
                }
            }
        }
        Ok(total)
    }

    /// Per bag, the L1 distance between the sorted observed values and the
    /// sorted expanded target.
    pub fn sorted_l1(&self, values: &[i64]) -> Result<u64, SlurpError> {
        self.check_len(values)?;
        let mut total = 0u64;
        for bag in &self.bags {
            let mut observed: Vec<i64> = bag.members.iter().map(|&i| values[i]).collect();
            observed.sort_unstable();
            total += observed.iter().zip(bag.target_sorted()).map(|(&o, t)| o.abs_diff(t)).sum::<u64>();
        }
        Ok(total)
    }

    /// [`delta`](Self::delta) on optional values, `None` meaning the candidate
    /// failed to evaluate somewhere.
    pub fn distance(&self, values: Option<&[i64]>) -> Result<Distance, SlurpError> {
        match values {
            Some(v) => Ok(Distance::Finite(self.delta(v)?)),
            None => Ok(Distance::Invalid),
        }
    }

    pub fn to_json(&self) -> Value {
        let bags: Vec<Value> = self
            .bags
            .iter()
            .map(|b| {
                let key = match b.key {
                    BagKey::Plain { u } => json!({ "u": u }),
                    BagKey::Refined { m, u } => json!({ "m": m, "u": u }),
                };
                let target: Map<String, Value> = b.target.iter().map(|(v, c)| (v.to_string(), json!(c))).collect();
                json!({ "key": key, "members": b.members, "target": target })
            })
            .collect();
        let objects: Vec<String> = self.objects.iter().map(NcPartition::serialize).collect();
        json!({ "n": self.n, "k": self.k, "refined": self.refined, "objects": objects, "bags": bags })
    }

    /// Pretty JSON with sorted keys, two-space indentation and a final newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("instance JSON serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self, SlurpError> {
        let v: Value = serde_json::from_str(text).map_err(|e| SlurpError::Malformed(e.to_string()))?;
        let bad = |what: &str| SlurpError::Malformed(what.to_string());
        let uint = |v: &Value, what: &str| -> Result<u32, SlurpError> {
            v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad(what))
        };
        let n = uint(&v["n"], "n must be a nonnegative integer")?;
        let k = uint(&v["k"], "k must be a nonnegative integer")?;
        let refined = v["refined"].as_bool().ok_or_else(|| bad("refined must be a boolean"))?;
        let objects = v["objects"]
            .as_array()
            .ok_or_else(|| bad("objects must be an array"))?
            .iter()
            .map(|o| {
                let text = o.as_str().ok_or_else(|| bad("objects must be strings"))?;
                NcPartition::parse(text, n).map_err(|e| SlurpError::Malformed(format!("object {text:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut bags = Vec::new();
        for b in v["bags"].as_array().ok_or_else(|| bad("bags must be an array"))? {
            let key = &b["key"];
            let u = uint(&key["u"], "bag key needs u")?;
            let key = match key.get("m") {
                Some(m) => BagKey::Refined { m: uint(m, "bag key m must be an integer")?, u },
                None => BagKey::Plain { u },
            };
            let members = b["members"]
                .as_array()
                .ok_or_else(|| bad("members must be an array"))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("members must be integers")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut target = BTreeMap::new();
            for (val, count) in b["target"].as_object().ok_or_else(|| bad("target must be an object"))? {
                let val: i64 = val.parse().map_err(|_| bad("target keys must be integers"))?;
                let count = count.as_u64().ok_or_else(|| bad("target counts must be integers"))?;
                target.insert(val, count);
            }
            bags.push(Bag { key, members, target });
        }
        Self::from_parts(n, k, refined, objects, bags)
    }

    pub fn write(&self, path: &Path) -> Result<(), SlurpError> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, SlurpError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// CSV rows `partition,skip,m,bag` in global order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SlurpError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["partition", "skip", "m", "bag"])?;
        for (i, p) in self.objects.iter().enumerate() {
            let key = self.bags[self.bag_of[i]].key;
            w.write_record([p.serialize(), skip(p).to_string(), p.m_of().to_string(), key.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
