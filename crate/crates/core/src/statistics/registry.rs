use std::fmt;
use std::sync::Arc;

use crate::combinatorics::{Nc3, NcPartition};

use super::{area_nc, bounce_flip_nc, bounce_nc, leap, mag, mingarc, skew, skew_flip, skip, warmstart, StatError};

/// Which objects a statistic is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatDomain {
    /// Any noncrossing partition.
    Nc,
    /// Only `NC(n, 3)`.
    Nc3,
}

/// Names accepted by [`StatisticFn::builtin`].
pub const BUILTIN_NAMES: [&str; 10] =
    ["skip", "leap", "skew", "skewflip", "mag", "mingarc", "area", "bounce", "bounceflip", "warmstart"];

type Evaluator = dyn Fn(&NcPartition) -> Result<u32, StatError> + Send + Sync;

/// A named statistic on noncrossing partitions.
#[derive(Clone)]
pub struct StatisticFn {
    name: String,
    domain: StatDomain,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for StatisticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StatisticFn").field("name", &self.name).field("domain", &self.domain).finish()
    }
}

fn on_nc3(f: fn(&Nc3) -> u32) -> impl Fn(&NcPartition) -> Result<u32, StatError> {
    move |p| Ok(f(&Nc3::from_partition(p)?))
}

impl StatisticFn {
    pub fn new<F>(name: impl Into<String>, domain: StatDomain, eval: F) -> Self
    where
        F: Fn(&NcPartition) -> Result<u32, StatError> + Send + Sync + 'static,
    {
        StatisticFn { name: name.into(), domain, eval: Arc::new(eval) }
    }

    pub fn builtin(name: &str) -> Result<Self, StatError> {
        use StatDomain::*;
        let stat = match name {
            "skip" => Self::new(name, Nc, |p| Ok(skip(p))),
            "leap" => Self::new(name, Nc3, on_nc3(leap)),
            "skew" => Self::new(name, Nc3, on_nc3(skew)),
            "skewflip" => Self::new(name, Nc3, on_nc3(skew_flip)),
            "mag" => Self::new(name, Nc3, on_nc3(mag)),
            "mingarc" => Self::new(name, Nc, mingarc),
            "area" => Self::new(name, Nc, |p| Ok(area_nc(p))),
            "bounce" => Self::new(name, Nc, bounce_nc),
            "bounceflip" => Self::new(name, Nc, bounce_flip_nc),
            "warmstart" => Self::new(name, Nc, |p| {
                u32::try_from(warmstart(p, p.k())).map_err(|_| StatError::Evaluation {
                    name: "warmstart".into(),
                    object: p.to_string(),
                    reason: "negative value".into(),
                })
            }),
            _ => return Err(StatError::UnknownStatistic(name.to_string())),
        };
        Ok(stat)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> StatDomain {
        self.domain
    }

    /// Evaluates the statistic; failures carry the statistic name and object.
    pub fn eval(&self, p: &NcPartition) -> Result<u32, StatError> {
        (self.eval)(p).map_err(|e| match e {
            e @ StatError::Evaluation { .. } => e,
            other => {
                StatError::Evaluation { name: self.name.clone(), object: p.to_string(), reason: other.to_string() }
            }
        })
    }
}
