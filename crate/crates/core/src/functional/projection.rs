use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FunctionalError;
use crate::slurp::SlurpInstance;

/// Pseudo-labels satisfying every bag target, and how far they sit from the
/// scores they were derived from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    /// Label per object, by global index.
    pub labels: Vec<i64>,
    /// Whether some rounded score differs from its label.
    pub changed: bool,
    /// Per bag, in instance order: sum of `|score - label|`.
    pub bag_costs: Vec<f64>,
    /// Members forced by homogeneity propagation.
    pub forced: usize,
    /// Members whose forced label was no longer available in the bag.
    pub forced_fallbacks: usize,
}

impl ProjectionResult {
    pub fn cost(&self) -> f64 {
        self.bag_costs.iter().sum()
    }
}

fn check_scores(scores: &[f64], inst: &SlurpInstance) -> Result<(), FunctionalError> {
    if scores.len() != inst.len() {
        return Err(FunctionalError::InvalidArgument(format!("{} scores for {} objects", scores.len(), inst.len())));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(FunctionalError::InvalidArgument(format!("score of object {i} is not finite")));
    }
    Ok(())
}

// Sorted members receive the sorted values; ties in score fall back to
// global order.
fn couple(members: &mut [usize], values: &[i64], scores: &[f64], labels: &mut [Option<i64>]) {
    members.sort_by(|&x, &y| scores[x].total_cmp(&scores[y]).then(x.cmp(&y)));
    for (&i, &v) in members.iter().zip(values) {
        labels[i] = Some(v);
    }
}

fn finish(
    scores: &[f64],
    inst: &SlurpInstance,
    labels: Vec<Option<i64>>,
    forced: usize,
    forced_fallbacks: usize,
) -> ProjectionResult {
    let labels: Vec<i64> = labels.into_iter().map(|l| l.expect("every object lies in a bag")).collect();
    let bag_costs =
        inst.bags().iter().map(|b| b.members.iter().map(|&i| (scores[i] - labels[i] as f64).abs()).sum()).collect();
    let changed = scores.iter().zip(&labels).any(|(s, &l)| s.round() != l as f64);
    debug_assert_eq!(inst.delta(&labels).ok(), Some(0));
    ProjectionResult { labels, changed, bag_costs, forced, forced_fallbacks }
}

/// The labeling closest to `scores` in L1 among those meeting every bag
/// target: within a bag, members in ascending score order take the sorted
/// target values.
pub fn project(scores: &[f64], inst: &SlurpInstance) -> Result<ProjectionResult, FunctionalError> {
    check_scores(scores, inst)?;
    let mut labels = vec![None; inst.len()];
    for bag in inst.bags() {
        let mut members = bag.members.clone();
        couple(&mut members, &bag.target_sorted(), scores, &mut labels);
    }
    Ok(finish(scores, inst, labels, 0, 0))
}

/// Projection that propagates `h`-homogeneity: bags are visited by
/// increasing `m`, and a member `p` whose unshift `p'` is already labeled
/// takes `label(p') + h` while that value remains in the bag's target. The
/// rest are coupled monotonically with what remains.
pub fn project_homogeneous(scores: &[f64], inst: &SlurpInstance, h: u32) -> Result<ProjectionResult, FunctionalError> {
    check_scores(scores, inst)?;
    if !inst.refined() {
        return Err(FunctionalError::InvalidArgument("homogeneous projection needs a refined instance".into()));
    }
    if !(1..=2).contains(&h) {
        return Err(FunctionalError::InvalidArgument(format!("homogeneity degree must be 1 or 2, got {h}")));
    }
    let mut order: Vec<usize> = (0..inst.bags().len()).collect();
    order.sort_by_key(|&b| inst.bags()[b].key);
    let mut labels: Vec<Option<i64>> = vec![None; inst.len()];
    let (mut forced, mut fallbacks) = (0, 0);
    for b in order {
        let bag = &inst.bags()[b];
        let mut residual: BTreeMap<i64, u64> = bag.target.clone();
        let mut free = Vec::new();
        for &i in &bag.members {
            let parent = inst.objects()[i].unshift().and_then(|q| inst.index_of(&q)).and_then(|j| labels[j]);
            let Some(pl) = parent else {
                free.push(i);
                continue;
            };
            let want = pl + i64::from(h);
            match residual.get_mut(&want) {
                Some(c) if *c > 0 => {
                    *c -= 1;
                    labels[i] = Some(want);
                    forced += 1;
                }
                _ => {
                    fallbacks += 1;
                    free.push(i);
                }
            }
        }
        let rest: Vec<i64> = residual.iter().flat_map(|(&v, &c)| std::iter::repeat_n(v, c as usize)).collect();
        couple(&mut free, &rest, scores, &mut labels);
    }
    Ok(finish(scores, inst, labels, forced, fallbacks))
}
