use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{project, project_homogeneous, FunctionalError, ProjectionResult, Scorer};
use crate::slurp::SlurpInstance;
use crate::symbolic::substream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTrainConfig {
    pub max_iters: usize,
    /// Share of each bag held out from fitting (still projected).
    pub val_frac: f64,
    /// Homogeneity degree to propagate, if any.
    pub h: Option<u32>,
    pub seed: u64,
}

impl Default for SelfTrainConfig {
    fn default() -> Self {
        SelfTrainConfig { max_iters: 50, val_frac: 0.05, h: None, seed: 0 }
    }
}

/// Validation fractions of the ablation grid.
pub const VAL_FRAC_GRID: [f64; 5] = [0.0, 0.01, 0.02, 0.05, 0.10];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub success: bool,
    pub iterations: usize,
    /// Total projection cost per iteration.
    pub costs: Vec<f64>,
    /// Forced-label fallbacks per iteration (homogeneous runs only).
    pub forced_fallbacks: Vec<usize>,
    pub validation: Vec<usize>,
    /// Labels of the last projection, by global index.
    pub labels: Vec<i64>,
}

impl RunResult {
    /// JSON with labels keyed by partition text.
    pub fn to_json(&self, inst: &SlurpInstance, config: &SelfTrainConfig) -> Value {
        let labels: serde_json::Map<String, Value> =
            inst.objects().iter().zip(&self.labels).map(|(p, &l)| (p.to_string(), json!(l))).collect();
        json!({
            "config": config,
            "instance": { "n": inst.n(), "k": inst.k(), "refined": inst.refined() },
            "success": self.success,
            "iterations": self.iterations,
            "costs": self.costs,
            "forced_fallbacks": self.forced_fallbacks,
            "validation_size": self.validation.len(),
            "labels": labels,
        })
    }

    /// `partition,label` rows in global order.
    pub fn write_csv<W: Write>(&self, inst: &SlurpInstance, out: W) -> Result<(), FunctionalError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["partition", "label"])?;
        for (p, l) in inst.objects().iter().zip(&self.labels) {
            w.write_record([p.to_string(), l.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seeded, bag-stratified holdout: `round(val_frac · |bag|)` members per bag.
pub fn validation_split(inst: &SlurpInstance, val_frac: f64, seed: u64) -> Result<Vec<usize>, FunctionalError> {
    if !(0.0..1.0).contains(&val_frac) {
        return Err(FunctionalError::InvalidArgument(format!("val_frac {val_frac} outside [0, 1)")));
    }
    let mut out = Vec::new();
    for (b, bag) in inst.bags().iter().enumerate() {
        let take = (val_frac * bag.len() as f64).round() as usize;
        let mut members = bag.members.clone();
        members.shuffle(&mut substream(seed, 0, b as u32));
        out.extend_from_slice(&members[..take.min(members.len())]);
    }
    out.sort_unstable();
    Ok(out)
}

/// Alternates projection and refitting until a projection leaves every
/// rounded score unchanged (success) or `max_iters` passes are spent.
pub fn self_train(
    inst: &SlurpInstance,
    scorer: &mut dyn Scorer,
    cfg: &SelfTrainConfig,
) -> Result<RunResult, FunctionalError> {
    if cfg.max_iters == 0 {
        return Err(FunctionalError::InvalidArgument("max_iters must be positive".into()));
    }
    let validation = validation_split(inst, cfg.val_frac, cfg.seed)?;
    let mut held = vec![false; inst.len()];
    for &i in &validation {
        held[i] = true;
    }
    let mut result = RunResult {
        success: false,
        iterations: 0,
        costs: Vec::new(),
        forced_fallbacks: Vec::new(),
        validation,
        labels: Vec::new(),
    };
    for it in 1..=cfg.max_iters {
        let scores: Vec<f64> = (0..inst.len()).map(|i| scorer.score(i)).collect();
        let proj: ProjectionResult = match cfg.h {
            Some(h) => project_homogeneous(&scores, inst, h)?,
            None => project(&scores, inst)?,
        };
        result.iterations = it;
        result.costs.push(proj.cost());
        result.forced_fallbacks.push(proj.forced_fallbacks);
        result.labels = proj.labels;
        if !proj.changed {
            if inst.delta(&result.labels)? != 0 {
                return Err(FunctionalError::Internal("projection violated a bag target".into()));
            }
            result.success = true;
            break;
        }
        if it == cfg.max_iters {
            break;
        }
        let pairs: Vec<(usize, i64)> = (0..inst.len()).filter(|&i| !held[i]).map(|i| (i, result.labels[i])).collect();
        scorer.fit(&pairs)?;
    }
    Ok(result)
}

/// Fraction of objects on which two labelings differ.
pub fn disagreement(a: &[i64], b: &[i64]) -> Result<f64, FunctionalError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(FunctionalError::InvalidArgument(format!("labelings of sizes {} and {}", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / a.len() as f64)
}

/// Labels read back from the CSV written by [`RunResult::write_csv`], keyed
/// by partition text.
pub fn read_labels_csv(text: &str) -> Result<BTreeMap<String, i64>, FunctionalError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for rec in r.records() {
        let rec = rec?;
        let label = rec.get(1).and_then(|v| v.parse().ok());
        match (rec.get(0), label) {
            (Some(p), Some(l)) => {
                out.insert(p.to_string(), l);
            }
            _ => return Err(FunctionalError::InvalidArgument(format!("bad label row {rec:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{ConstantScorer, LinearScorer, OracleScorer};
    use crate::statistics::StatisticFn;

    #[test]
    fn oracle_converges_at_once() {
        let inst = SlurpInstance::build(10, 3, true).unwrap();
        let mut s = OracleScorer::from_statistic(&inst, &StatisticFn::builtin("leap").unwrap()).unwrap();
        for h in [None, Some(1)] {
            let r = self_train(&inst, &mut s, &SelfTrainConfig { h, ..Default::default() }).unwrap();
            assert!(r.success);
            assert_eq!(r.iterations, 1);
            assert_eq!(inst.delta(&r.labels).unwrap(), 0);
        }
    }

    #[test]
    fn constant_scorer_fails() {
        let inst = SlurpInstance::build(6, 3, false).unwrap();
        let cfg = SelfTrainConfig { max_iters: 5, ..Default::default() };
        let r = self_train(&inst, &mut ConstantScorer(0.0), &cfg).unwrap();
        assert!(!r.success);
        assert_eq!(r.iterations, 5);
        assert!(*r.costs.last().unwrap() > 0.0);
    }

    #[test]
    fn linear_runs_are_reproducible() {
        let inst = SlurpInstance::build(8, 3, true).unwrap();
        let cfg = SelfTrainConfig { max_iters: 8, val_frac: 0.1, h: Some(1), seed: 4 };
        let a = self_train(&inst, &mut LinearScorer::new(&inst).unwrap(), &cfg).unwrap();
        let b = self_train(&inst, &mut LinearScorer::new(&inst).unwrap(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(inst.delta(&a.labels).unwrap(), 0);
    }

    #[test]
    fn validation_split_is_stratified() {
        let inst = SlurpInstance::build(10, 3, true).unwrap();
        assert!(validation_split(&inst, 0.0, 1).unwrap().is_empty());
        let v = validation_split(&inst, 0.1, 1).unwrap();
        let expected: usize = inst.bags().iter().map(|b| (0.1 * b.len() as f64).round() as usize).sum();
        assert_eq!(v.len(), expected);
        assert_eq!(v, validation_split(&inst, 0.1, 1).unwrap());
        assert_ne!(v, validation_split(&inst, 0.1, 2).unwrap());
        assert!(validation_split(&inst, 1.0, 1).is_err());
        for f in VAL_FRAC_GRID {
            validation_split(&inst, f, 0).unwrap();
        }
    }

    #[test]
    fn disagreement_properties() {
        assert_eq!(disagreement(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0.0);
        assert_eq!(disagreement(&[1, 2, 3, 4], &[1, 0, 3, 0]).unwrap(), 0.5);
        assert_eq!(disagreement(&[1, 0], &[0, 0]).unwrap(), disagreement(&[0, 0], &[1, 0]).unwrap());
        assert!(disagreement(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn label_csv_round_trip() {
        let inst = SlurpInstance::build(5, 3, false).unwrap();
        let mut s = OracleScorer::from_statistic(&inst, &StatisticFn::builtin("leap").unwrap()).unwrap();
        let r = self_train(&inst, &mut s, &SelfTrainConfig::default()).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&inst, &mut buf).unwrap();
        let back = read_labels_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.len(), inst.len());
        for (p, &l) in inst.objects().iter().zip(&r.labels) {
            assert_eq!(back[&p.to_string()], l);
        }
        let json = r.to_json(&inst, &SelfTrainConfig::default());
        assert_eq!(json["labels"].as_object().unwrap().len(), inst.len());
    }
}
