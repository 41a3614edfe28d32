use nalgebra::{DMatrix, DVector};

use super::FunctionalError;
use crate::combinatorics::{Nc3, Nc3Shape};
use crate::slurp::SlurpInstance;
use crate::statistics::{warmstart, StatisticFn};

/// A model of the unknown statistic: scores objects by global index and is
/// refit on pseudo-labels.
pub trait Scorer {
    fn fit(&mut self, pairs: &[(usize, i64)]) -> Result<(), FunctionalError>;
    fn score(&self, idx: usize) -> f64;
}

/// Returns fixed values and ignores training; useful as an upper and lower
/// reference around learned scorers.
#[derive(Clone, Debug)]
pub struct OracleScorer {
    values: Vec<f64>,
}

impl OracleScorer {
    pub fn new(values: Vec<f64>) -> Self {
        OracleScorer { values }
    }

    pub fn from_statistic(inst: &SlurpInstance, stat: &StatisticFn) -> Result<Self, FunctionalError> {
        let values = inst.objects().iter().map(|p| stat.eval(p).map(f64::from)).collect::<Result<_, _>>()?;
        Ok(OracleScorer { values })
    }
}

impl Scorer for OracleScorer {
    fn fit(&mut self, _: &[(usize, i64)]) -> Result<(), FunctionalError> {
        Ok(())
    }

    fn score(&self, idx: usize) -> f64 {
        self.values[idx]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantScorer(pub f64);

impl Scorer for ConstantScorer {
    fn fit(&mut self, _: &[(usize, i64)]) -> Result<(), FunctionalError> {
        Ok(())
    }

    fn score(&self, _: usize) -> f64 {
        self.0
    }
}

const FEATURES: usize = 12;
const WARMSTART_FEATURE: usize = FEATURES - 1;

/// Ridge-regularized least squares over block-encoding features of
/// `NC(n, 3)`. Before the first fit it predicts the warm-start statistic.
#[derive(Clone, Debug)]
pub struct LinearScorer {
    features: Vec<[f64; FEATURES]>,
    weights: DVector<f64>,
    ridge: f64,
}

fn features(e: &Nc3, warm: i64) -> [f64; FEATURES] {
    let (a, b, c, d) = e.block_encoding();
    let [a, b, c, d] = [a, b, c, d].map(|x| x as f64);
    let shape = |s| if e.shape() == s { 1.0 } else { 0.0 };
    [
        1.0,
        a,
        b,
        c,
        d,
        f64::from(e.n()),
        b - a,
        c - b,
        d - c,
        shape(Nc3Shape::Sequential),
        shape(Nc3Shape::Nested),
        warm as f64,
    ]
}

impl LinearScorer {
    pub fn new(inst: &SlurpInstance) -> Result<Self, FunctionalError> {
        if inst.k() != 3 {
            return Err(FunctionalError::InvalidArgument(format!("linear features need k = 3, got {}", inst.k())));
        }
        let features = inst
            .objects()
            .iter()
            .map(|p| Ok(features(&Nc3::from_partition(p)?, warmstart(p, 3))))
            .collect::<Result<_, FunctionalError>>()?;
        let mut weights = DVector::zeros(FEATURES);
        weights[WARMSTART_FEATURE] = 1.0;
        Ok(LinearScorer { features, weights, ridge: 1e-6 })
    }

    pub fn weights(&self) -> &[f64] {
        self.weights.as_slice()
    }
}

impl Scorer for LinearScorer {
    fn fit(&mut self, pairs: &[(usize, i64)]) -> Result<(), FunctionalError> {
        if pairs.is_empty() {
            return Err(FunctionalError::InvalidArgument("no training pairs".into()));
        }
        let x = DMatrix::from_fn(pairs.len(), FEATURES, |r, c| self.features[pairs[r].0][c]);
        let y = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(_, v)| v as f64));
        let gram = x.tr_mul(&x) + DMatrix::identity(FEATURES, FEATURES) * self.ridge;
        let chol =
            gram.cholesky().ok_or_else(|| FunctionalError::Numeric("normal equations not positive definite".into()))?;
        self.weights = chol.solve(&x.tr_mul(&y));
        Ok(())
    }

    fn score(&self, idx: usize) -> f64 {
        self.features[idx].iter().zip(self.weights.iter()).map(|(f, w)| f * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_scorer_recovers_a_linear_target() {
        let inst = SlurpInstance::build(8, 3, false).unwrap();
        let mut s = LinearScorer::new(&inst).unwrap();
        let target = |i: usize| {
            let (a, _, c, d) = Nc3::from_partition(&inst.objects()[i]).unwrap().block_encoding();
            2 * d - c + a
        };
        let pairs: Vec<(usize, i64)> = (0..inst.len()).map(|i| (i, target(i))).collect();
        s.fit(&pairs).unwrap();
        for i in 0..inst.len() {
            assert!((s.score(i) - target(i) as f64).abs() < 1e-3);
        }
    }

    #[test]
    fn linear_scorer_starts_at_warmstart() {
        let inst = SlurpInstance::build(6, 3, false).unwrap();
        let s = LinearScorer::new(&inst).unwrap();
        for (i, p) in inst.objects().iter().enumerate() {
            assert_eq!(s.score(i), warmstart(p, 3) as f64);
        }
        assert!(LinearScorer::new(&SlurpInstance::build(6, 4, false).unwrap()).is_err());
    }
}
