use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::formula::Notation;

/// Relative weights of the three operator families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpWeights {
    pub arith: f64,
    pub comparison: f64,
    pub logic: f64,
}

/// Random-formula grammar settings. Every formula is `(body)%3` with `body`
/// of depth at most `max_depth` (a leaf has depth 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub max_depth: u32,
    pub weights: OpWeights,
    /// Probability that a leaf is a literal rather than a variable.
    pub literal_prob: f64,
    /// Literal values to draw from; digits must lie in `0-3`.
    pub literals: Vec<u64>,
    /// Probability that a non-root position above the depth limit stops early.
    pub leaf_prob: f64,
    pub min_len: usize,
    pub max_len: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_name() -> String {
    "custom".into()
}

fn digits_ok(mut x: u64) -> bool {
    loop {
        if x % 10 > 3 {
            return false;
        }
        x /= 10;
        if x == 0 {
            return true;
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::Config(format!("{}: {msg}", self.name)));
        let w = self.weights;
        if [w.arith, w.comparison, w.logic].iter().any(|x| !x.is_finite() || *x < 0.0) {
            return bad("operator weights must be finite and nonnegative".into());
        }
        if w.arith + w.comparison + w.logic <= 0.0 {
            return bad("operator weights sum to zero".into());
        }
        if self.max_depth < 2 {
            return bad(format!("max_depth {} is below 2", self.max_depth));
        }
        if self.min_len > self.max_len {
            return bad(format!("min_len {} exceeds max_len {}", self.min_len, self.max_len));
        }
        for p in [self.literal_prob, self.leaf_prob] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("probability {p} outside [0, 1]"));
            }
        }
        if self.literals.is_empty() && self.literal_prob > 0.0 {
            return bad("literal_prob > 0 with an empty literal pool".into());
        }
        if let Some(x) = self.literals.iter().find(|&&x| !digits_ok(x)) {
            return bad(format!("literal {x} uses digits outside 0-3"));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct PresetFile {
    preset: Vec<GenConfig>,
}

/// The built-in generation presets, in file order.
pub fn presets() -> &'static [GenConfig] {
    static PRESETS: OnceLock<Vec<GenConfig>> = OnceLock::new();
    PRESETS.get_or_init(|| {
        let file: PresetFile = toml::from_str(include_str!("presets.toml")).expect("built-in presets parse");
        for p in &file.preset {
            p.validate().expect("built-in presets are valid");
        }
        file.preset
    })
}

pub fn preset(name: &str) -> Result<&'static GenConfig, SearchError> {
    presets().iter().find(|p| p.name == name).ok_or_else(|| SearchError::Config(format!("unknown preset {name:?}")))
}

/// Parameters of the smoothed character n-gram model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgramConfig {
    pub order: usize,
    pub lambda: f64,
}

impl Default for NgramConfig {
    fn default() -> Self {
        NgramConfig { order: 4, lambda: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CemConfig {
    pub population: usize,
    pub iterations: usize,
    pub elite_frac: f64,
    pub holdout: usize,
    pub notation: Notation,
    pub ngram: NgramConfig,
    /// Longest text the model may emit, in characters.
    pub sample_max_len: usize,
    /// Sampling gives up after `population * attempt_factor` draws.
    pub attempt_factor: usize,
    /// Sequences drawn to estimate the model's next-symbol entropy.
    pub entropy_samples: usize,
    pub seed: u64,
}

impl Default for CemConfig {
    fn default() -> Self {
        CemConfig {
            population: 50_000,
            iterations: 20,
            elite_frac: 0.05,
            holdout: 1000,
            notation: Notation::InfixSpaced,
            ngram: NgramConfig::default(),
            sample_max_len: 240,
            attempt_factor: 20,
            entropy_samples: 200,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub tournament: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Children whose infix text exceeds this many characters are rejected.
    pub size_cap: usize,
    pub elitism: usize,
    /// Depth limit of subtrees grown by mutation.
    pub mutation_depth: u32,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 2000,
            generations: 50,
            tournament: 4,
            crossover_prob: 0.7,
            mutation_prob: 0.2,
            size_cap: 200,
            elitism: 1,
            mutation_depth: 3,
            seed: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_presets() {
        let ps = presets();
        assert_eq!(ps.len(), 20);
        let mut names: Vec<&str> = ps.iter().map(|p| p.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 20);
        assert!(ps.iter().all(|p| (2..=4).contains(&p.max_depth) && p.min_len == 5 && p.max_len == 60));
        assert_eq!(preset("d3-logic-high").unwrap().weights.logic, 3.0);
        assert!(preset("d4-logic-low").is_err());
    }

    #[test]
    fn validation() {
        let mut c = presets()[0].clone();
        c.literals.push(14);
        assert!(c.validate().is_err());
        let mut c = presets()[0].clone();
        c.min_len = 70;
        assert!(c.validate().is_err());
        let mut c = presets()[0].clone();
        c.weights = OpWeights { arith: 0.0, comparison: 0.0, logic: 0.0 };
        assert!(c.validate().is_err());
    }
}
