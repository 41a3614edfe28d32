use std::collections::HashMap;

use rand::{Rng, RngCore};

use super::{NgramConfig, SearchError};

/// Characters a formula text may contain, in every notation.
pub const SYMBOLS: [char; 21] =
    ['a', 'b', 'c', 'd', 'i', '0', '1', '2', '3', '+', '-', '%', '(', ')', '∧', '∨', '¬', '<', '>', '=', ' '];

/// Index of the end-of-sequence entry in a next-symbol distribution.
pub const END: usize = SYMBOLS.len();

fn symbol_index(c: char) -> Option<usize> {
    SYMBOLS.iter().position(|&s| s == c)
}

/// A generative model over formula text.
pub trait SequenceModel: Send + Sync {
    /// Probabilities of each of [`SYMBOLS`] and then of ending the sequence,
    /// given the symbols emitted so far (as indices into [`SYMBOLS`]).
    fn next_symbol_distribution(&self, prefix: &[usize]) -> Vec<f64>;

    /// Draws one sequence of at most `max_len` characters.
    fn sample(&self, rng: &mut dyn RngCore, max_len: usize) -> String {
        let mut prefix = Vec::new();
        while prefix.len() < max_len {
            let probs = self.next_symbol_distribution(&prefix);
            let next = draw(&probs, rng);
            if next == END {
                break;
            }
            prefix.push(next);
        }
        prefix.into_iter().map(|i| SYMBOLS[i]).collect()
    }

    /// Mean negative log2-likelihood per emitted symbol (ends included) on `corpus`.
    fn cross_entropy(&self, corpus: &[String]) -> Result<f64, SearchError> {
        let mut total = 0.0;
        let mut steps = 0usize;
        for text in corpus {
            let seq = encode(text)?;
            for t in 0..=seq.len() {
                let probs = self.next_symbol_distribution(&seq[..t]);
                let sym = seq.get(t).copied().unwrap_or(END);
                total -= probs[sym].log2();
                steps += 1;
            }
        }
        Ok(if steps == 0 { 0.0 } else { total / steps as f64 })
    }
}

/// Builds a model from a training corpus.
pub trait ModelFitter {
    type Model: SequenceModel;

    fn fit(&self, corpus: &[String]) -> Result<Self::Model, SearchError>;
}

fn draw(probs: &[f64], rng: &mut dyn RngCore) -> usize {
    let total: f64 = probs.iter().sum();
    let mut x = rng.gen_range(0.0..1.0) * total;
    for (i, &p) in probs.iter().enumerate() {
        if x < p {
            return i;
        }
        x -= p;
    }
    // Rounding left a sliver past the last bucket; take the last nonzero one.
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(END)
}

const BOS: usize = 31;
const VOCAB: usize = SYMBOLS.len() + 1;

// Packs up to 12 context symbols, 5 bits each, behind the context length.
fn pack(context: &[usize]) -> u64 {
    context.iter().fold(context.len() as u64, |acc, &s| (acc << 5) | s as u64)
}

/// Character n-gram model with add-λ smoothing. A context never seen in
/// training backs off to its longest seen suffix.
#[derive(Clone, Debug)]
pub struct NgramModel {
    order: usize,
    lambda: f64,
    counts: HashMap<u64, [u32; VOCAB]>,
}

impl NgramModel {
    fn context<'a>(&self, prefix: &'a [usize], len: usize, buf: &'a mut Vec<usize>) -> &'a [usize] {
        buf.clear();
        let have = prefix.len().min(len);
        buf.extend(std::iter::repeat_n(BOS, len - have));
        buf.extend_from_slice(&prefix[prefix.len() - have..]);
        buf
    }
}

fn encode(text: &str) -> Result<Vec<usize>, SearchError> {
    text.chars()
        .map(|c| {
            symbol_index(c).ok_or_else(|| SearchError::Config(format!("character {c:?} outside the model alphabet")))
        })
        .collect()
}

impl SequenceModel for NgramModel {
    fn next_symbol_distribution(&self, prefix: &[usize]) -> Vec<f64> {
        let mut buf = Vec::with_capacity(self.order);
        for len in (0..self.order).rev() {
            let ctx = self.context(prefix, len, &mut buf);
            if let Some(row) = self.counts.get(&pack(ctx)) {
                let total: u32 = row.iter().sum();
                if total > 0 {
                    let denom = f64::from(total) + self.lambda * VOCAB as f64;
                    return row.iter().map(|&c| (f64::from(c) + self.lambda) / denom).collect();
                }
            }
        }
        vec![1.0 / VOCAB as f64; VOCAB]
    }
}

impl ModelFitter for NgramConfig {
    type Model = NgramModel;

    fn fit(&self, corpus: &[String]) -> Result<NgramModel, SearchError> {
        if corpus.is_empty() {
            return Err(SearchError::EmptyCorpus);
        }
        if !(1..=12).contains(&self.order) || !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(SearchError::Config(format!("bad n-gram settings {self:?}")));
        }
        let mut model = NgramModel { order: self.order, lambda: self.lambda, counts: HashMap::new() };
        let mut buf = Vec::with_capacity(self.order);
        for text in corpus {
            let seq = encode(text)?;
            for t in 0..=seq.len() {
                let sym = seq.get(t).copied().unwrap_or(END);
                for len in 0..self.order {
                    let key = pack(model.context(&seq[..t], len, &mut buf));
                    model.counts.entry(key).or_insert([0; VOCAB])[sym] += 1;
                }
            }
        }
        Ok(model)
    }
}

/// Shannon entropy in bits; zero-probability entries contribute nothing.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// Mean next-symbol entropy over every position of `samples` sequences drawn
/// from the model, the end decision included.
pub fn syntactic_entropy(model: &dyn SequenceModel, samples: usize, max_len: usize, rng: &mut dyn RngCore) -> f64 {
    let mut total = 0.0;
    let mut steps = 0usize;
    for _ in 0..samples {
        let mut prefix = Vec::new();
        loop {
            let probs = model.next_symbol_distribution(&prefix);
            total += entropy_bits(&probs);
            steps += 1;
            let next = draw(&probs, rng);
            if next == END || prefix.len() + 1 >= max_len {
                break;
            }
            prefix.push(next);
        }
    }
    if steps == 0 {
        0.0
    } else {
        total / steps as f64
    }
}
