use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::hash::{Hash, Hasher};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::grow;
use super::model::{syntactic_entropy, ModelFitter, SequenceModel};
use super::{init_population, substream, CemConfig, GaConfig, GenConfig, SearchError};
use crate::formula::{parse, parse_infix, print, Expr, Notation, ObjectTable};
use crate::slurp::{Distance, SlurpInstance};

/// A scored formula.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub formula: Expr,
    /// Infix text, the canonical form used for dedupe and tie-breaks.
    pub text: String,
    pub distance: Distance,
    /// Hash of the value vector; `None` when evaluation fails somewhere.
    pub class: Option<u64>,
}

impl Candidate {
    fn key(&self) -> (Distance, usize, &str) {
        (self.distance, self.text.chars().count(), &self.text)
    }
}

fn class_of(values: &[i64]) -> u64 {
    let mut h = DefaultHasher::new();
    values.hash(&mut h);
    h.finish()
}

fn score(table: &ObjectTable, inst: &SlurpInstance, formula: Expr) -> Result<Candidate, SearchError> {
    let text = print(&formula, Notation::Infix);
    let (distance, class) = match table.fingerprint(&formula) {
        Some(values) => (Distance::Finite(inst.delta(&values)?), Some(class_of(&values))),
        None => (Distance::Invalid, None),
    };
    Ok(Candidate { formula, text, distance, class })
}

fn evaluate_with(table: &ObjectTable, inst: &SlurpInstance, pop: Vec<Expr>) -> Result<Vec<Candidate>, SearchError> {
    pop.into_par_iter().map(|f| score(table, inst, f)).collect()
}

/// Scores every formula against `inst`, preserving order. Formulas that fail
/// to evaluate get [`Distance::Invalid`].
pub fn evaluate_population(pop: &[Expr], inst: &SlurpInstance) -> Result<Vec<Candidate>, SearchError> {
    evaluate_with(&ObjectTable::new(inst)?, inst, pop.to_vec())
}

/// Indices into a scored population, best first within each part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elite {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// The best `⌈elite_frac · N⌉` candidates by (distance, length, text). Every
/// tenth of them is held out for validation, up to `holdout` items.
pub fn select_elite(scored: &[Candidate], elite_frac: f64, holdout: usize) -> Result<Elite, SearchError> {
    if scored.is_empty() {
        return Err(SearchError::InvalidArgument("empty population".into()));
    }
    if !(elite_frac > 0.0 && elite_frac <= 1.0) {
        return Err(SearchError::Config(format!("elite fraction {elite_frac} outside (0, 1]")));
    }
    let size = ((elite_frac * scored.len() as f64).ceil() as usize).clamp(1, scored.len());
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&x, &y| scored[x].key().cmp(&scored[y].key()).then(x.cmp(&y)));
    order.truncate(size);
    let holdout = holdout.min(size / 10);
    let mut elite = Elite { train: Vec::with_capacity(size), validation: Vec::with_capacity(holdout) };
    for (pos, i) in order.into_iter().enumerate() {
        if (pos + 1) % 10 == 0 && elite.validation.len() < holdout {
            elite.validation.push(i);
        } else {
            elite.train.push(i);
        }
    }
    Ok(elite)
}

/// Base-2 entropy of class frequencies; `None` is the class of formulas that
/// fail to evaluate.
pub fn semantic_entropy_of(classes: &[Option<u64>]) -> Result<f64, SearchError> {
    if classes.is_empty() {
        return Err(SearchError::InvalidArgument("empty population".into()));
    }
    let mut counts: BTreeMap<Option<u64>, usize> = BTreeMap::new();
    for &c in classes {
        *counts.entry(c).or_insert(0) += 1;
    }
    let n = classes.len() as f64;
    Ok(-counts.values().map(|&c| c as f64 / n).map(|p| p * p.log2()).sum::<f64>())
}

/// Entropy of the distribution of functions the population computes on `inst`.
pub fn semantic_entropy(pop: &[Expr], inst: &SlurpInstance) -> Result<f64, SearchError> {
    let scored = evaluate_population(pop, inst)?;
    semantic_entropy_of(&scored.iter().map(|c| c.class).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub population: usize,
    /// Distances are `null` for formulas that fail to evaluate.
    pub best_distance: Option<u64>,
    pub best_formula: String,
    pub best_so_far: Option<u64>,
    /// Mean over formulas with a finite distance.
    pub mean_distance: Option<f64>,
    pub invalid: usize,
    pub semantic_entropy: f64,
    /// Next-symbol entropy of the model fitted on this iteration's elite.
    pub syntactic_entropy: Option<f64>,
    /// Bits per symbol of that model on the held-out elite.
    pub validation_bits: Option<f64>,
    pub mean_length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: u32,
    pub k: u32,
    pub refined: bool,
    pub objects: usize,
    pub bags: usize,
}

impl InstanceSummary {
    fn of(inst: &SlurpInstance) -> Self {
        InstanceSummary {
            n: inst.n(),
            k: inst.k(),
            refined: inst.refined(),
            objects: inst.len(),
            bags: inst.bags().len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub method: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub presets: Vec<String>,
    pub instance: InstanceSummary,
    pub iterations: Vec<IterationRecord>,
    pub best_formula: String,
    pub best_distance: Option<u64>,
    /// Set only after the winning text has been re-parsed and re-scored to 0.
    pub success: bool,
}

impl SearchReport {
    /// Metrics trace as CSV, one row per iteration.
    pub fn trace_csv(&self) -> Result<String, SearchError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.iterations {
            w.serialize(r).map_err(|e| SearchError::InvalidArgument(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| SearchError::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

struct Tracker {
    best: Option<Candidate>,
    records: Vec<IterationRecord>,
}

impl Tracker {
    fn observe(&mut self, scored: &[Candidate]) -> Result<IterationRecord, SearchError> {
        let top = scored.iter().min_by(|x, y| x.key().cmp(&y.key())).expect("population is nonempty");
        if self.best.as_ref().is_none_or(|b| top.key() < b.key()) {
            self.best = Some(top.clone());
        }
        let finite: Vec<u64> = scored.iter().filter_map(|c| c.distance.finite()).collect();
        let mean_distance =
            (!finite.is_empty()).then(|| finite.iter().map(|&d| d as f64).sum::<f64>() / finite.len() as f64);
        let classes: Vec<Option<u64>> = scored.iter().map(|c| c.class).collect();
        Ok(IterationRecord {
            iteration: self.records.len() + 1,
            population: scored.len(),
            best_distance: top.distance.finite(),
            best_formula: top.text.clone(),
            best_so_far: self.best.as_ref().and_then(|b| b.distance.finite()),
            mean_distance,
            invalid: scored.len() - finite.len(),
            semantic_entropy: semantic_entropy_of(&classes)?,
            syntactic_entropy: None,
            validation_bits: None,
            mean_length: scored.iter().map(|c| c.text.chars().count() as f64).sum::<f64>() / scored.len() as f64,
        })
    }

    /// Re-parses the incumbent's printed text and scores it from scratch.
    fn solved(&self, table: &ObjectTable, inst: &SlurpInstance) -> bool {
        let Some(best) = &self.best else { return false };
        best.distance.is_zero()
            && parse_infix(&best.text)
                .ok()
                .and_then(|f| table.fingerprint(&f))
                .is_some_and(|v| inst.delta(&v).ok() == Some(0))
    }

    fn report(
        self,
        method: &str,
        seed: u64,
        config: serde_json::Value,
        gens: &[GenConfig],
        inst: &SlurpInstance,
        success: bool,
    ) -> SearchReport {
        let best = self.best.expect("at least one iteration ran");
        SearchReport {
            method: method.into(),
            seed,
            config,
            presets: gens.iter().map(|g| g.name.clone()).collect(),
            instance: InstanceSummary::of(inst),
            iterations: self.records,
            best_formula: best.text,
            best_distance: best.distance.finite(),
            success,
        }
    }
}

// Substream phases: 0 seeds the initial population, then each iteration
// gets its own sampling and entropy phases.
fn sampling_phase(t: usize) -> u32 {
    1 + 2 * t as u32
}

fn entropy_phase(t: usize) -> u32 {
    2 + 2 * t as u32
}

fn validate_cem(cfg: &CemConfig) -> Result<(), SearchError> {
    if cfg.population == 0 || cfg.iterations == 0 || cfg.sample_max_len == 0 || cfg.attempt_factor == 0 {
        return Err(SearchError::Config(
            "population, iterations, sample_max_len and attempt_factor must be positive".into(),
        ));
    }
    if !(cfg.elite_frac > 0.0 && cfg.elite_frac <= 1.0) {
        return Err(SearchError::Config(format!("elite fraction {} outside (0, 1]", cfg.elite_frac)));
    }
    Ok(())
}

fn sample_population<M: SequenceModel>(model: &M, cfg: &CemConfig, incumbent: &Expr, t: usize) -> Vec<Expr> {
    let mut seen = HashSet::with_capacity(cfg.population);
    seen.insert(incumbent.to_string());
    let mut out = vec![incumbent.clone()];
    let limit = cfg.population.saturating_mul(cfg.attempt_factor);
    let mut next = 0usize;
    while out.len() < cfg.population && next < limit {
        let batch = (2 * (cfg.population - out.len())).max(256).min(limit - next);
        let drawn: Vec<Option<Expr>> = (next..next + batch)
            .into_par_iter()
            .map(|j| {
                let mut rng = substream(cfg.seed, sampling_phase(t), j as u32);
                let text = model.sample(&mut rng, cfg.sample_max_len);
                parse(&text, cfg.notation).ok().filter(|f| f.mod3_body().is_some())
            })
            .collect();
        next += batch;
        for f in drawn.into_iter().flatten() {
            if out.len() < cfg.population && seen.insert(f.to_string()) {
                out.push(f);
            }
        }
    }
    out
}

/// Cross-entropy search with the n-gram model from `cfg.ngram`.
pub fn cem_run(inst: &SlurpInstance, cfg: &CemConfig, gens: &[GenConfig]) -> Result<SearchReport, SearchError> {
    cem_run_with(inst, cfg, gens, &cfg.ngram)
}

/// Cross-entropy search: evaluate, keep the elite, refit the model from
/// scratch on it and sample the next population, until some formula reaches
/// distance 0 or the iterations run out. The incumbent is carried into
/// every new population.
pub fn cem_run_with<F: ModelFitter>(
    inst: &SlurpInstance,
    cfg: &CemConfig,
    gens: &[GenConfig],
    fitter: &F,
) -> Result<SearchReport, SearchError> {
    validate_cem(cfg)?;
    let table = ObjectTable::new(inst)?;
    let mut pop = init_population(gens, cfg.population, cfg.seed)?;
    let mut tracker = Tracker { best: None, records: Vec::new() };
    let mut success = false;
    for t in 0..cfg.iterations {
        let scored = evaluate_with(&table, inst, pop)?;
        let mut rec = tracker.observe(&scored)?;
        if tracker.solved(&table, inst) {
            success = true;
            tracker.records.push(rec);
            break;
        }
        if t + 1 == cfg.iterations {
            tracker.records.push(rec);
            break;
        }
        let elite = select_elite(&scored, cfg.elite_frac, cfg.holdout)?;
        let texts = |idx: &[usize]| idx.iter().map(|&i| print(&scored[i].formula, cfg.notation)).collect::<Vec<_>>();
        let model = fitter.fit(&texts(&elite.train))?;
        let mut rng = substream(cfg.seed, entropy_phase(t), 0);
        rec.syntactic_entropy = Some(syntactic_entropy(&model, cfg.entropy_samples, cfg.sample_max_len, &mut rng));
        if !elite.validation.is_empty() {
            rec.validation_bits = Some(model.cross_entropy(&texts(&elite.validation))?);
        }
        tracker.records.push(rec);
        let incumbent = &tracker.best.as_ref().expect("observed").formula;
        pop = sample_population(&model, cfg, incumbent, t);
    }
    let config = serde_json::to_value(cfg).expect("config serializes");
    Ok(tracker.report("cem", cfg.seed, config, gens, inst, success))
}

fn validate_ga(cfg: &GaConfig) -> Result<(), SearchError> {
    let bad = |msg: &str| Err(SearchError::Config(msg.into()));
    if cfg.population < 2 || cfg.generations == 0 || cfg.tournament == 0 || cfg.mutation_depth == 0 {
        return bad("population >= 2 and positive generations, tournament size and mutation depth are required");
    }
    if cfg.elitism >= cfg.population {
        return bad("elitism must leave room for offspring");
    }
    let (x, m) = (cfg.crossover_prob, cfg.mutation_prob);
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&m) && x + m <= 1.0) {
        return bad("crossover and mutation probabilities must lie in [0, 1] and sum to at most 1");
    }
    Ok(())
}

fn body(f: &Expr) -> &Expr {
    f.mod3_body().unwrap_or(f)
}

fn offspring(scored: &[Candidate], rank: &[usize], cfg: &GaConfig, gen: &GenConfig, rng: &mut ChaCha8Rng) -> Expr {
    let pick = |rng: &mut ChaCha8Rng| {
        let winner = (0..cfg.tournament).map(|_| rng.gen_range(0..scored.len())).min_by_key(|&i| rank[i]);
        &scored[winner.expect("tournament is nonempty")].formula
    };
    let parent = pick(rng);
    let r: f64 = rng.gen();
    let child = if r < cfg.crossover_prob {
        let donor = body(pick(rng));
        let base = body(parent);
        let at = rng.gen_range(0..base.size());
        let from = rng.gen_range(0..donor.size());
        base.with_subtree(at, donor.subtree(from).expect("index in range")).mod3()
    } else if r < cfg.crossover_prob + cfg.mutation_prob {
        let base = body(parent);
        let at = rng.gen_range(0..base.size());
        base.with_subtree(at, &grow(gen, rng, cfg.mutation_depth, false)).mod3()
    } else {
        return parent.clone();
    };
    if child.to_string().chars().count() > cfg.size_cap {
        parent.clone()
    } else {
        child
    }
}

/// Generational genetic programming over `(body)%3` trees: tournament
/// selection, subtree crossover and mutation on the body, elitism, and a hard
/// cap on printed length (an oversized child is replaced by its parent).
pub fn ga_run(inst: &SlurpInstance, cfg: &GaConfig, gens: &[GenConfig]) -> Result<SearchReport, SearchError> {
    validate_ga(cfg)?;
    let table = ObjectTable::new(inst)?;
    let mut pop = init_population(gens, cfg.population, cfg.seed)?;
    let mut tracker = Tracker { best: None, records: Vec::new() };
    let mut success = false;
    for g in 0..cfg.generations {
        let scored = evaluate_with(&table, inst, pop)?;
        let rec = tracker.observe(&scored)?;
        tracker.records.push(rec);
        if tracker.solved(&table, inst) {
            success = true;
            break;
        }
        if g + 1 == cfg.generations {
            break;
        }
        let mut order: Vec<usize> = (0..scored.len()).collect();
        order.sort_by(|&x, &y| scored[x].key().cmp(&scored[y].key()).then(x.cmp(&y)));
        let mut rank = vec![0; scored.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let mut next: Vec<Expr> = order[..cfg.elitism].iter().map(|&i| scored[i].formula.clone()).collect();
        let children: Vec<Expr> = (cfg.elitism..cfg.population)
            .into_par_iter()
            .map(|j| {
                let mut rng = substream(cfg.seed, 1 + g as u32, j as u32);
                offspring(&scored, &rank, cfg, &gens[j % gens.len()], &mut rng)
            })
            .collect();
        next.extend(children);
        pop = next;
    }
    let config = serde_json::to_value(cfg).expect("config serializes");
    Ok(tracker.report("ga", cfg.seed, config, gens, inst, success))
}
