use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{GenConfig, SearchError};
use crate::formula::{print, BinOp, Expr, Notation, Var};

const REJECTION_LIMIT: usize = 1000;

/// Independent generator for draw `index` of phase `phase` under `seed`.
pub fn substream(seed: u64, phase: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(phase) << 32) | u64::from(index));
    rng
}

fn leaf(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Expr {
    if !cfg.literals.is_empty() && rng.gen_bool(cfg.literal_prob) {
        Expr::Lit(cfg.literals[rng.gen_range(0..cfg.literals.len())])
    } else {
        Expr::Var(Var::ALL[rng.gen_range(0..Var::ALL.len())])
    }
}

fn operator(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Option<BinOp> {
    let w = cfg.weights;
    let x = rng.gen_range(0.0..w.arith + w.comparison + w.logic);
    let family: &[Option<BinOp>] = if x < w.arith {
        &[Some(BinOp::Add), Some(BinOp::Sub), Some(BinOp::Mod)]
    } else if x < w.arith + w.comparison {
        &[Some(BinOp::Lt), Some(BinOp::Gt), Some(BinOp::Eq)]
    } else {
        // `None` stands for negation.
        &[Some(BinOp::And), Some(BinOp::Or), None]
    };
    family[rng.gen_range(0..family.len())]
}

/// A random tree of depth at most `depth`; the root is an operator when
/// `force_op` holds and `depth > 1`.
pub(crate) fn grow(cfg: &GenConfig, rng: &mut ChaCha8Rng, depth: u32, force_op: bool) -> Expr {
    if depth <= 1 || (!force_op && rng.gen_bool(cfg.leaf_prob)) {
        return leaf(cfg, rng);
    }
    match operator(cfg, rng) {
        Some(op) => {
            let lhs = grow(cfg, rng, depth - 1, false);
            let rhs = grow(cfg, rng, depth - 1, false);
            Expr::bin(op, lhs, rhs)
        }
        None => Expr::Not(Box::new(grow(cfg, rng, depth - 1, false))),
    }
}

/// Draws `(body)%3` formulas until one prints within the length bounds.
pub fn sample_random(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Result<Expr, SearchError> {
    for _ in 0..REJECTION_LIMIT {
        let f = grow(cfg, rng, cfg.max_depth, true).mod3();
        let len = print(&f, Notation::Infix).chars().count();
        if (cfg.min_len..=cfg.max_len).contains(&len) {
            return Ok(f);
        }
    }
    Err(SearchError::Generation(format!(
        "{}: no formula within {}..={} characters after {REJECTION_LIMIT} draws",
        cfg.name, cfg.min_len, cfg.max_len
    )))
}

/// `size` syntactically distinct random formulas. Draw `j` uses preset
/// `j mod cfgs.len()` and its own substream, so the result depends only on
/// `(cfgs, size, seed)`.
pub fn init_population(cfgs: &[GenConfig], size: usize, seed: u64) -> Result<Vec<Expr>, SearchError> {
    if cfgs.is_empty() || size == 0 {
        return Err(SearchError::Config("need at least one preset and a positive size".into()));
    }
    for c in cfgs {
        c.validate()?;
    }
    let limit = size.saturating_mul(100);
    let mut seen = HashSet::with_capacity(size);
    let mut out = Vec::with_capacity(size);
    let mut next = 0usize;
    while out.len() < size && next < limit {
        let batch = (size - out.len()).max(256).min(limit - next);
        let drawn: Vec<Result<Expr, SearchError>> = (next..next + batch)
            .into_par_iter()
            .map(|j| sample_random(&cfgs[j % cfgs.len()], &mut substream(seed, 0, j as u32)))
            .collect();
        next += batch;
        for f in drawn {
            let f = f?;
            if out.len() < size && seen.insert(print(&f, Notation::Infix)) {
                out.push(f);
            }
        }
    }
    if out.len() < size {
        return Err(SearchError::Generation(format!("only {} distinct formulas after {limit} draws", out.len())));
    }
    Ok(out)
}
