//! The formula language searched by the symbolic method.
//!
//! Formulas are built from the variables `a b c d i`, literals over the
//! digits `0-3`, the arithmetic operators `+ - %`, comparisons `< > =` and the
//! logical operators `∧ ∨ ¬` (ASCII `& | !` are accepted on input). A formula
//! `φ` defines a statistic on `NC(n, 3)` by summing `φ(a, b, c, d, i)` over
//! `i = 1..n`, where `(a, b, c, d)` is the block encoding of the partition.

mod eval;
mod lexer;
mod parser;
mod printer;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::{fingerprint, Env, EvalError, ObjectTable};
pub use lexer::{tokenize, Tok, Token};
pub use parser::{parse, parse_infix, parse_rpn};
pub use printer::print;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("unexpected character {found:?} at position {pos}")]
    Lex { pos: usize, found: char },
    #[error("literal at position {pos} is too large")]
    LiteralTooLarge { pos: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Domain(String),
    #[error("unknown notation {0:?} (expected infix, rpn or infix_spaced)")]
    UnknownNotation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A,
    B,
    C,
    D,
    I,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::A, Var::B, Var::C, Var::D, Var::I];

    pub fn symbol(self) -> char {
        match self {
            Var::A => 'a',
            Var::B => 'b',
            Var::C => 'c',
            Var::D => 'd',
            Var::I => 'i',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mod,
    Lt,
    Gt,
    Eq,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mod => '%',
            BinOp::Lt => '<',
            BinOp::Gt => '>',
            BinOp::Eq => '=',
            BinOp::And => '∧',
            BinOp::Or => '∨',
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Lt | BinOp::Gt | BinOp::Eq)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(Var),
    Lit(u64),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    /// `(self) % 3`, the form every search candidate takes.
    pub fn mod3(self) -> Expr {
        Expr::bin(BinOp::Mod, self, Expr::Lit(3))
    }

    /// The expression under a `% 3` root, if the formula has that form.
    pub fn mod3_body(&self) -> Option<&Expr> {
        match self {
            Expr::Bin(BinOp::Mod, body, rhs) if **rhs == Expr::Lit(3) => Some(body),
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Lit(_) => 1,
            Expr::Not(x) => 1 + x.size(),
            Expr::Bin(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Lit(_) => 1,
            Expr::Not(x) => 1 + x.depth(),
            Expr::Bin(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// The subtree at preorder position `idx` (0 is the root).
    pub fn subtree(&self, idx: usize) -> Option<&Expr> {
        if idx == 0 {
            return Some(self);
        }
        match self {
            Expr::Var(_) | Expr::Lit(_) => None,
            Expr::Not(x) => x.subtree(idx - 1),
            Expr::Bin(_, l, r) => {
                let ls = l.size();
                if idx <= ls {
                    l.subtree(idx - 1)
                } else {
                    r.subtree(idx - 1 - ls)
                }
            }
        }
    }

    /// A copy with the subtree at preorder position `idx` replaced.
    pub fn with_subtree(&self, idx: usize, replacement: &Expr) -> Expr {
        if idx == 0 {
            return replacement.clone();
        }
        match self {
            Expr::Var(_) | Expr::Lit(_) => self.clone(),
            Expr::Not(x) => Expr::Not(Box::new(x.with_subtree(idx - 1, replacement))),
            Expr::Bin(op, l, r) => {
                let ls = l.size();
                if idx <= ls {
                    Expr::Bin(*op, Box::new(l.with_subtree(idx - 1, replacement)), r.clone())
                } else {
                    Expr::Bin(*op, l.clone(), Box::new(r.with_subtree(idx - 1 - ls, replacement)))
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self, Notation::Infix))
    }
}

impl FromStr for Expr {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_infix(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Notation {
    #[default]
    Infix,
    Rpn,
    InfixSpaced,
}

impl Notation {
    pub const ALL: [Notation; 3] = [Notation::Infix, Notation::Rpn, Notation::InfixSpaced];

    pub fn name(self) -> &'static str {
        match self {
            Notation::Infix => "infix",
            Notation::Rpn => "rpn",
            Notation::InfixSpaced => "infix_spaced",
        }
    }
}

impl fmt::Display for Notation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Notation {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Notation::ALL.into_iter().find(|n| n.name() == s).ok_or_else(|| FormulaError::UnknownNotation(s.to_string()))
    }
}

const HEADER: &str = "#notation:";

/// Reads a formula file: an optional `#notation: NAME` first line (infix when
/// absent), then one formula per line. Blank lines and other `#` lines are
/// skipped. Errors name the 1-based line.
pub fn read_formula_file(text: &str) -> Result<(Notation, Vec<Expr>), FormulaError> {
    let mut notation = Notation::Infix;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if lineno == 0 {
            if let Some(name) = line.strip_prefix(HEADER) {
                notation = name.trim().parse()?;
                continue;
            }
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let expr = parse(line, notation).map_err(|e| FormulaError::Domain(format!("line {}: {e}", lineno + 1)))?;
        out.push(expr);
    }
    Ok((notation, out))
}

pub fn write_formula_file(notation: Notation, formulas: &[Expr]) -> String {
    let mut s = format!("{HEADER} {notation}\n");
    for f in formulas {
        s.push_str(&print(f, notation));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const OPS: [BinOp; 8] =
        [BinOp::Add, BinOp::Sub, BinOp::Mod, BinOp::Lt, BinOp::Gt, BinOp::Eq, BinOp::And, BinOp::Or];

    fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.5) {
                Expr::Var(Var::ALL[rng.gen_range(0..5)])
            } else {
                Expr::Lit([0, 1, 2, 3, 10, 23, 302][rng.gen_range(0..7)])
            };
        }
        if rng.gen_bool(0.1) {
            return Expr::Not(Box::new(random_tree(rng, depth - 1)));
        }
        let op = OPS[rng.gen_range(0..OPS.len())];
        Expr::bin(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    }

    #[test]
    fn print_parse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let e = random_tree(&mut rng, 6);
            for notation in Notation::ALL {
                let text = print(&e, notation);
                assert_eq!(parse(&text, notation).unwrap(), e, "{notation}: {text}");
            }
        }
    }

    #[test]
    fn subtree_editing() {
        let e: Expr = "(a+b)%3".parse().unwrap();
        assert_eq!(e.size(), 5);
        assert_eq!(e.depth(), 3);
        assert_eq!(e.subtree(1).unwrap().to_string(), "a+b");
        assert_eq!(e.subtree(3).unwrap().to_string(), "b");
        assert_eq!(e.subtree(4).unwrap().to_string(), "3");
        assert!(e.subtree(5).is_none());
        assert_eq!(e.with_subtree(3, &"c<i".parse().unwrap()).to_string(), "(a+(c<i))%3");
        assert_eq!(e.mod3_body().unwrap().to_string(), "a+b");
        assert!(Expr::Lit(3).mod3_body().is_none());
    }

    #[test]
    fn formula_files() {
        let fs: Vec<Expr> = ["(b<i)∧2", "((i<c-1)+((b<i)∧(i<c+1)))%3"].iter().map(|t| t.parse().unwrap()).collect();
        for notation in Notation::ALL {
            let text = write_formula_file(notation, &fs);
            assert!(text.starts_with(&format!("#notation: {notation}\n")));
            assert_eq!(read_formula_file(&text).unwrap(), (notation, fs.clone()));
        }
        let (n, plain) = read_formula_file("a+b\n\n# note\n!a&b\n").unwrap();
        assert_eq!(n, Notation::Infix);
        assert_eq!(plain.len(), 2);
        let err = read_formula_file("#notation: rpn\na b\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(read_formula_file("#notation: polish\n").is_err());
    }
}
