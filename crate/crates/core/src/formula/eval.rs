use super::{BinOp, Expr, FormulaError, Var};
use crate::combinatorics::Nc3;
use crate::slurp::SlurpInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("modulo by zero")]
    ModuloByZero,
    #[error("modulo by a negative number")]
    NegativeDivisor,
    #[error("integer overflow")]
    Overflow,
}

/// Variable bindings for one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Env {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub i: i64,
}

impl Env {
    fn get(&self, v: Var) -> i64 {
        match v {
            Var::A => self.a,
            Var::B => self.b,
            Var::C => self.c,
            Var::D => self.d,
            Var::I => self.i,
        }
    }
}

fn truthy(x: i64) -> bool {
    x != 0
}

impl Expr {
    /// Integer value under `env`. `∧` and `∨` return one of their operand
    /// values and skip the right operand when the left decides the result.
    pub fn eval(&self, env: &Env) -> Result<i64, EvalError> {
        match self {
            Expr::Var(v) => Ok(env.get(*v)),
            Expr::Lit(x) => i64::try_from(*x).map_err(|_| EvalError::Overflow),
            Expr::Not(x) => Ok(i64::from(!truthy(x.eval(env)?))),
            Expr::Bin(op, l, r) => {
                let lhs = l.eval(env)?;
                match op {
                    BinOp::And => return if truthy(lhs) { r.eval(env) } else { Ok(lhs) },
                    BinOp::Or => return if truthy(lhs) { Ok(lhs) } else { r.eval(env) },
                    _ => {}
                }
                let rhs = r.eval(env)?;
                match op {
                    BinOp::Add => lhs.checked_add(rhs).ok_or(EvalError::Overflow),
                    BinOp::Sub => lhs.checked_sub(rhs).ok_or(EvalError::Overflow),
                    BinOp::Mod => match rhs {
                        0 => Err(EvalError::ModuloByZero),
                        r if r < 0 => Err(EvalError::NegativeDivisor),
                        r => Ok(lhs.rem_euclid(r)),
                    },
                    BinOp::Lt => Ok(i64::from(lhs < rhs)),
                    BinOp::Gt => Ok(i64::from(lhs > rhs)),
                    BinOp::Eq => Ok(i64::from(lhs == rhs)),
                    BinOp::And | BinOp::Or => unreachable!(),
                }
            }
        }
    }

    /// `Σ_{i=1..n} eval(a, b, c, d, i)` for a block-encoded `(a, b, c, d)`.
    pub fn apply_encoded(&self, (a, b, c, d): (i64, i64, i64, i64), n: u32) -> Result<i64, EvalError> {
        let mut total: i64 = 0;
        for i in 1..=i64::from(n) {
            let v = self.eval(&Env { a, b, c, d, i })?;
            total = total.checked_add(v).ok_or(EvalError::Overflow)?;
        }
        Ok(total)
    }

    /// The summed statistic on an `NC(n, 3)` partition.
    pub fn apply(&self, e: &Nc3) -> Result<i64, EvalError> {
        self.apply_encoded(e.block_encoding(), e.n())
    }
}

/// Block encodings of an instance's objects, in global order, ready for
/// repeated formula evaluation.
#[derive(Clone, Debug)]
pub struct ObjectTable {
    n: u32,
    rows: Vec<(i64, i64, i64, i64)>,
}

impl ObjectTable {
    pub fn new(inst: &SlurpInstance) -> Result<Self, FormulaError> {
        if inst.k() != 3 {
            return Err(FormulaError::Domain(format!("formulas act on NC(n, 3), instance has k = {}", inst.k())));
        }
        let rows = inst
            .objects()
            .iter()
            .map(|p| Nc3::from_partition(p).map(|e| e.block_encoding()))
            .collect::<Result<_, _>>()
            .map_err(|e| FormulaError::Domain(e.to_string()))?;
        Ok(ObjectTable { n: inst.n(), rows })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of the summed statistic on every object, or `None` if any
    /// evaluation fails.
    pub fn fingerprint(&self, e: &Expr) -> Option<Vec<i64>> {
        self.rows.iter().map(|&row| e.apply_encoded(row, self.n).ok()).collect()
    }
}

/// Value vector of `e` over `inst` in global order; `None` marks a formula
/// that fails somewhere.
pub fn fingerprint(e: &Expr, inst: &SlurpInstance) -> Result<Option<Vec<i64>>, FormulaError> {
    Ok(ObjectTable::new(inst)?.fingerprint(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enumerate_nc, NcPartition};
    use crate::formula::parse_infix;
    use crate::statistics::leap;

    fn ev(text: &str) -> Result<i64, EvalError> {
        parse_infix(text).unwrap().eval(&Env { a: 1, b: 2, c: 3, d: 4, i: 1 })
    }

    #[test]
    fn value_semantics() {
        assert_eq!(ev("0∧3"), Ok(0));
        assert_eq!(ev("2∧3"), Ok(3));
        assert_eq!(ev("2∨3"), Ok(2));
        assert_eq!(ev("0∨3"), Ok(3));
        assert_eq!(ev("¬0"), Ok(1));
        assert_eq!(ev("¬2"), Ok(0));
        assert_eq!(ev("(1-3)%3"), Ok(1));
        assert_eq!(ev("a<b"), Ok(1));
        assert_eq!(ev("a=b"), Ok(0));
        assert_eq!(ev("i%0"), Err(EvalError::ModuloByZero));
        assert_eq!(ev("a%(a-b)"), Err(EvalError::NegativeDivisor));
    }

    #[test]
    fn short_circuit_skips_failures() {
        assert_eq!(ev("0∧(a%0)"), Ok(0));
        assert_eq!(ev("1∨(a%0)"), Ok(1));
        assert_eq!(ev("1∧(a%0)"), Err(EvalError::ModuloByZero));
    }

    #[test]
    fn floored_modulo_identity() {
        for x in -40i64..40 {
            for y in 1i64..7 {
                let env = Env { a: x, b: y, c: 0, d: 0, i: 0 };
                let r = parse_infix("a%b").unwrap().eval(&env).unwrap();
                assert!((0..y).contains(&r));
                assert_eq!(x, y * x.div_euclid(y) + r);
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let big = Expr::Lit(u64::MAX);
        assert_eq!(big.eval(&Env { a: 0, b: 0, c: 0, d: 0, i: 0 }), Err(EvalError::Overflow));
        let e = parse_infix("a+a").unwrap();
        assert_eq!(e.eval(&Env { a: i64::MAX, b: 0, c: 0, d: 0, i: 0 }), Err(EvalError::Overflow));
    }

    #[test]
    fn leap_formula() {
        let f = parse_infix("((i<c-1)+((b<i)∧(i<c+1)))%3").unwrap();
        let p = NcPartition::from_nonsingletons(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(f.apply(&Nc3::from_partition(&p).unwrap()), Ok(2));
        for n in 3..=14 {
            for p in enumerate_nc(n, 3).unwrap() {
                let e = Nc3::from_partition(&p).unwrap();
                assert_eq!(f.apply(&e), Ok(i64::from(leap(&e))), "{p}");
            }
        }
    }

    #[test]
    fn fingerprints() {
        let inst = SlurpInstance::build(7, 3, false).unwrap();
        let fp = |t: &str| fingerprint(&parse_infix(t).unwrap(), &inst).unwrap();
        assert_eq!(fp("a+b-a-b"), fp("0"));
        assert_eq!(fp("0").unwrap().len(), inst.len());
        assert_eq!(fp("(a%(i-i))%3"), None);
        let inst4 = SlurpInstance::build(6, 4, false).unwrap();
        assert!(fingerprint(&Expr::Lit(0), &inst4).is_err());
    }

    #[test]
    fn mod_three_rooted_values_are_bounded() {
        let f = parse_infix("(((c>i)%i%23)∧((b>i)∧2∧0%30+10∨12))%3").unwrap();
        for p in enumerate_nc(14, 3).unwrap() {
            let e = Nc3::from_partition(&p).unwrap();
            let (a, b, c, d) = e.block_encoding();
            for i in 1..=14 {
                let v = f.eval(&Env { a, b, c, d, i }).unwrap();
                assert!((0..3).contains(&v));
            }
            assert!((0..=28).contains(&f.apply(&e).unwrap()));
        }
    }
}
