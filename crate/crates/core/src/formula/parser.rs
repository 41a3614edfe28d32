//! Infix grammar, loosest binding first:
//!
//! ```text
//! or   := and ('∨' and)*
//! and  := not ('∧' not)*
//! not  := '¬' not | cmp
//! cmp  := add (('<' | '>' | '=') add)*
//! add  := mod (('+' | '-') mod)*
//! mod  := atom ('%' atom)*
//! atom := var | literal | '(' or ')'
//! ```
//!
//! Every binary level is left-associative, comparison chains included.

use super::lexer::{tokenize, Tok, Token};
use super::{BinOp, Expr, FormulaError, Notation};

struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    end_pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|t| t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end_pos, |t| t.pos)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat_op(&mut self, ops: &[BinOp]) -> Option<BinOp> {
        match self.peek() {
            Some(Tok::Op(op)) if ops.contains(&op) => {
                self.at += 1;
                Some(op)
            }
            _ => None,
        }
    }

    fn left_assoc(
        &mut self,
        ops: &[BinOp],
        next: fn(&mut Self) -> Result<Expr, FormulaError>,
    ) -> Result<Expr, FormulaError> {
        let mut lhs = next(self)?;
        while let Some(op) = self.eat_op(ops) {
            let rhs = next(self)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, FormulaError> {
        self.left_assoc(&[BinOp::Or], Self::and)
    }

    fn and(&mut self) -> Result<Expr, FormulaError> {
        self.left_assoc(&[BinOp::And], Self::not)
    }

    fn not(&mut self) -> Result<Expr, FormulaError> {
        if self.peek() == Some(Tok::Not) {
            self.at += 1;
            return Ok(Expr::Not(Box::new(self.not()?)));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Expr, FormulaError> {
        self.left_assoc(&[BinOp::Lt, BinOp::Gt, BinOp::Eq], Self::add)
    }

    fn add(&mut self) -> Result<Expr, FormulaError> {
        self.left_assoc(&[BinOp::Add, BinOp::Sub], Self::modulo)
    }

    fn modulo(&mut self) -> Result<Expr, FormulaError> {
        self.left_assoc(&[BinOp::Mod], Self::atom)
    }

    fn atom(&mut self) -> Result<Expr, FormulaError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                self.at += 1;
                Ok(Expr::Var(v))
            }
            Some(Tok::Lit(x)) => {
                self.at += 1;
                Ok(Expr::Lit(x))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.or()?;
                if self.peek() != Some(Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(Tok::RParen) => self.error("unexpected ')'"),
            Some(Tok::Op(op)) => self.error(format!("operator '{}' is missing its left operand", op.symbol())),
            Some(Tok::Not) => self.error("'¬' cannot appear here without parentheses"),
            None => self.error("unexpected end of input"),
        }
    }
}

fn end_pos(text: &str) -> usize {
    text.chars().count()
}

pub fn parse_infix_tokens(toks: &[Token], end: usize) -> Result<Expr, FormulaError> {
    let mut p = Parser { toks, at: 0, end_pos: end };
    if toks.is_empty() {
        return p.error("empty formula");
    }
    let expr = p.or()?;
    if p.at < toks.len() {
        return p.error(match toks[p.at].tok {
            Tok::RParen => "unbalanced ')'",
            _ => "unexpected token after complete formula",
        });
    }
    Ok(expr)
}

pub fn parse_rpn_tokens(toks: &[Token], end: usize) -> Result<Expr, FormulaError> {
    let mut stack: Vec<Expr> = Vec::new();
    for t in toks {
        let err = |msg: &str| FormulaError::Parse { pos: t.pos, msg: msg.to_string() };
        match t.tok {
            Tok::Var(v) => stack.push(Expr::Var(v)),
            Tok::Lit(x) => stack.push(Expr::Lit(x)),
            Tok::Not => {
                let x = stack.pop().ok_or_else(|| err("'¬' needs one operand"))?;
                stack.push(Expr::Not(Box::new(x)));
            }
            Tok::Op(op) => {
                let rhs = stack.pop();
                let lhs = stack.pop();
                let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
                    return Err(err("binary operator needs two operands"));
                };
                stack.push(Expr::bin(op, lhs, rhs));
            }
            Tok::LParen | Tok::RParen => return Err(err("parentheses are not used in postfix notation")),
        }
    }
    match stack.len() {
        1 => Ok(stack.pop().unwrap()),
        0 => Err(FormulaError::Parse { pos: end, msg: "empty formula".into() }),
        k => Err(FormulaError::Parse { pos: end, msg: format!("{k} operands left over") }),
    }
}

pub fn parse_infix(text: &str) -> Result<Expr, FormulaError> {
    parse_infix_tokens(&tokenize(text)?, end_pos(text))
}

pub fn parse_rpn(text: &str) -> Result<Expr, FormulaError> {
    parse_rpn_tokens(&tokenize(text)?, end_pos(text))
}

pub fn parse(text: &str, notation: Notation) -> Result<Expr, FormulaError> {
    match notation {
        Notation::Infix | Notation::InfixSpaced => parse_infix(text),
        Notation::Rpn => parse_rpn(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Var;

    fn v(x: Var) -> Expr {
        Expr::Var(x)
    }

    #[test]
    fn precedence() {
        let e = parse_infix("a+b%3").unwrap();
        assert_eq!(e, Expr::bin(BinOp::Add, v(Var::A), Expr::bin(BinOp::Mod, v(Var::B), Expr::Lit(3))));
        let e = parse_infix("a-b-c").unwrap();
        assert_eq!(e, Expr::bin(BinOp::Sub, Expr::bin(BinOp::Sub, v(Var::A), v(Var::B)), v(Var::C)));
        let e = parse_infix("¬a<b∧c∨d").unwrap();
        let lhs = Expr::bin(BinOp::And, Expr::Not(Box::new(Expr::bin(BinOp::Lt, v(Var::A), v(Var::B)))), v(Var::C));
        assert_eq!(e, Expr::bin(BinOp::Or, lhs, v(Var::D)));
    }

    #[test]
    fn comparison_chains_are_left_associative() {
        let e = parse_infix("a<b<c").unwrap();
        assert_eq!(e, Expr::bin(BinOp::Lt, Expr::bin(BinOp::Lt, v(Var::A), v(Var::B)), v(Var::C)));
    }

    #[test]
    fn long_formulas_parse() {
        parse_infix("(((c>i)%i%23)∧((b>i)∧2∧0%30+10∨12))%3").unwrap();
        parse_infix("((i<c-1)+((b<i)∧(i<c+1)))%3").unwrap();
    }

    #[test]
    fn rpn_matches_infix() {
        assert_eq!(parse_rpn("b i < 2 ∧").unwrap(), parse_infix("(b<i)∧2").unwrap());
        assert_eq!(parse_rpn("a ¬ b +").unwrap(), parse_infix("(¬a)+b").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [("", 0), ("(a+b", 4), ("a+b)", 3), ("a+", 2), ("+a", 0), ("a b", 2), ("a+¬b", 2)];
        for (text, pos) in cases {
            match parse_infix(text) {
                Err(FormulaError::Parse { pos: p, .. }) => assert_eq!(p, pos, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_rpn("a +").is_err());
        assert!(parse_rpn("a b").is_err());
        assert!(parse_rpn("( a )").is_err());
        assert!(parse_rpn("").is_err());
    }
}
