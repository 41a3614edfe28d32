use super::{BinOp, Expr, Notation};

const NOT_LEVEL: u8 = 3;
const ATOM_LEVEL: u8 = 7;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Var(_) | Expr::Lit(_) => ATOM_LEVEL,
        Expr::Not(_) => NOT_LEVEL,
        Expr::Bin(op, ..) => op.level(),
    }
}

fn is_comparison(e: &Expr) -> bool {
    matches!(e, Expr::Bin(op, ..) if op.is_comparison())
}

// Parentheses follow the precedence table, plus one readability rule: a
// comparison used as an operand of ∧, ∨ or ¬ is always wrapped.
fn wrap(child: &Expr, parent_level: u8, strict: bool) -> bool {
    let l = level(child);
    l < parent_level || (strict && l == parent_level) || (parent_level <= NOT_LEVEL && is_comparison(child))
}

fn infix_tokens(e: &Expr, out: &mut Vec<String>) {
    let child = |c: &Expr, paren: bool, out: &mut Vec<String>| {
        if paren {
            out.push("(".into());
            infix_tokens(c, out);
            out.push(")".into());
        } else {
            infix_tokens(c, out);
        }
    };
    match e {
        Expr::Var(v) => out.push(v.symbol().to_string()),
        Expr::Lit(x) => out.push(x.to_string()),
        Expr::Not(x) => {
            out.push("¬".into());
            child(x, wrap(x, NOT_LEVEL, false), out);
        }
        Expr::Bin(op, l, r) => {
            let lv = op.level();
            child(l, wrap(l, lv, false), out);
            out.push(op.symbol().to_string());
            child(r, wrap(r, lv, true), out);
        }
    }
}

fn rpn_tokens(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Var(v) => out.push(v.symbol().to_string()),
        Expr::Lit(x) => out.push(x.to_string()),
        Expr::Not(x) => {
            rpn_tokens(x, out);
            out.push("¬".into());
        }
        Expr::Bin(op, l, r) => {
            rpn_tokens(l, out);
            rpn_tokens(r, out);
            out.push(op.symbol().to_string());
        }
    }
}

pub fn print(e: &Expr, notation: Notation) -> String {
    let mut toks = Vec::new();
    match notation {
        Notation::Infix => {
            infix_tokens(e, &mut toks);
            toks.concat()
        }
        Notation::InfixSpaced => {
            infix_tokens(e, &mut toks);
            toks.join(" ")
        }
        Notation::Rpn => {
            rpn_tokens(e, &mut toks);
            toks.join(" ")
        }
    }
}

impl BinOp {
    pub(super) fn level(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Lt | BinOp::Gt | BinOp::Eq => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mod => 6,
        }
    }
}
