use super::{BinOp, FormulaError, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tok {
    LParen,
    RParen,
    Var(Var),
    Lit(u64),
    Op(BinOp),
    Not,
}

/// A token with the character offset where it starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

fn is_digit(c: char) -> bool {
    matches!(c, '0'..='3')
}

/// Splits formula text into tokens. Whitespace separates tokens and is
/// otherwise ignored; a run of adjacent digits is one literal.
pub fn tokenize(text: &str) -> Result<Vec<Token>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        if is_digit(c) {
            let start = pos;
            let mut value: u64 = 0;
            while pos < chars.len() && is_digit(chars[pos]) {
                let d = u64::from(chars[pos] as u8 - b'0');
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d))
                    .ok_or(FormulaError::LiteralTooLarge { pos: start })?;
                pos += 1;
            }
            out.push(Token { tok: Tok::Lit(value), pos: start });
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'a' => Tok::Var(Var::A),
            'b' => Tok::Var(Var::B),
            'c' => Tok::Var(Var::C),
            'd' => Tok::Var(Var::D),
            'i' => Tok::Var(Var::I),
            '+' => Tok::Op(BinOp::Add),
            '-' => Tok::Op(BinOp::Sub),
            '%' => Tok::Op(BinOp::Mod),
            '<' => Tok::Op(BinOp::Lt),
            '>' => Tok::Op(BinOp::Gt),
            '=' => Tok::Op(BinOp::Eq),
            '∧' | '&' => Tok::Op(BinOp::And),
            '∨' | '|' => Tok::Op(BinOp::Or),
            '¬' | '!' => Tok::Not,
            other => return Err(FormulaError::Lex { pos, found: other }),
        };
        out.push(Token { tok, pos });
        pos += 1;
    }
    Ok(out)
}
