//! Text syntax for free-Leibniz and dialgebra expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-' term | dterm
//! dterm  := factor (('-|' | '|-') factor)*
//! factor := number ['/' number] '*' factor | '0' | atom
//! atom   := 'x' digits | '[' expr ',' expr ']' | '(' expr ')' | '(' x.. x.. ')'
//! ```
//!
//! `(x1 x2 x3)` is a left-normed word literal, as printed by the library.

use crate::dialgebra::{dialg_bracket, dprod_left, dprod_right, word_to_dialgebra, DialgElement};
use crate::error::{Error, Result};
use crate::free::{FreeElement, Monomial};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Zero,
    Gen(usize),
    Word(Vec<usize>),
    Bracket(Box<Expr>, Box<Expr>),
    DLeft(Box<Expr>, Box<Expr>),
    DRight(Box<Expr>, Box<Expr>),
    Scale(Scalar, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn uses_dialgebra(&self) -> bool {
        match self {
            Expr::Zero | Expr::Gen(_) | Expr::Word(_) => false,
            Expr::DLeft(..) | Expr::DRight(..) => true,
            Expr::Bracket(a, b) | Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.uses_dialgebra() || b.uses_dialgebra()
            }
            Expr::Scale(_, a) | Expr::Neg(a) => a.uses_dialgebra(),
        }
    }

    /// Evaluates in the free Leibniz algebra; dialgebra products are refused.
    pub fn to_free(&self, field: Field) -> Result<FreeElement> {
        Ok(match self {
            Expr::Zero => FreeElement::zero(field),
            Expr::Gen(g) => FreeElement::generator(field, *g),
            Expr::Word(w) => FreeElement::monomial(field, Monomial::new(w.clone()), field.one()),
            Expr::Bracket(a, b) => a.to_free(field)?.bracket(&b.to_free(field)?),
            Expr::Scale(c, a) => a.to_free(field)?.scale(c),
            Expr::Add(a, b) => a.to_free(field)?.add(&b.to_free(field)?),
            Expr::Sub(a, b) => a.to_free(field)?.sub(&b.to_free(field)?),
            Expr::Neg(a) => a.to_free(field)?.scale(&field.from_i64(-1)),
            Expr::DLeft(..) | Expr::DRight(..) => {
                return Err(Error::Parse(
                    "dialgebra products are not available in the free Leibniz algebra".into(),
                ))
            }
        })
    }

    /// Evaluates in the free dialgebra; brackets become `x⊣y - y⊢x`.
    pub fn to_dialgebra(&self, field: Field) -> DialgElement {
        match self {
            Expr::Zero => DialgElement::zero(field),
            Expr::Gen(g) => DialgElement::generator(field, *g),
            Expr::Word(w) => word_to_dialgebra(field, w),
            Expr::Bracket(a, b) => dialg_bracket(&a.to_dialgebra(field), &b.to_dialgebra(field)),
            Expr::DLeft(a, b) => dprod_left(&a.to_dialgebra(field), &b.to_dialgebra(field)),
            Expr::DRight(a, b) => dprod_right(&a.to_dialgebra(field), &b.to_dialgebra(field)),
            Expr::Scale(c, a) => a.to_dialgebra(field).scale(c),
            Expr::Add(a, b) => a.to_dialgebra(field).add(&b.to_dialgebra(field)),
            Expr::Sub(a, b) => a.to_dialgebra(field).sub(&b.to_dialgebra(field)),
            Expr::Neg(a) => a.to_dialgebra(field).scale(&field.from_i64(-1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Gen(usize),
    Num(String),
    Plus,
    Minus,
    Star,
    Slash,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    DashBar,
    BarDash,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '-' if bytes.get(i + 1) == Some(&b'|') => {
                i += 2;
                Tok::DashBar
            }
            '|' if bytes.get(i + 1) == Some(&b'-') => {
                i += 2;
                Tok::BarDash
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '[' => {
                i += 1;
                Tok::LBrack
            }
            ']' => {
                i += 1;
                Tok::RBrack
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            'x' => {
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: usize = src[digits_start..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("expected generator index at column {start}")))?;
                if n == 0 {
                    return Err(Error::Parse(format!("generators start at x1 (column {start})")));
                }
                Tok::Gen(n - 1)
            }
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(src[start..i].to_string())
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` at column {start}"
                )))
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: Field,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(c, _)| *c)
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {want:?} at column {}",
                self.column()
            )))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.term()?)));
        }
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::DashBar) => {
                    self.pos += 1;
                    lhs = Expr::DLeft(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::BarDash) => {
                    self.pos += 1;
                    lhs = Expr::DRight(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if let Some(Tok::Num(n)) = self.peek().cloned() {
            self.pos += 1;
            let mut text = n;
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Num(d)) => {
                        self.pos += 1;
                        text = format!("{text}/{d}");
                    }
                    _ => {
                        return Err(Error::Parse(format!(
                            "expected denominator at column {}",
                            self.column()
                        )))
                    }
                }
            }
            let c = self.field.parse(&text)?;
            if c.is_zero() && self.peek() != Some(&Tok::Star) {
                return Ok(Expr::Zero);
            }
            self.expect(Tok::Star)?;
            return Ok(Expr::Scale(c, Box::new(self.factor()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Gen(g)) => {
                self.pos += 1;
                Ok(Expr::Gen(g))
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBrack)?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if let Some(word) = self.word_literal() {
                    return Ok(word);
                }
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(Error::Parse(format!(
                "expected a generator, bracket or parenthesis at column {}",
                self.column()
            ))),
        }
    }

    /// `x.. x.. )` after an opening parenthesis, with at least two letters.
    fn word_literal(&mut self) -> Option<Expr> {
        let mut word = Vec::new();
        let mut p = self.pos;
        while let Some((_, Tok::Gen(g))) = self.toks.get(p) {
            word.push(*g);
            p += 1;
        }
        if word.len() >= 2 && matches!(self.toks.get(p), Some((_, Tok::RParen))) {
            self.pos = p + 1;
            Some(Expr::Word(word))
        } else {
            None
        }
    }
}

pub fn parse_expr(src: &str, field: Field) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        src,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "unexpected trailing input at column {}",
            p.column()
        )));
    }
    Ok(e)
}

pub fn parse_free(src: &str, field: Field) -> Result<FreeElement> {
    parse_expr(src, field)?.to_free(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn nested_brackets() {
        let e = parse_free("[x1,[x2,x3]]", q()).unwrap();
        assert_eq!(e.to_string(), "(x1 x2 x3) - (x1 x3 x2)");
    }

    #[test]
    fn scalars_sums_and_words() {
        let e = parse_free("2*[x1,x2] - 1/2*x3 + (x1 x2)", q()).unwrap();
        assert_eq!(e.to_string(), "-1/2*(x3) + 3*(x1 x2)");
        let back = parse_free(&e.to_string(), q()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn dialgebra_syntax() {
        let e = parse_expr("x1 -| x2 |- x3", q()).unwrap();
        assert!(e.uses_dialgebra());
        assert_eq!(e.to_dialgebra(q()).to_string(), "(x1 x2 x3, c=2)");
        assert!(e.to_free(q()).is_err());
        let b = parse_expr("[x1,x1]", q()).unwrap().to_dialgebra(q());
        assert_eq!(b.to_string(), "(x1 x1, c=0) - (x1 x1, c=1)");
    }

    #[test]
    fn errors_carry_location() {
        let err = parse_free("[x1, x2", q()).unwrap_err().to_string();
        assert!(err.contains("column"), "{err}");
        assert!(parse_free("x0", q()).is_err());
        assert!(parse_free("x1 ?", q()).is_err());
        assert!(parse_free("", q()).is_err());
        assert!(parse_free("2 x1", q()).is_err());
    }

    #[test]
    fn prime_field_coefficients() {
        let f = Field::Prime(5);
        let e = parse_free("1/2*x1 - x1", f).unwrap();
        assert_eq!(e.to_string(), "2*(x1)");
    }
}
