//! Radical expressions: parsing, printing, evaluation.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := rational | '-' factor | '(' expr ')' | 'sqrt' '(' expr ')'
//! rational := digits ('/' digits)?      -- no whitespace inside
//! ```
//!
//! So `1/2` is a single literal while `1 / 2` is a division; both denote the
//! same value.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::tower::{Rat, TowerElem};
use super::AlgebraError;

/// Syntax tree of a radical expression. Literals are nonnegative; negative
/// constants are written with [`AlgExpr::Neg`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgExpr {
    Rational(Rat),
    Neg(Box<AlgExpr>),
    Add(Box<AlgExpr>, Box<AlgExpr>),
    Sub(Box<AlgExpr>, Box<AlgExpr>),
    Mul(Box<AlgExpr>, Box<AlgExpr>),
    Div(Box<AlgExpr>, Box<AlgExpr>),
    Sqrt(Box<AlgExpr>),
}

impl AlgExpr {
    pub fn rational(q: Rat) -> AlgExpr {
        if q.is_negative() {
            AlgExpr::Neg(Box::new(AlgExpr::Rational(-q)))
        } else {
            AlgExpr::Rational(q)
        }
    }

    pub fn int(n: i64) -> AlgExpr {
        AlgExpr::rational(Rat::from_integer(BigInt::from(n)))
    }

    pub fn parse(text: &str) -> Result<AlgExpr, AlgebraError> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, pos: 0, end: text.len() };
        let e = p.expr()?;
        if let Some(tok) = p.peek() {
            return Err(syntax(tok.pos, format!("unexpected {}", tok.kind)));
        }
        Ok(e)
    }

    pub fn eval(&self) -> Result<TowerElem, AlgebraError> {
        Ok(match self {
            AlgExpr::Rational(q) => TowerElem::from_rat(q.clone()),
            AlgExpr::Neg(x) => -x.eval()?,
            AlgExpr::Add(x, y) => x.eval()? + y.eval()?,
            AlgExpr::Sub(x, y) => x.eval()? - y.eval()?,
            AlgExpr::Mul(x, y) => x.eval()? * y.eval()?,
            AlgExpr::Div(x, y) => x.eval()?.checked_div(&y.eval()?)?,
            AlgExpr::Sqrt(x) => x.eval()?.sqrt()?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            AlgExpr::Add(..) | AlgExpr::Sub(..) => 1,
            AlgExpr::Mul(..) | AlgExpr::Div(..) => 2,
            AlgExpr::Neg(_) => 3,
            AlgExpr::Rational(_) | AlgExpr::Sqrt(_) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            AlgExpr::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())?
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())?
                }
            }
            AlgExpr::Neg(x) => {
                f.write_str("-")?;
                x.write_at(f, 3)?;
            }
            AlgExpr::Add(x, y) => binary(f, x, " + ", y, 1)?,
            AlgExpr::Sub(x, y) => binary(f, x, " - ", y, 1)?,
            AlgExpr::Mul(x, y) => binary(f, x, " * ", y, 2)?,
            AlgExpr::Div(x, y) => binary(f, x, " / ", y, 2)?,
            AlgExpr::Sqrt(x) => {
                f.write_str("sqrt(")?;
                x.write_at(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn binary(f: &mut fmt::Formatter<'_>, x: &AlgExpr, op: &str, y: &AlgExpr, prec: u8) -> fmt::Result {
    x.write_at(f, prec)?;
    f.write_str(op)?;
    // left-associative: an equal-precedence right operand needs parentheses
    y.write_at(f, prec + 1)
}

impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for AlgExpr {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgExpr::parse(s)
    }
}

fn syntax(position: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Syntax { position, message: message.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Lit(Rat),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Sqrt,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Lit(q) => write!(f, "literal {q}"),
            Kind::Plus => f.write_str("'+'"),
            Kind::Minus => f.write_str("'-'"),
            Kind::Star => f.write_str("'*'"),
            Kind::Slash => f.write_str("'/'"),
            Kind::LParen => f.write_str("'('"),
            Kind::RParen => f.write_str("')'"),
            Kind::Sqrt => f.write_str("'sqrt'"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, AlgebraError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Kind::Plus,
            b'-' => Kind::Minus,
            b'*' => Kind::Star,
            b'/' => Kind::Slash,
            b'(' => Kind::LParen,
            b')' => Kind::RParen,
            b'0'..=b'9' => {
                let end = digits(i);
                let num: BigInt = text[i..end].parse().expect("ascii digits");
                i = end;
                let mut den = BigInt::from(1);
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    let dend = digits(i + 1);
                    den = text[i + 1..dend].parse().expect("ascii digits");
                    if den.is_zero() {
                        return Err(syntax(i + 1, "zero denominator in literal"));
                    }
                    i = dend;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(syntax(i, "decimal literals are not allowed; write a fraction"));
                }
                out.push(Token { kind: Kind::Lit(Rat::new(num, den)), pos: start });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                let word = &text[i..end];
                if word != "sqrt" {
                    return Err(syntax(i, format!("unknown identifier '{word}'")));
                }
                i = end;
                out.push(Token { kind: Kind::Sqrt, pos: start });
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, format!("unexpected character '{ch}'")));
            }
        };
        i += 1;
        out.push(Token { kind, pos: start });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, kind: Kind) -> Result<(), AlgebraError> {
        match self.next() {
            Some(t) if t.kind == kind => Ok(()),
            Some(t) => Err(syntax(t.pos, format!("expected {kind}, found {}", t.kind))),
            None => Err(syntax(self.end, format!("expected {kind}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<AlgExpr, AlgebraError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().map(|t| &t.kind) {
                Some(Kind::Plus) => {
                    self.pos += 1;
                    lhs = AlgExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Kind::Minus) => {
                    self.pos += 1;
                    lhs = AlgExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<AlgExpr, AlgebraError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().map(|t| &t.kind) {
                Some(Kind::Star) => {
                    self.pos += 1;
                    lhs = AlgExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Kind::Slash) => {
                    self.pos += 1;
                    lhs = AlgExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<AlgExpr, AlgebraError> {
        let Some(tok) = self.next() else {
            return Err(syntax(self.end, "unexpected end of input"));
        };
        match tok.kind {
            Kind::Lit(q) => Ok(AlgExpr::Rational(q)),
            Kind::Minus => Ok(AlgExpr::Neg(Box::new(self.factor()?))),
            Kind::LParen => {
                let e = self.expr()?;
                self.expect(Kind::RParen)?;
                Ok(e)
            }
            Kind::Sqrt => {
                self.expect(Kind::LParen)?;
                let e = self.expr()?;
                self.expect(Kind::RParen)?;
                Ok(AlgExpr::Sqrt(Box::new(e)))
            }
            other => Err(syntax(tok.pos, format!("unexpected {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_versus_division() {
        assert_eq!(AlgExpr::parse("1/2").unwrap(), AlgExpr::Rational(Rat::new(1.into(), 2.into())));
        assert!(matches!(AlgExpr::parse("1 / 2").unwrap(), AlgExpr::Div(..)));
        assert_eq!(AlgExpr::parse("1 / 2").unwrap().eval().unwrap(), TowerElem::from_ratio(1, 2));
    }

    #[test]
    fn decimal_is_a_syntax_error() {
        let err = AlgExpr::parse("0.75").unwrap_err();
        assert!(matches!(err, AlgebraError::Syntax { position: 1, .. }), "{err}");
    }

    #[test]
    fn unbalanced_reports_position() {
        let err = AlgExpr::parse("sqrt(3").unwrap_err();
        assert!(matches!(err, AlgebraError::Syntax { position: 6, .. }), "{err}");
        assert!(AlgExpr::parse("").is_err());
        assert!(AlgExpr::parse("2 3").is_err());
        assert!(AlgExpr::parse("pi").is_err());
    }

    #[test]
    fn printer_keeps_structure() {
        for s in [
            "sqrt(3)/2",
            "-3/4",
            "1 - (2 - 3)",
            "1 - 2 - 3",
            "2 * -3",
            "-(1 + sqrt(2))",
            "5 * sqrt(3) / (2 * sqrt(7))",
            "sqrt(6 + 3 * sqrt(3)) - 1",
            "--2",
            "1 / (2 / 3)",
        ] {
            let e = AlgExpr::parse(s).unwrap();
            let printed = e.to_string();
            assert_eq!(AlgExpr::parse(&printed).unwrap(), e, "{s} printed as {printed}");
        }
        assert_eq!(AlgExpr::parse("(1+2)*3").unwrap().to_string(), "(1 + 2) * 3");
        assert_eq!(AlgExpr::parse("1-(2-3)").unwrap().to_string(), "1 - (2 - 3)");
    }

    #[test]
    fn sqrt_of_negative_fails_at_eval() {
        assert_eq!(AlgExpr::parse("sqrt(2 - 3)").unwrap().eval().unwrap_err(), AlgebraError::NegativeSqrt);
    }
}
