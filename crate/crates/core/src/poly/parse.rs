//! Recursive-descent parser for the polynomial grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := int | var | '(' expr ')'
//! var    := [A-Za-z][A-Za-z0-9']*
//! ```
//!
//! The names `i` and `eps` denote the adjoined square root of −1 and the dual unit when
//! the ring has them and the registry does not claim the name.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{MPoly, PolyError, Result, VarRegistry};
use crate::arith::{FieldElem, RingDescriptor};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        let tok = if let Some(t) = single {
            k += 1;
            column += 1;
            t
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            column += k - start;
            let s: String = chars[start..k].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '\'') {
                k += 1;
            }
            column += k - start;
            Tok::Ident(chars[start..k].iter().collect())
        } else {
            return Err(PolyError::Syntax {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    reg: &'a Arc<VarRegistry>,
    ring: RingDescriptor,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, at: &Spanned, message: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        let negate = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly> {
        let b = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(b);
        }
        self.bump();
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| self.syntax(&t, "exponent too large"))?;
                Ok(b.pow(e))
            }
            _ => Err(self.syntax(&t, "expected an unsigned exponent after `^`")),
        }
    }

    fn base(&mut self) -> Result<MPoly> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => Ok(MPoly::constant(self.reg, FieldElem::from_bigint(self.ring, n))),
            Tok::Ident(name) => self.ident(name, &t),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(self.syntax(&close, "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(self.syntax(&t, "unexpected end of input")),
            other => Err(self.syntax(&t, format!("unexpected {}", describe(other)))),
        }
    }

    fn ident(&self, name: &str, at: &Spanned) -> Result<MPoly> {
        if self.reg.index_of(name).is_some() {
            return MPoly::var(self.reg, self.ring, name);
        }
        let special = match name {
            "i" => Some(FieldElem::i(self.ring)),
            "eps" => Some(FieldElem::eps(self.ring)),
            _ => None,
        };
        match special {
            Some(Ok(c)) => Ok(MPoly::constant(self.reg, c)),
            Some(Err(_)) => Err(PolyError::NotRepresentable {
                text: name.to_string(),
                ring: self.ring,
                line: at.line,
                column: at.column,
            }),
            None => Err(PolyError::UnknownVariable {
                name: name.to_string(),
                line: at.line,
                column: at.column,
            }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Ident(s) => format!("name `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

pub fn parse_poly(text: &str, reg: &Arc<VarRegistry>, ring: RingDescriptor) -> Result<MPoly> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        reg,
        ring,
    };
    let e = p.expr()?;
    let t = p.bump();
    if t.tok != Tok::End {
        return Err(p.syntax(&t, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Arc<VarRegistry> {
        VarRegistry::new(&["x", "y", "z", "t"]).unwrap()
    }

    #[test]
    fn f2_roundtrip() {
        let f7 = RingDescriptor::f7();
        let p = parse_poly("x*z+y*t", &reg(), f7).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(parse_poly(&p.print(), &reg(), f7).unwrap(), p);
    }

    #[test]
    fn unary_minus_only_at_head() {
        let f7 = RingDescriptor::f7();
        assert!(parse_poly("-x+y", &reg(), f7).is_ok());
        assert!(parse_poly("(-x)*y", &reg(), f7).is_ok());
        let err = parse_poly("x*-y", &reg(), f7).unwrap_err();
        assert_eq!(
            err,
            PolyError::Syntax {
                line: 1,
                column: 3,
                message: "unexpected `-`".into()
            }
        );
        assert!(parse_poly("x - -y", &reg(), f7).is_err());
    }

    #[test]
    fn error_positions() {
        let f7 = RingDescriptor::f7();
        let err = parse_poly("x+\n  w^2", &reg(), f7).unwrap_err();
        assert_eq!(
            err,
            PolyError::UnknownVariable {
                name: "w".into(),
                line: 2,
                column: 3
            }
        );
        assert!(matches!(
            parse_poly("x+i", &reg(), f7),
            Err(PolyError::NotRepresentable { column: 3, .. })
        ));
        assert!(matches!(parse_poly("(x+y", &reg(), f7), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x y", &reg(), f7), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x^y", &reg(), f7), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x$", &reg(), f7), Err(PolyError::Syntax { column: 2, .. })));
    }

    #[test]
    fn special_constants() {
        let f49 = RingDescriptor::f49();
        let p = parse_poly("(3+2*i)*x^2 - i", &reg(), f49).unwrap();
        assert_eq!(p.print(), "(3+2*i)*x^2+6*i");
        assert_eq!(parse_poly(&p.print(), &reg(), f49).unwrap(), p);
        let d = RingDescriptor::f49_dual();
        let q = parse_poly("x + eps*i*y + 2*eps", &reg(), d).unwrap();
        assert_eq!(parse_poly(&q.print(), &reg(), d).unwrap(), q);
    }

    #[test]
    fn integer_coefficients_over_zz() {
        let zz = RingDescriptor::integers();
        let p = parse_poly("-3*x^2*y^3 + 2*x - 12345678901234567890", &reg(), zz).unwrap();
        assert_eq!(p.print(), "-3*x^2*y^3+2*x-12345678901234567890");
        assert_eq!(parse_poly(&p.print(), &reg(), zz).unwrap(), p);
    }
}
