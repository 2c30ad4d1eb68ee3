//! Canonical text for rationals and polynomial-like sums, and the class parser.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::{GradedClass, ModelSpace, Rational};

/// `p/q` with `q > 0` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Joins `(monomial text, coefficient)` pairs as `c*m + ...`, writing `m`
/// for a unit coefficient and `0` for the empty sum.
pub fn format_terms<'a>(terms: impl IntoIterator<Item = (String, &'a Rational)>) -> String {
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if m == "1" {
            out.push_str(&format_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&m);
        } else {
            out.push_str(&format_rational(&abs));
            out.push('*');
            out.push_str(&m);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Int(s.parse().expect("digits")));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Name(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct ClassParser<'a> {
    space: &'a ModelSpace,
    toks: Vec<Tok>,
    pos: usize,
}

impl ClassParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> std::result::Result<GradedClass, String> {
        let mut acc = GradedClass::zero(self.space);
        let mut negative = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negative = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                None => return Ok(acc),
                Some(other) => return Err(format!("unexpected {other:?}")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> std::result::Result<GradedClass, String> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<GradedClass, String> {
        match self.next() {
            Some(Tok::Int(n)) => {
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Int(d)) if !d.is_zero() => q /= Rational::from_integer(d),
                        _ => return Err("expected a nonzero denominator".into()),
                    }
                }
                Ok(GradedClass::constant(self.space, q))
            }
            Some(Tok::Name(name)) => {
                let g = GradedClass::generator_named(self.space, &name)
                    .map_err(|_| format!("{} has no generator `{name}`", self.space))?;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Int(e)) => {
                            let e: u32 = e.try_into().map_err(|_| "exponent too large")?;
                            return Ok(g.pow(e.min(self.space.dimension() + 1)));
                        }
                        _ => return Err("expected an exponent".into()),
                    }
                }
                Ok(g)
            }
            Some(other) => Err(format!("unexpected {other:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

pub(crate) fn parse_class(space: &ModelSpace, text: &str) -> Result<GradedClass> {
    let fail = |reason: String| Error::ClassParse { text: text.to_string(), reason };
    let toks = tokenize(text).map_err(fail)?;
    if toks.is_empty() {
        return Err(fail("empty input".into()));
    }
    let mut p = ClassParser { space, toks, pos: 0 };
    p.sum().map_err(fail)
}
