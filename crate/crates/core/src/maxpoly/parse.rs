use thiserror::Error;

use super::{Atom, MaxPoly, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {col}: {msg}")]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i128),
    Ident(String),
    Dot,
    Plus,
    Star,
    Slash,
    Comma,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '.' => Some(Tok::Dot),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| ExprError {
                col,
                msg: format!("number `{s}` out of range"),
            })?;
            out.push((Tok::Num(n), col));
        } else if c.is_ascii_alphabetic() || c == '_' || c == '#' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || "_'#".contains(chars[i]))
            {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c == '-' {
            return Err(ExprError {
                col,
                msg: "subtraction is not part of the expression language".into(),
            });
        } else {
            return Err(ExprError {
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Resolves `name` or `name.comp` to an atom.
pub type Resolver<'a> = &'a dyn Fn(&str, Option<usize>) -> Result<Atom, String>;

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    resolve: Resolver<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> ExprError {
        ExprError {
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn sum(&mut self) -> Result<MaxPoly, ExprError> {
        let mut acc = self.product()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            acc = acc.add(&self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MaxPoly, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MaxPoly, ExprError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::Slash) {
                    return Ok(MaxPoly::int(n));
                }
                self.pos += 1;
                let Some(Tok::Num(d)) = self.peek().cloned() else {
                    return Err(self.err("expected a denominator"));
                };
                if d != 1 && d != 2 {
                    return Err(self.err(format!("denominator {d} is not 1 or 2")));
                }
                self.pos += 1;
                Ok(MaxPoly::constant(Q::new(n, d)))
            }
            Some(Tok::Ident(name)) if name == "max" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after max")?;
                let mut acc = self.sum()?;
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    acc = acc.max_with(&self.sum()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(acc)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let mut comp = None;
                if self.peek() == Some(&Tok::Dot) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(c)) if c >= 1 => {
                            self.pos += 1;
                            comp = Some(c as usize);
                        }
                        _ => return Err(self.err("expected a component index")),
                    }
                }
                let atom = (self.resolve)(&name, comp).map_err(|msg| ExprError { col, msg })?;
                Ok(MaxPoly::atom(atom))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.err("expected an expression")),
        }
    }
}

fn parser<'a>(text: &str, resolve: Resolver<'a>) -> Result<Parser<'a>, ExprError> {
    Ok(Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.chars().count() + 1,
        resolve,
    })
}

/// Parse one max-polynomial expression.
pub fn parse_expr(text: &str, resolve: Resolver<'_>) -> Result<MaxPoly, ExprError> {
    let mut p = parser(text, resolve)?;
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parse a size: a single expression or a tuple `(e1, …, ek)`.
pub fn parse_size(text: &str, resolve: Resolver<'_>) -> Result<Vec<MaxPoly>, ExprError> {
    let mut p = parser(text, resolve)?;
    if p.peek() == Some(&Tok::LParen) {
        let save = p.pos;
        p.pos += 1;
        let first = p.sum()?;
        if p.peek() == Some(&Tok::Comma) {
            let mut comps = vec![first];
            while p.peek() == Some(&Tok::Comma) {
                p.pos += 1;
                comps.push(p.sum()?);
            }
            p.expect(Tok::RParen, "`)`")?;
            if p.pos != p.toks.len() {
                return Err(p.err("trailing input after tuple"));
            }
            return Ok(comps);
        }
        p.pos = save;
    }
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(vec![e])
}
