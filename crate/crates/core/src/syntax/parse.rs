//! Line-oriented TRS file reader.
//!
//! ```text
//! SORTS nat list
//! SIG 0 : nat
//! SIG add : nat => nat => nat
//! VARS x y : nat
//! RULES
//! add x 0 -> x
//! ```

use super::{Rule, Signature, SimpleType, Term, Trs, TrsError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Arrow,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Identifiers start with a letter; all-digit names (`0`, `1`) are also
/// accepted so numerals can be declared as constructors.
fn valid_ident(s: &str) -> bool {
    let Some(first) = s.chars().next() else {
        return false;
    };
    s.chars().all(is_ident_char)
        && (first.is_ascii_alphabetic() || s.chars().all(|c| c.is_ascii_digit()))
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, TrsError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push((Tok::LParen, col));
            i += 1;
        } else if c == ')' {
            out.push((Tok::RParen, col));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, col));
            i += 2;
        } else if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if !valid_ident(&s) {
                return Err(TrsError::Parse {
                    line: lineno,
                    col,
                    msg: format!("malformed identifier `{s}`"),
                });
            }
            out.push((Tok::Ident(s), col));
        } else {
            return Err(TrsError::Parse {
                line: lineno,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

struct TermParser<'a> {
    sig: &'a Signature,
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl TermParser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn parse_err(&self, msg: impl Into<String>) -> TrsError {
        TrsError::Parse {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    /// seq := atom atom*, folded left-associatively.
    fn seq(&mut self) -> Result<Term, TrsError> {
        let head = self.atom()?;
        let mut args = Vec::new();
        while let Some((tok, _)) = self.toks.get(self.pos) {
            match tok {
                Tok::Ident(_) | Tok::LParen => args.push(self.atom()?),
                _ => break,
            }
        }
        if args.is_empty() {
            return Ok(head);
        }
        match head {
            Term::Var(v) => Err(TrsError::Type {
                line: self.line,
                msg: format!(
                    "variable `{}` is sort-typed and cannot be applied",
                    self.sig.var(v).name
                ),
            }),
            Term::App(f, mut prefix) => {
                prefix.extend(args);
                self.sig.app(f, prefix).map_err(|msg| TrsError::Type {
                    line: self.line,
                    msg,
                })
            }
        }
    }

    fn atom(&mut self) -> Result<Term, TrsError> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Ident(name), col)) => {
                self.pos += 1;
                if let Some(v) = self.sig.var_id(&name) {
                    Ok(Term::Var(v))
                } else if let Some(f) = self.sig.symbol_id(&name) {
                    Ok(Term::constant(f))
                } else {
                    Err(TrsError::Parse {
                        line: self.line,
                        col,
                        msg: format!("undeclared identifier `{name}`"),
                    })
                }
            }
            Some((Tok::LParen, _)) => {
                self.pos += 1;
                let t = self.seq()?;
                match self.toks.get(self.pos) {
                    Some((Tok::RParen, _)) => {
                        self.pos += 1;
                        Ok(t)
                    }
                    _ => Err(self.parse_err("expected `)`")),
                }
            }
            Some(_) => Err(self.parse_err("expected a term")),
            None => Err(self.parse_err("unexpected end of line")),
        }
    }
}

/// Parse a single term against a signature (variables must be declared).
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, TrsError> {
    let toks = tokenize(text, 1)?;
    let mut p = TermParser {
        sig,
        toks: &toks,
        pos: 0,
        line: 1,
        end_col: text.chars().count() + 1,
    };
    let t = p.seq()?;
    if p.pos != toks.len() {
        return Err(p.parse_err("trailing input"));
    }
    Ok(t)
}

fn parse_type(
    sig: &Signature,
    text: &str,
    lineno: usize,
    offset: usize,
) -> Result<SimpleType, TrsError> {
    // The tokenizer does not know `=>`, so types are split on the raw text.
    let mut sorts = Vec::new();
    let mut col = offset;
    for part in text.split("=>") {
        let name = part.trim();
        let lead = part.len() - part.trim_start().len();
        if name.is_empty() || !valid_ident(name) {
            return Err(TrsError::Parse {
                line: lineno,
                col: col + lead,
                msg: format!("malformed type near `{}`", part.trim()),
            });
        }
        let id = sig.sort_id(name).ok_or_else(|| TrsError::Parse {
            line: lineno,
            col: col + lead,
            msg: format!("undeclared sort `{name}`"),
        })?;
        sorts.push(id);
        col += part.len() + 2;
    }
    let result = sorts.pop().expect("split yields at least one part");
    Ok(SimpleType {
        args: sorts,
        result,
    })
}

/// Parse and validate a TRS file.
pub fn parse_trs(text: &str) -> Result<Trs, TrsError> {
    let mut sig = Signature::new();
    let mut rules = Vec::new();
    let mut in_rules = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        let (kw, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let rest_col = indent + kw.len() + 1;
        let decl_err = |msg: String| TrsError::Parse {
            line: lineno,
            col: indent + 1,
            msg,
        };
        match kw {
            "SORTS" if !in_rules => {
                for name in rest.split_whitespace() {
                    if !valid_ident(name) {
                        return Err(decl_err(format!("malformed sort name `{name}`")));
                    }
                    sig.add_sort(name).map_err(decl_err)?;
                }
            }
            "SIG" | "VARS" if !in_rules => {
                let Some(colon) = rest.find(':') else {
                    return Err(decl_err(format!("`{kw}` line needs `:`")));
                };
                let names: Vec<&str> = rest[..colon].split_whitespace().collect();
                if names.is_empty() {
                    return Err(decl_err(format!("`{kw}` line declares no names")));
                }
                for n in &names {
                    if !valid_ident(n) {
                        return Err(decl_err(format!("malformed identifier `{n}`")));
                    }
                }
                let ty_text = &rest[colon + 1..];
                let ty = parse_type(&sig, ty_text, lineno, rest_col + colon)?;
                for n in names {
                    if kw == "SIG" {
                        sig.add_symbol(n, ty.clone()).map_err(decl_err)?;
                    } else {
                        if !ty.is_sort() {
                            return Err(TrsError::Type {
                                line: lineno,
                                msg: format!("variable `{n}` must have a sort type"),
                            });
                        }
                        if n.chars().all(|c| c.is_ascii_digit()) {
                            return Err(decl_err(format!("`{n}` cannot name a variable")));
                        }
                        sig.add_var(n, ty.result).map_err(decl_err)?;
                    }
                }
            }
            "RULES" if !in_rules => {
                if !rest.trim().is_empty() {
                    return Err(decl_err("RULES takes no arguments".into()));
                }
                in_rules = true;
            }
            _ if in_rules => rules.push(parse_rule(&sig, line, lineno)?),
            _ => return Err(decl_err(format!("unknown declaration `{kw}`"))),
        }
    }
    Trs::new(sig, rules)
}

fn parse_rule(sig: &Signature, line: &str, lineno: usize) -> Result<Rule, TrsError> {
    let toks = tokenize(line, lineno)?;
    let end_col = line.chars().count() + 1;
    let Some(arrow) = toks.iter().position(|t| t.0 == Tok::Arrow) else {
        return Err(TrsError::Parse {
            line: lineno,
            col: toks.first().map(|t| t.1).unwrap_or(1),
            msg: "rule needs `->`".into(),
        });
    };
    let side = |slice: &[(Tok, usize)], end: usize| -> Result<Term, TrsError> {
        let mut p = TermParser {
            sig,
            toks: slice,
            pos: 0,
            line: lineno,
            end_col: end,
        };
        let t = p.seq()?;
        if p.pos != slice.len() {
            return Err(p.parse_err("unexpected token"));
        }
        Ok(t)
    };
    let lhs = side(&toks[..arrow], toks[arrow].1)?;
    let rhs = side(&toks[arrow + 1..], end_col)?;
    if let Term::Var(v) = lhs {
        return Err(TrsError::Rule {
            line: lineno,
            msg: format!("left-hand side is the variable `{}`", sig.var(v).name),
        });
    }
    Ok(Rule {
        lhs,
        rhs,
        line: lineno,
    })
}
