//! Symbolic cs-tuple interpretations and their text format.
//!
//! ```text
//! K list = 2
//! J cons x q : cost = 0 ; size = (q.1 + 1, max(x, q.2))
//! J add : cost = y + 1 ; size = x + y
//! ```
//!
//! `cost = e` is shorthand for the summand list `[0, …, 0, e]`; the general
//! form `[e0, e1, …, em]` gives the cost added at each argument.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::maxpoly::{parse_expr, parse_size, Atom, ExprError, MaxPoly, Var};
use crate::syntax::{SimpleType, SortId, SymId, Term, Trs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("no interpretation for symbol `{0}`")]
    MissingSymbol(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// One symbol's tuple: per-argument cost summands and the size function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolInterp {
    pub arg_names: Vec<String>,
    /// `e₀ … e_m`; `e_i` may mention the first `i` arguments.
    pub cost: Vec<MaxPoly>,
    /// One entry per size component of the result sort.
    pub size: Vec<MaxPoly>,
}

impl SymbolInterp {
    /// True when only the last summand can be nonzero.
    pub fn is_shorthand(&self) -> bool {
        self.cost[..self.cost.len() - 1]
            .iter()
            .all(MaxPoly::is_zero)
    }

    pub fn polys(&self) -> impl Iterator<Item = &MaxPoly> {
        self.cost.iter().chain(self.size.iter())
    }
}

/// The interpreted value of a term: numeric cost, later cost summands (one
/// per missing argument, over fresh atoms), and size components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicCs {
    pub cost: MaxPoly,
    pub later: Vec<MaxPoly>,
    pub size: Vec<MaxPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolicInterpretation {
    pub k: BTreeMap<SortId, usize>,
    pub syms: BTreeMap<SymId, SymbolInterp>,
}

/// Atom for component `comp` of the size of the `i`-th missing argument.
pub fn fresh_atom(i: usize, comp: usize, width: usize) -> Atom {
    Atom::new(format!("#z{i}"), comp, width)
}

impl SymbolicInterpretation {
    pub fn width(&self, s: SortId) -> usize {
        self.k.get(&s).copied().unwrap_or(1)
    }

    pub fn arg_atoms(&self, trs: &Trs, f: SymId) -> Vec<Vec<Atom>> {
        let ty = &trs.sig.symbol(f).ty;
        let names = &self.syms[&f].arg_names;
        ty.args
            .iter()
            .zip(names)
            .map(|(s, n)| {
                let w = self.width(*s);
                (1..=w).map(|c| Atom::new(n.clone(), c, w)).collect()
            })
            .collect()
    }

    pub fn var_atoms(&self, trs: &Trs, v: crate::syntax::VarId) -> Vec<Atom> {
        let var = trs.sig.var(v);
        let w = self.width(var.sort);
        (1..=w).map(|c| Atom::new(var.name.clone(), c, w)).collect()
    }

    /// Interpret `t` with variables as zero-cost tuples of symbolic size.
    pub fn interpret(&self, trs: &Trs, t: &Term) -> Result<SymbolicCs, InterpError> {
        match t {
            Term::Var(v) => Ok(SymbolicCs {
                cost: MaxPoly::zero(),
                later: Vec::new(),
                size: self
                    .var_atoms(trs, *v)
                    .into_iter()
                    .map(MaxPoly::atom)
                    .collect(),
            }),
            Term::App(f, args) => {
                let sym = trs.sig.symbol(*f);
                let si = self
                    .syms
                    .get(f)
                    .ok_or_else(|| InterpError::MissingSymbol(sym.name.clone()))?;
                let vals = args
                    .iter()
                    .map(|a| self.interpret(trs, a))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut map: BTreeMap<Atom, MaxPoly> = BTreeMap::new();
                for (i, atoms) in self.arg_atoms(trs, *f).into_iter().enumerate() {
                    for (c, a) in atoms.into_iter().enumerate() {
                        let v = match vals.get(i) {
                            Some(val) => val.size[c].clone(),
                            None => MaxPoly::atom(fresh_atom(i - args.len() + 1, c + 1, a.width)),
                        };
                        map.insert(a, v);
                    }
                }
                let sub = |p: &MaxPoly| {
                    p.subst(&|v| match v {
                        Var::Atom(a) => map.get(a).cloned(),
                        Var::Param(_) => None,
                    })
                };
                let j = args.len();
                let mut cost = MaxPoly::sum(vals.iter().map(|v| &v.cost));
                for e in &si.cost[..=j] {
                    cost = cost.add(&sub(e));
                }
                Ok(SymbolicCs {
                    cost,
                    later: si.cost[j + 1..].iter().map(sub).collect(),
                    size: si.size.iter().map(sub).collect(),
                })
            }
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.syms
            .values()
            .flat_map(|s| s.polys().flat_map(|p| p.params()))
            .collect()
    }

    /// Replace parameters by values; unmentioned parameters become 0.
    pub fn instantiate(&self, model: &BTreeMap<String, u64>) -> SymbolicInterpretation {
        let mut full = model.clone();
        for p in self.params() {
            full.entry(p).or_insert(0);
        }
        let syms = self
            .syms
            .iter()
            .map(|(f, s)| {
                (
                    *f,
                    SymbolInterp {
                        arg_names: s.arg_names.clone(),
                        cost: s.cost.iter().map(|p| p.instantiate(&full)).collect(),
                        size: s.size.iter().map(|p| p.instantiate(&full)).collect(),
                    },
                )
            })
            .collect();
        SymbolicInterpretation {
            k: self.k.clone(),
            syms,
        }
    }

    /// Re-key the table by symbol name for another signature (e.g. a subsystem).
    pub fn transfer(&self, from: &Trs, to: &Trs) -> SymbolicInterpretation {
        let syms = self
            .syms
            .iter()
            .filter_map(|(f, si)| Some((to.sig.symbol_id(&from.sig.symbol(*f).name)?, si.clone())))
            .collect();
        let k = to
            .sig
            .sorts()
            .map(|(id, name)| {
                let w = from.sig.sort_id(name).map_or(1, |s| self.width(s));
                (id, w)
            })
            .collect();
        SymbolicInterpretation { k, syms }
    }

    /// Check that every symbol in the rules is interpreted with the right shape.
    pub fn validate(&self, trs: &Trs) -> Result<(), InterpError> {
        let mut used = BTreeSet::new();
        for r in &trs.rules {
            used.extend(r.lhs.symbols());
            used.extend(r.rhs.symbols());
        }
        for f in used {
            let sym = trs.sig.symbol(f);
            let si = self
                .syms
                .get(&f)
                .ok_or_else(|| InterpError::MissingSymbol(sym.name.clone()))?;
            check_shape(&sym.name, &sym.ty, si, self.width(sym.ty.result))?;
        }
        Ok(())
    }

    /// Serialize with explicit argument names so the file round-trips.
    pub fn emit(&self, trs: &Trs) -> String {
        let mut out = String::new();
        for (id, name) in trs.sig.sorts() {
            writeln!(out, "K {name} = {}", self.width(id)).unwrap();
        }
        for (f, si) in &self.syms {
            let name = &trs.sig.symbol(*f).name;
            let mut head = format!("J {name}");
            for a in &si.arg_names {
                head.push(' ');
                head.push_str(a);
            }
            let cost = if si.is_shorthand() {
                si.cost.last().unwrap().to_string()
            } else {
                let parts: Vec<String> = si.cost.iter().map(|p| p.to_string()).collect();
                format!("[{}]", parts.join(", "))
            };
            let size = if si.size.len() == 1 {
                si.size[0].to_string()
            } else {
                let parts: Vec<String> = si.size.iter().map(|p| p.to_string()).collect();
                format!("({})", parts.join(", "))
            };
            writeln!(out, "{head} : cost = {cost} ; size = {size}").unwrap();
        }
        out
    }
}

fn check_shape(
    name: &str,
    ty: &SimpleType,
    si: &SymbolInterp,
    k: usize,
) -> Result<(), InterpError> {
    if si.arg_names.len() != ty.arity() || si.cost.len() != ty.arity() + 1 {
        return Err(InterpError::Shape(format!(
            "`{name}` takes {} arguments but its interpretation has {} names and {} cost summands",
            ty.arity(),
            si.arg_names.len(),
            si.cost.len()
        )));
    }
    if si.size.len() != k {
        return Err(InterpError::Shape(format!(
            "`{name}` has {} size components, its sort needs {k}",
            si.size.len()
        )));
    }
    Ok(())
}

/// Split on `sep` outside brackets and parentheses.
fn split_top(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Parse an interpretation file against `trs`'s signature.
pub fn parse_interpretation(trs: &Trs, text: &str) -> Result<SymbolicInterpretation, InterpError> {
    let mut interp = SymbolicInterpretation::default();
    for (id, _) in trs.sig.sorts() {
        interp.k.insert(id, 1);
    }
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    // widths first: J lines need them to resolve atoms
    for &(lineno, line) in &lines {
        let t = line.trim_start();
        let col0 = line.len() - t.len() + 1;
        let err = |col: usize, msg: String| InterpError::Parse {
            line: lineno,
            col,
            msg,
        };
        if let Some(rest) = t.strip_prefix("K ") {
            let (sort, n) = rest
                .split_once('=')
                .ok_or_else(|| err(col0, "expected `K sort = n`".into()))?;
            let sort = sort.trim();
            let id = trs
                .sig
                .sort_id(sort)
                .ok_or_else(|| err(col0 + 2, format!("undeclared sort `{sort}`")))?;
            let n: usize = n
                .trim()
                .parse()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| err(col0, format!("`{}` is not a positive width", n.trim())))?;
            interp.k.insert(id, n);
        } else if !t.starts_with("J ") {
            return Err(err(col0, "expected a `K` or `J` line".into()));
        }
    }
    for &(lineno, line) in &lines {
        let t = line.trim_start();
        if let Some(rest) = t.strip_prefix("J ") {
            let offset = line.len() - rest.len();
            parse_j(trs, &mut interp, rest, lineno, offset)?;
        }
    }
    Ok(interp)
}

fn parse_j(
    trs: &Trs,
    interp: &mut SymbolicInterpretation,
    rest: &str,
    lineno: usize,
    offset: usize,
) -> Result<(), InterpError> {
    let err = |col: usize, msg: String| InterpError::Parse {
        line: lineno,
        col: offset + col,
        msg,
    };
    let colon = rest
        .find(':')
        .ok_or_else(|| err(1, "expected `:` after the symbol".into()))?;
    let mut words = rest[..colon].split_whitespace();
    let name = words
        .next()
        .ok_or_else(|| err(1, "missing symbol name".into()))?;
    let f = trs
        .sig
        .symbol_id(name)
        .ok_or_else(|| err(1, format!("undeclared symbol `{name}`")))?;
    let ty = trs.sig.symbol(f).ty.clone();
    let explicit: Vec<String> = words.map(String::from).collect();
    let arg_names = if explicit.is_empty() {
        default_arg_names(trs, &ty).map_err(|m| err(1, m))?
    } else {
        explicit
    };
    if arg_names.len() != ty.arity() {
        return Err(err(
            1,
            format!(
                "`{name}` takes {} arguments, {} names given",
                ty.arity(),
                arg_names.len()
            ),
        ));
    }
    let distinct: BTreeSet<&String> = arg_names.iter().collect();
    if distinct.len() != arg_names.len() {
        return Err(err(1, "argument names must be distinct".into()));
    }
    if interp.syms.contains_key(&f) {
        return Err(err(1, format!("`{name}` is interpreted twice")));
    }

    let body = &rest[colon + 1..];
    let body_col = colon + 2;
    let mut cost = None;
    let mut size = None;
    for (start, field) in split_top(body, ';') {
        let Some((key, value)) = field.split_once('=') else {
            return Err(err(
                body_col + start,
                "expected `cost = …` or `size = …`".into(),
            ));
        };
        let vcol = body_col + start + key.len() + 1;
        match key.trim() {
            "cost" => cost = Some((vcol, value)),
            "size" => size = Some((vcol, value)),
            k => return Err(err(body_col + start, format!("unknown field `{k}`"))),
        }
    }
    let (ccol, ctext) = cost.ok_or_else(|| err(body_col, "missing `cost`".into()))?;
    let (scol, stext) = size.ok_or_else(|| err(body_col, "missing `size`".into()))?;

    let widths: Vec<usize> = ty.args.iter().map(|s| interp.width(*s)).collect();
    let resolver = |upto: usize| {
        let names = arg_names.clone();
        let widths = widths.clone();
        move |n: &str, comp: Option<usize>| -> Result<Atom, String> {
            let i = names[..upto]
                .iter()
                .position(|a| a == n)
                .ok_or_else(|| format!("`{n}` is not an argument in scope"))?;
            let w = widths[i];
            let c = comp.unwrap_or(1);
            if c > w {
                return Err(format!("`{n}` has {w} size components"));
            }
            Ok(Atom::new(n, c, w))
        }
    };
    let expr_err = |col: usize| move |e: ExprError| err(col + e.col - 1, e.msg);

    let m = ty.arity();
    let trimmed = ctext.trim_start();
    let ccol = ccol + ctext.len() - trimmed.len();
    let summands = if let Some(inner) = trimmed.trim_end().strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| err(ccol, "unterminated `[`".into()))?;
        let parts = split_top(inner, ',');
        if parts.len() != m + 1 {
            return Err(err(
                ccol,
                format!("expected {} cost summands, got {}", m + 1, parts.len()),
            ));
        }
        parts
            .iter()
            .enumerate()
            .map(|(i, (start, p))| parse_expr(p, &resolver(i)).map_err(expr_err(ccol + 1 + start)))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let last = parse_expr(trimmed, &resolver(m)).map_err(expr_err(ccol))?;
        let mut v = vec![MaxPoly::zero(); m];
        v.push(last);
        v
    };
    let sizes = parse_size(stext, &resolver(m)).map_err(expr_err(scol))?;
    let si = SymbolInterp {
        arg_names,
        cost: summands,
        size: sizes,
    };
    check_shape(name, &ty, &si, interp.width(ty.result)).map_err(|e| err(1, e.to_string()))?;
    interp.syms.insert(f, si);
    Ok(())
}

/// The i-th argument of sort ι takes the name of the i-th declared variable
/// of sort ι.
fn default_arg_names(trs: &Trs, ty: &SimpleType) -> Result<Vec<String>, String> {
    let mut seen: BTreeMap<SortId, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for s in &ty.args {
        let idx = seen.entry(*s).or_insert(0);
        let vars = trs.sig.vars_of_sort(*s);
        let v = vars.get(*idx).ok_or_else(|| {
            format!(
                "not enough variables of sort `{}` to name the arguments; list them explicitly",
                trs.sig.sort_name(*s)
            )
        })?;
        out.push(trs.sig.var(*v).name.clone());
        *idx += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_trs};

    const TOY: &str = include_str!("../examples/toy.trs");
    const TOY_INT: &str = include_str!("../examples/toy.int");

    fn toy() -> (Trs, SymbolicInterpretation) {
        let trs = parse_trs(TOY).unwrap();
        let i = parse_interpretation(&trs, TOY_INT).unwrap();
        (trs, i)
    }

    #[test]
    fn parses_toy_interpretation() {
        let (trs, i) = toy();
        assert_eq!(i.syms.len(), 10);
        i.validate(&trs).unwrap();
        let cons = &i.syms[&trs.sig.symbol_id("cons").unwrap()];
        assert_eq!(cons.arg_names, ["x", "q"]);
        assert_eq!(cons.size.len(), 2);
        let append = &i.syms[&trs.sig.symbol_id("append").unwrap()];
        assert_eq!(append.arg_names, ["q", "l"]);
    }

    #[test]
    fn emit_round_trips() {
        let (trs, i) = toy();
        let text = i.emit(&trs);
        assert_eq!(parse_interpretation(&trs, &text).unwrap(), i);
    }

    #[test]
    fn symbolic_values() {
        let (trs, i) = toy();
        let p = |s: &str| parse_term(&trs.sig, s).unwrap();
        let v = i.interpret(&trs, &p("cons (s 0) nil")).unwrap();
        assert_eq!(v.cost, MaxPoly::zero());
        assert_eq!(v.size, vec![MaxPoly::int(1), MaxPoly::int(1)]);
        let v = i
            .interpret(&trs, &p("sum (cons (s 0) (cons (s 0) nil))"))
            .unwrap();
        assert_eq!(v.cost, MaxPoly::int(7));
        let v = i.interpret(&trs, &p("x")).unwrap();
        assert_eq!(v.cost, MaxPoly::zero());
        assert_eq!(v.size, vec![MaxPoly::atom(Atom::scalar("x"))]);
        // partial application leaves the last summand pending
        let v = i.interpret(&trs, &p("add x")).unwrap();
        assert_eq!(v.cost, MaxPoly::zero());
        assert_eq!(v.later.len(), 1);
        assert_eq!(v.later[0].to_string(), "#z1 + 1");
    }

    #[test]
    fn general_cost_form() {
        let trs = parse_trs(include_str!("../examples/add.trs")).unwrap();
        let text = "J 0 : cost = 0 ; size = 0\nJ s : cost = 0 ; size = x + 1\nJ add : cost = [1, x, y + 1] ; size = x + y\n";
        let i = parse_interpretation(&trs, text).unwrap();
        let add = &i.syms[&trs.sig.symbol_id("add").unwrap()];
        assert!(!add.is_shorthand());
        let t = parse_term(&trs.sig, "add (s 0) 0").unwrap();
        assert_eq!(i.interpret(&trs, &t).unwrap().cost, MaxPoly::int(3));
        assert_eq!(parse_interpretation(&trs, &i.emit(&trs)).unwrap(), i);
        // e₁ may not look at the second argument
        let bad = "J add : cost = [0, y, 0] ; size = x\n";
        assert!(matches!(
            parse_interpretation(&trs, bad),
            Err(InterpError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn parse_errors() {
        let trs = parse_trs(TOY).unwrap();
        for (text, line) in [
            ("K nat = 0\n", 1),
            ("K tree = 1\n", 1),
            ("J foo : cost = 0 ; size = 0\n", 1),
            ("\nJ s : cost = 0\n", 2),
            ("J s : cost = z ; size = 0\n", 1),
            ("K list = 2\nJ cons : cost = 0 ; size = q.1\n", 2),
            ("J s a b : cost = 0 ; size = 0\n", 1),
        ] {
            match parse_interpretation(&trs, text) {
                Err(InterpError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn missing_symbol_is_reported() {
        let trs = parse_trs(TOY).unwrap();
        let i = parse_interpretation(&trs, "J 0 : cost = 0 ; size = 0\n").unwrap();
        assert!(matches!(
            i.validate(&trs),
            Err(InterpError::MissingSymbol(_))
        ));
    }
}
