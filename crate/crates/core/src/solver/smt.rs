use std::fmt::Write as _;

use num_integer::Integer;
use regex::Regex;
use thiserror::Error;

use super::{Constraint, Model};
use crate::maxpoly::{Monomial, Poly, Var, Q};

fn symbol(name: &str) -> String {
    let simple = name
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn lcm_denoms<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> i128 {
    polys
        .into_iter()
        .flat_map(|p| p.terms().map(|(_, c)| *c.denom()))
        .fold(1, |acc, d| acc.lcm(&d))
}

fn monomial(m: &Monomial, c: i128) -> String {
    let mut factors: Vec<String> = Vec::new();
    for (v, p) in m.powers().iter().rev() {
        let name = match v {
            Var::Param(n) => symbol(n),
            Var::Atom(a) => symbol(&a.to_string()),
        };
        for _ in 0..*p {
            factors.push(name.clone());
        }
    }
    if c != 1 || factors.is_empty() {
        factors.insert(0, c.to_string());
    }
    if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        format!("(* {})", factors.join(" "))
    }
}

fn poly(p: &Poly, scale: i128) -> String {
    let mut terms: Vec<(&Monomial, &Q)> = p.terms().collect();
    terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(m, c)| monomial(m, (c * Q::from_integer(scale)).to_integer()))
        .collect();
    match parts.len() {
        0 => "0".into(),
        1 => parts[0].clone(),
        _ => format!("(+ {})", parts.join(" ")),
    }
}

fn formula(c: &Constraint) -> String {
    match c {
        Constraint::True => "true".into(),
        Constraint::False => "false".into(),
        Constraint::Cmp(cmp) => {
            let l = lcm_denoms([&cmp.lhs, &cmp.rhs]);
            let lhs = poly(&cmp.lhs, l);
            let rhs = poly(&cmp.rhs, l);
            if !cmp.strict {
                format!("(>= {lhs} {rhs})")
            } else if l == 1 {
                format!("(> {lhs} {rhs})")
            } else {
                format!("(>= {lhs} (+ {rhs} {l}))")
            }
        }
        Constraint::And(cs) => format!(
            "(and {})",
            cs.iter().map(formula).collect::<Vec<_>>().join(" ")
        ),
        Constraint::Or(cs) => format!(
            "(or {})",
            cs.iter().map(formula).collect::<Vec<_>>().join(" ")
        ),
    }
}

/// A QF_NIA script whose models are exactly the solutions of `c` over ℕ.
pub fn export_smtlib(c: &Constraint) -> String {
    let mut out = String::from("(set-logic QF_NIA)\n");
    let params = c.params();
    for p in &params {
        writeln!(out, "(declare-const {} Int)", symbol(p)).unwrap();
    }
    for p in &params {
        writeln!(out, "(assert (>= {} 0))", symbol(p)).unwrap();
    }
    let conjuncts = c.conjuncts();
    if conjuncts.is_empty() {
        out.push_str("(assert true)\n");
    }
    for conj in conjuncts {
        writeln!(out, "(assert {})", formula(conj)).unwrap();
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmtError {
    #[error("no `define-fun` entries found in model")]
    Empty,
    #[error("parameter `{0}` has a negative value")]
    Negative(String),
    #[error("value of `{0}` does not fit")]
    Overflow(String),
}

/// Read `(define-fun NAME () Int V)` entries from solver output.
pub fn parse_model(text: &str) -> Result<Model, SmtError> {
    let re = Regex::new(
        r"\(define-fun\s+(\|[^|]*\||[^\s()|]+)\s*\(\s*\)\s*Int\s+(\(\s*-\s*\d+\s*\)|-?\d+)\s*\)",
    )
    .expect("valid regex");
    let mut model = Model::new();
    for cap in re.captures_iter(text) {
        let name = cap[1].trim_matches('|').to_string();
        let raw: String = cap[2]
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        if raw.starts_with('-') && raw.trim_start_matches('-').chars().any(|c| c != '0') {
            return Err(SmtError::Negative(name));
        }
        let v: u64 = raw
            .trim_start_matches('-')
            .parse()
            .map_err(|_| SmtError::Overflow(name.clone()))?;
        model.insert(name, v);
    }
    if model.is_empty() {
        return Err(SmtError::Empty);
    }
    Ok(model)
}
