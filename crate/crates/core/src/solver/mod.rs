//! Parameter constraints over ℕ: bounded enumeration and SMT-LIB2 export.

mod smt;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::maxpoly::{Poly, Var, Q};

pub use smt::{export_smtlib, parse_model, SmtError};

/// `lhs ≥ rhs` or, when strict, `lhs ≥ rhs + 1`; both sides over parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cmp {
    pub lhs: Poly,
    pub rhs: Poly,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    True,
    False,
    Cmp(Cmp),
    And(Vec<Constraint>),
    Or(Vec<Constraint>),
}

pub type Model = BTreeMap<String, u64>;

impl Constraint {
    /// Build `lhs ≥ rhs (+1)`, cancelling common terms and folding constants.
    pub fn cmp(lhs: &Poly, rhs: &Poly, strict: bool) -> Constraint {
        let (pos, neg) = lhs.sub(rhs).split_signs();
        if let (Some(a), Some(b)) = (pos.as_constant(), neg.as_constant()) {
            let holds = if strict { a >= b + Q::one() } else { a >= b };
            return if holds {
                Constraint::True
            } else {
                Constraint::False
            };
        }
        if neg.is_zero() && (!strict || pos.constant_term() >= Q::one()) {
            return Constraint::True;
        }
        if pos.is_zero() && (strict || neg.constant_term() > Q::zero()) {
            return Constraint::False;
        }
        Constraint::Cmp(Cmp {
            lhs: pos,
            rhs: neg,
            strict,
        })
    }

    pub fn and(items: impl IntoIterator<Item = Constraint>) -> Constraint {
        let mut out = Vec::new();
        for c in items {
            match c {
                Constraint::True => {}
                Constraint::False => return Constraint::False,
                Constraint::And(cs) => out.extend(cs),
                c => {
                    if !out.contains(&c) {
                        out.push(c)
                    }
                }
            }
        }
        match out.len() {
            0 => Constraint::True,
            1 => out.pop().unwrap(),
            _ => Constraint::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Constraint>) -> Constraint {
        let mut out = Vec::new();
        for c in items {
            match c {
                Constraint::False => {}
                Constraint::True => return Constraint::True,
                Constraint::Or(cs) => out.extend(cs),
                c => {
                    if !out.contains(&c) {
                        out.push(c)
                    }
                }
            }
        }
        match out.len() {
            0 => Constraint::False,
            1 => out.pop().unwrap(),
            _ => Constraint::Or(out),
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Constraint::Cmp(c) => {
                for v in c.lhs.vars().into_iter().chain(c.rhs.vars()) {
                    if let Var::Param(p) = v {
                        out.insert(p);
                    }
                }
            }
            Constraint::And(cs) | Constraint::Or(cs) => {
                cs.iter().for_each(|c| c.collect_params(out))
            }
            _ => {}
        }
    }

    /// Top-level conjuncts (a lone formula is its own single conjunct).
    pub fn conjuncts(&self) -> Vec<&Constraint> {
        match self {
            Constraint::True => Vec::new(),
            Constraint::And(cs) => cs.iter().collect(),
            c => vec![c],
        }
    }

    /// Exact evaluation; parameters missing from `model` read as 0.
    pub fn holds(&self, model: &Model) -> bool {
        match self {
            Constraint::True => true,
            Constraint::False => false,
            Constraint::Cmp(c) => {
                let l = eval_params(&c.lhs, model);
                let r = eval_params(&c.rhs, model);
                if c.strict {
                    l >= r + Q::one()
                } else {
                    l >= r
                }
            }
            Constraint::And(cs) => cs.iter().all(|c| c.holds(model)),
            Constraint::Or(cs) => cs.iter().any(|c| c.holds(model)),
        }
    }

    /// Reduce under a partial assignment.
    pub fn assign(&self, model: &Model) -> Constraint {
        match self {
            Constraint::Cmp(c) => {
                let l = c.lhs.subst(&|v| lookup(v, model)).branches()[0].clone();
                let r = c.rhs.subst(&|v| lookup(v, model)).branches()[0].clone();
                Constraint::cmp(&l, &r, c.strict)
            }
            Constraint::And(cs) => Constraint::and(cs.iter().map(|c| c.assign(model))),
            Constraint::Or(cs) => Constraint::or(cs.iter().map(|c| c.assign(model))),
            c => c.clone(),
        }
    }

    /// Three-valued check over a box: `Some(b)` when every completion of
    /// the fixed parameters within `[0, bound]` agrees.
    fn decided(&self, model: &Model, bound: u64) -> Option<bool> {
        match self {
            Constraint::True => Some(true),
            Constraint::False => Some(false),
            Constraint::Cmp(c) => {
                // every coefficient is nonnegative, so each side is monotone
                let (llo, lhi) = (eval_box(&c.lhs, model, 0), eval_box(&c.lhs, model, bound));
                let (rlo, rhi) = (eval_box(&c.rhs, model, 0), eval_box(&c.rhs, model, bound));
                let d = if c.strict { Q::one() } else { Q::zero() };
                if llo >= rhi + d {
                    Some(true)
                } else if lhi < rlo + d {
                    Some(false)
                } else {
                    None
                }
            }
            Constraint::And(cs) => {
                let mut all = true;
                for c in cs {
                    match c.decided(model, bound) {
                        Some(false) => return Some(false),
                        None => all = false,
                        Some(true) => {}
                    }
                }
                all.then_some(true)
            }
            Constraint::Or(cs) => {
                let mut none = true;
                for c in cs {
                    match c.decided(model, bound) {
                        Some(true) => return Some(true),
                        None => none = false,
                        Some(false) => {}
                    }
                }
                none.then_some(false)
            }
        }
    }
}

fn lookup(v: &Var, model: &Model) -> Option<crate::maxpoly::MaxPoly> {
    match v {
        Var::Param(p) => model
            .get(p)
            .map(|n| crate::maxpoly::MaxPoly::int(*n as i128)),
        Var::Atom(_) => None,
    }
}

fn eval_params(p: &Poly, model: &Model) -> Q {
    eval_box(p, model, 0)
}

/// Evaluate with unassigned parameters set to `default`.
fn eval_box(p: &Poly, model: &Model, default: u64) -> Q {
    p.eval(&|v| match v {
        Var::Param(name) => Some(Q::from_integer(*model.get(name).unwrap_or(&default) as i128)),
        Var::Atom(_) => None,
    })
    .expect("constraints mention parameters only")
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::True => write!(f, "true"),
            Constraint::False => write!(f, "false"),
            Constraint::Cmp(c) => {
                write!(
                    f,
                    "{} {} {}",
                    c.lhs,
                    if c.strict { ">" } else { ">=" },
                    c.rhs
                )
            }
            Constraint::And(cs) | Constraint::Or(cs) => {
                let sep = if matches!(self, Constraint::And(_)) {
                    " /\\ "
                } else {
                    " \\/ "
                };
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    /// No model inside `[0, bound]^params`.
    Unsat(u64),
    /// The node limit ran out before the box was covered.
    GaveUp,
}

pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;

/// Lexicographically smallest model inside `[0, bound]^params`.
pub fn solve(c: &Constraint, bound: u64) -> SolveResult {
    solve_limited(c, bound, DEFAULT_NODE_LIMIT)
}

pub fn solve_limited(c: &Constraint, bound: u64, node_limit: u64) -> SolveResult {
    let params: Vec<String> = c.params().into_iter().collect();
    let mut model = Model::new();
    let mut nodes = 0u64;
    match dfs(c, &params, 0, bound, &mut model, &mut nodes, node_limit) {
        Some(true) => {
            for p in &params {
                model.entry(p.clone()).or_insert(0);
            }
            debug_assert!(c.holds(&model));
            SolveResult::Sat(model)
        }
        Some(false) => SolveResult::Unsat(bound),
        None => SolveResult::GaveUp,
    }
}

fn dfs(
    c: &Constraint,
    params: &[String],
    i: usize,
    bound: u64,
    model: &mut Model,
    nodes: &mut u64,
    limit: u64,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > limit {
        return None;
    }
    match c.decided(model, bound) {
        Some(false) => return Some(false),
        Some(true) => {
            // the zero completion is the smallest one
            return Some(true);
        }
        None => {}
    }
    if i == params.len() {
        return Some(c.holds(model));
    }
    for v in 0..=bound {
        model.insert(params[i].clone(), v);
        match dfs(c, params, i + 1, bound, model, nodes, limit) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => {
                model.remove(&params[i]);
                return None;
            }
        }
    }
    model.remove(&params[i]);
    Some(false)
}
