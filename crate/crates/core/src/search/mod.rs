//! Automatic synthesis of interpretations, stratum by stratum.

mod shapes;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::check::{check, interpret_rule, rule_goals, Global};
use crate::interp::{InterpError, SymbolInterp, SymbolicInterpretation};
use crate::maxpoly::{compare_parametric, Atom, MaxPoly};
use crate::solver::{solve_limited, Constraint, Model, SolveResult, DEFAULT_NODE_LIMIT};
use crate::syntax::{SortId, SymId, Term, Trs};

pub use shapes::{
    all_proposals, basis, blind_order, progressive_order, template, ArgAtoms, Proposal, Shape,
};

/// Strongly connected components of the call graph, callees first; each
/// component is sorted by name.
pub fn stratify(trs: &Trs) -> Vec<Vec<SymId>> {
    let mut defined: Vec<SymId> = trs.defined().collect();
    defined.sort_by(|a, b| trs.sig.symbol(*a).name.cmp(&trs.sig.symbol(*b).name));
    let mut g = DiGraph::<SymId, ()>::new();
    let idx: BTreeMap<SymId, _> = defined.iter().map(|f| (*f, g.add_node(*f))).collect();
    for r in &trs.rules {
        let from = idx[&r.head()];
        let mut callees: BTreeSet<SymId> = r.rhs.symbols();
        callees.extend(r.lhs.symbols());
        for c in callees {
            if let Some(to) = idx.get(&c) {
                g.update_edge(from, *to, ());
            }
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|comp| {
            let mut v: Vec<SymId> = comp.into_iter().map(|n| g[n]).collect();
            v.sort_by(|a, b| trs.sig.symbol(*a).name.cmp(&trs.sig.symbol(*b).name));
            v
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Blind,
    Progressive,
    Pattern,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub k_max: usize,
    pub coeff_bound: u64,
    pub strategy: StrategyKind,
    pub seed: u64,
    pub time_budget: Option<Duration>,
    pub node_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            k_max: 2,
            coeff_bound: 3,
            strategy: StrategyKind::Progressive,
            seed: 0,
            time_budget: None,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// Proposal order for one stratum plus the marks already spent.
pub struct Strategy {
    order: Vec<Proposal>,
    marked: HashSet<(Proposal, Vec<usize>)>,
}

fn is_projection(rule: &crate::syntax::Rule) -> bool {
    matches!(rule.rhs, Term::Var(_))
}

fn duplicates_variable(rule: &crate::syntax::Rule) -> bool {
    let l = rule.lhs.var_occurrences();
    rule.rhs
        .var_occurrences()
        .iter()
        .any(|(v, n)| *n > l.get(v).copied().unwrap_or(0))
}

impl Strategy {
    pub fn new(kind: StrategyKind, seed: u64, trs: &Trs, stratum: &[SymId]) -> Self {
        let order = match kind {
            StrategyKind::Progressive => progressive_order(),
            StrategyKind::Blind => blind_order(seed),
            StrategyKind::Pattern => {
                let rules: Vec<_> = trs
                    .rules
                    .iter()
                    .filter(|r| stratum.contains(&r.head()))
                    .collect();
                let mut first = Vec::new();
                if rules.iter().any(|r| is_projection(r)) {
                    first.push(Proposal {
                        cost: Shape::Constant,
                        size: Shape::Additive,
                    });
                }
                if rules.iter().any(|r| duplicates_variable(r)) {
                    first.push(Proposal {
                        cost: Shape::Quadratic,
                        size: Shape::Additive,
                    });
                }
                let mut order = first.clone();
                order.extend(
                    progressive_order()
                        .into_iter()
                        .filter(|p| !first.contains(p)),
                );
                order
            }
        };
        Strategy {
            order,
            marked: HashSet::new(),
        }
    }

    /// First unmarked proposal for the current widths; marks it.
    pub fn propose(&mut self, k_sig: &[usize]) -> Option<Proposal> {
        let p = *self
            .order
            .iter()
            .find(|p| !self.marked.contains(&(**p, k_sig.to_vec())))?;
        self.marked.insert((p, k_sig.to_vec()));
        Some(p)
    }

    pub fn order(&self) -> &[Proposal] {
        &self.order
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("could not simplify `{rule}` into parameter constraints")]
    SimplificationFailed { rule: String },
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Reduce `⟦l⟧ ≻ ⟦r⟧` for every rule of the stratum to a parameter formula.
pub fn generate_constraints(
    trs: &Trs,
    stratum: &[SymId],
    interp: &SymbolicInterpretation,
) -> Result<Constraint, GenError> {
    let mut parts = Vec::new();
    for rule in trs.rules.iter().filter(|r| stratum.contains(&r.head())) {
        let (l, r) = interpret_rule(trs, interp, rule)?;
        for (_, a, b, mode) in rule_goals(&l, &r) {
            let red = compare_parametric(&a, &b, mode);
            let c = red.constraint();
            if red.capped && c == Constraint::False {
                return Err(GenError::SimplificationFailed {
                    rule: trs.show_rule(rule),
                });
            }
            parts.push(c);
        }
    }
    Ok(Constraint::and(parts))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptResult {
    Solved,
    Unsat,
    GaveUp,
    SimplificationFailed,
    VerificationFailed,
}

#[derive(Debug, Clone)]
pub struct Attempt {
    pub proposal: Proposal,
    pub k: BTreeMap<SortId, usize>,
    pub constraint: Option<Constraint>,
    pub result: AttemptResult,
}

#[derive(Debug, Clone)]
pub struct StratumLog {
    pub symbols: Vec<SymId>,
    pub attempts: Vec<Attempt>,
}

impl StratumLog {
    /// The accepted constraint, or the last one generated.
    pub fn final_constraint(&self) -> Option<&Constraint> {
        self.attempts
            .iter()
            .rev()
            .find(|a| a.result == AttemptResult::Solved)
            .or_else(|| self.attempts.iter().rev().find(|a| a.constraint.is_some()))
            .and_then(|a| a.constraint.as_ref())
    }
}

#[derive(Debug, Clone)]
pub enum Answer {
    Yes(SymbolicInterpretation),
    Maybe { timeout: bool },
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub answer: Answer,
    pub strata: Vec<StratumLog>,
    pub model: Model,
}

fn constructor_template(trs: &Trs, c: SymId, k: &BTreeMap<SortId, usize>) -> SymbolInterp {
    let ty = &trs.sig.symbol(c).ty;
    let name = &trs.sig.symbol(c).name;
    let width = |s: SortId| k.get(&s).copied().unwrap_or(1);
    let kr = width(ty.result);
    let arg_names: Vec<String> = (1..=ty.arity()).map(|i| format!("x{i}")).collect();
    let mut size: Vec<MaxPoly> = (1..=kr)
        .map(|l| MaxPoly::param(format!("a_{name}_{l}")))
        .collect();
    for (i, s) in ty.args.iter().enumerate() {
        let w = width(*s);
        for comp in 1..=w {
            let atom = MaxPoly::atom(Atom::new(arg_names[i].clone(), comp, w));
            let target = if *s == ty.result { comp - 1 } else { kr - 1 };
            size[target] = size[target].add(&atom);
        }
    }
    SymbolInterp {
        arg_names,
        cost: vec![MaxPoly::zero(); ty.arity() + 1],
        size,
    }
}

fn defined_template(trs: &Trs, f: SymId, k: &BTreeMap<SortId, usize>, p: Proposal) -> SymbolInterp {
    let ty = &trs.sig.symbol(f).ty;
    let name = &trs.sig.symbol(f).name;
    let width = |s: SortId| k.get(&s).copied().unwrap_or(1);
    let arg_names: Vec<String> = (1..=ty.arity()).map(|i| format!("x{i}")).collect();
    let groups: Vec<(usize, Vec<Atom>)> = ty
        .args
        .iter()
        .zip(&arg_names)
        .map(|(s, n)| {
            let w = width(*s);
            (s.0, (1..=w).map(|c| Atom::new(n.clone(), c, w)).collect())
        })
        .collect();
    let args = ArgAtoms { groups: &groups };
    let mut cost = vec![MaxPoly::zero(); ty.arity()];
    cost.push(template(p.cost, &args, &format!("c_{name}")));
    let size_shape = if p.size == Shape::Constant {
        Shape::Additive
    } else {
        p.size
    };
    let size = (1..=width(ty.result))
        .map(|l| template(size_shape, &args, &format!("d_{name}_{l}")))
        .collect();
    SymbolInterp {
        arg_names,
        cost,
        size,
    }
}

fn sorts_of(trs: &Trs, f: SymId) -> Vec<SortId> {
    let ty = &trs.sig.symbol(f).ty;
    let mut v = ty.args.clone();
    v.push(ty.result);
    v
}

/// The main procedure: fix constructors additively, then solve strata in
/// order, escalating widths and re-selecting shapes on failure.
pub fn search(trs: &Trs, cfg: &SearchConfig) -> SearchOutcome {
    let start = Instant::now();
    let strata = stratify(trs);
    let mut k: BTreeMap<SortId, usize> = trs.sig.sorts().map(|(id, _)| (id, 1)).collect();
    let mut frozen: BTreeMap<SymId, SymbolInterp> = BTreeMap::new();
    let mut frozen_sorts: BTreeSet<SortId> = BTreeSet::new();
    let mut model = Model::new();
    let mut logs = Vec::new();
    let maybe = |timeout, logs, model| SearchOutcome {
        answer: Answer::Maybe { timeout },
        strata: logs,
        model,
    };

    for stratum in &strata {
        let rules: Vec<_> = trs
            .rules
            .iter()
            .filter(|r| stratum.contains(&r.head()))
            .collect();
        let mut mentioned: BTreeSet<SymId> = BTreeSet::new();
        for r in &rules {
            mentioned.extend(r.lhs.symbols());
            mentioned.extend(r.rhs.symbols());
        }
        let new_ctors: Vec<SymId> = mentioned
            .iter()
            .copied()
            .filter(|c| trs.is_constructor(*c) && !frozen.contains_key(c))
            .collect();
        let mut touched: BTreeSet<SortId> = BTreeSet::new();
        for f in stratum.iter().chain(&new_ctors) {
            touched.extend(sorts_of(trs, *f));
        }

        let mut strategy = Strategy::new(cfg.strategy, cfg.seed, trs, stratum);
        let mut log = StratumLog {
            symbols: stratum.clone(),
            attempts: Vec::new(),
        };
        let mut tried: HashSet<String> = HashSet::new();
        let solved = loop {
            if cfg.time_budget.is_some_and(|b| start.elapsed() > b) {
                logs.push(log);
                return maybe(true, logs, model);
            }
            let k_sig: Vec<usize> = touched.iter().map(|s| k[s]).collect();
            let Some(proposal) = strategy.propose(&k_sig) else {
                break None;
            };
            let mut interp = SymbolicInterpretation {
                k: k.clone(),
                syms: frozen.clone(),
            };
            for c in &new_ctors {
                interp.syms.insert(*c, constructor_template(trs, *c, &k));
            }
            for f in stratum {
                interp
                    .syms
                    .insert(*f, defined_template(trs, *f, &k, proposal));
            }
            // identical templates under another name add nothing
            let key = format!(
                "{:?}|{:?}",
                k_sig,
                stratum.iter().map(|f| &interp.syms[f]).collect::<Vec<_>>()
            );
            if !tried.insert(key) {
                continue;
            }
            let mut attempt = Attempt {
                proposal,
                k: k.clone(),
                constraint: None,
                result: AttemptResult::Unsat,
            };
            let constraint = match generate_constraints(trs, stratum, &interp) {
                Ok(c) => c,
                Err(_) => {
                    attempt.result = AttemptResult::SimplificationFailed;
                    log.attempts.push(attempt);
                    continue;
                }
            };
            attempt.constraint = Some(constraint.clone());
            match solve_limited(&constraint, cfg.coeff_bound, cfg.node_limit) {
                SolveResult::Sat(m) => {
                    let inst = interp.instantiate(&m);
                    if verify_stratum(trs, stratum, &inst) {
                        attempt.result = AttemptResult::Solved;
                        log.attempts.push(attempt);
                        break Some((inst, m));
                    }
                    attempt.result = AttemptResult::VerificationFailed;
                    log.attempts.push(attempt);
                }
                r => {
                    attempt.result = if r == SolveResult::GaveUp {
                        AttemptResult::GaveUp
                    } else {
                        AttemptResult::Unsat
                    };
                    log.attempts.push(attempt);
                    for s in &touched {
                        if !frozen_sorts.contains(s) && k[s] < cfg.k_max {
                            *k.get_mut(s).unwrap() += 1;
                        }
                    }
                }
            }
        };
        logs.push(log);
        let Some((inst, m)) = solved else {
            return maybe(false, logs, model);
        };
        for f in stratum.iter().chain(&new_ctors) {
            frozen.insert(*f, inst.syms[f].clone());
            frozen_sorts.extend(sorts_of(trs, *f));
        }
        model.extend(m);
    }

    // constructors outside every rule get their template with zeros
    let mut syms = frozen;
    for c in trs.constructors() {
        syms.entry(c).or_insert_with(|| {
            let t = constructor_template(trs, c, &k);
            let z = SymbolicInterpretation {
                k: k.clone(),
                syms: [(c, t)].into_iter().collect(),
            }
            .instantiate(&Model::new());
            z.syms[&c].clone()
        });
    }
    let result = SymbolicInterpretation { k, syms };
    match check(trs, &result) {
        Ok(v) if v.global == Global::Compatible => SearchOutcome {
            answer: Answer::Yes(result),
            strata: logs,
            model,
        },
        _ => maybe(false, logs, model),
    }
}

fn verify_stratum(trs: &Trs, stratum: &[SymId], interp: &SymbolicInterpretation) -> bool {
    let rules: Vec<_> = trs
        .rules
        .iter()
        .filter(|r| stratum.contains(&r.head()))
        .cloned()
        .collect();
    let Ok(sub) = Trs::new(trs.sig.clone(), rules) else {
        return false;
    };
    matches!(check(&sub, interp), Ok(v) if v.global == Global::Compatible)
}
