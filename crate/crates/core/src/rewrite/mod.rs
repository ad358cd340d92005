//! One-step rewriting, derivation heights and the brute-force runtime
//! complexity oracle.
//!
//! First-order systems with finitely many rules are finitely branching, so
//! the longest derivation from a term is well defined whenever every branch
//! terminates. Divergence is reported, never raised.

mod enumerate;

use std::collections::{HashMap, HashSet};

use crate::syntax::{Position, Substitution, Term, Trs};

pub use enumerate::TermEnumerator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Innermost,
    Full,
}

/// One rewrite step: the redex position, the rule index and the reduct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub position: Position,
    pub rule: usize,
    pub result: Term,
}

/// Syntactic first-order matching; extends `subst` and reports success.
pub fn match_into(pattern: &Term, t: &Term, subst: &mut Substitution) -> bool {
    match (pattern, t) {
        (Term::Var(v), _) => match subst.get(*v) {
            Some(bound) => bound == t,
            None => {
                subst.bind(*v, t.clone());
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ts)) => {
            f == g
                && ps.len() == ts.len()
                && ps.iter().zip(ts).all(|(p, a)| match_into(p, a, subst))
        }
        _ => false,
    }
}

/// Match the lhs `f l₁ … l_k` against the prefix `f a₁ … a_k` of a node.
fn match_prefix(lhs: &Term, head: crate::syntax::SymId, args: &[Term]) -> Option<Substitution> {
    let Term::App(f, ls) = lhs else { return None };
    if *f != head || ls.len() > args.len() {
        return None;
    }
    let mut subst = Substitution::empty();
    ls.iter()
        .zip(args)
        .all(|(l, a)| match_into(l, a, &mut subst))
        .then_some(subst)
}

fn prefix_is_redex(trs: &Trs, head: crate::syntax::SymId, args: &[Term]) -> bool {
    trs.rules
        .iter()
        .any(|r| r.lhs.args().len() == args.len() && match_prefix(&r.lhs, head, args).is_some())
}

/// True iff no subterm (including argument prefixes) is a redex.
pub fn is_normal_form(t: &Term, trs: &Trs) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, args) => {
            args.iter().all(|a| is_normal_form(a, trs))
                && (0..=args.len()).all(|k| !prefix_is_redex(trs, *f, &args[..k]))
        }
    }
}

/// Plug a reduct `rγ` back in front of the unconsumed arguments.
fn extend(reduct: Term, rest: &[Term]) -> Term {
    if rest.is_empty() {
        return reduct;
    }
    match reduct {
        Term::App(g, mut bs) => {
            bs.extend_from_slice(rest);
            Term::App(g, bs)
        }
        Term::Var(_) => unreachable!("sort-typed variable applied to arguments"),
    }
}

/// All one-step reducts of `t`, one per (position, rule) pair that fires.
pub fn successors(t: &Term, kind: StepKind, trs: &Trs) -> Vec<Step> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    collect_steps(t, t, &mut pos, kind, trs, &mut out);
    out
}

fn collect_steps(
    root: &Term,
    node: &Term,
    pos: &mut Position,
    kind: StepKind,
    trs: &Trs,
    out: &mut Vec<Step>,
) {
    let Term::App(f, args) = node else { return };
    for (i, a) in args.iter().enumerate() {
        pos.push(i);
        collect_steps(root, a, pos, kind, trs, out);
        pos.pop();
    }
    for (ri, rule) in trs.rules.iter().enumerate() {
        let k = rule.lhs.args().len();
        if rule.head() != *f || k > args.len() {
            continue;
        }
        let Some(subst) = match_prefix(&rule.lhs, *f, args) else {
            continue;
        };
        if kind == StepKind::Innermost {
            // proper subterms of the redex `f a₁ … a_k`: its arguments and
            // its shorter prefixes
            let args_nf = args[..k].iter().all(|a| is_normal_form(a, trs));
            if !args_nf || (0..k).any(|j| prefix_is_redex(trs, *f, &args[..j])) {
                continue;
            }
        }
        let local = extend(rule.rhs.apply(&subst), &args[k..]);
        out.push(Step {
            position: pos.clone(),
            rule: ri,
            result: root.replace_at(pos, local),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Height {
    Finite(usize),
    /// Some branch revisits a term on its own path or exceeds the budget.
    Diverged {
        budget: usize,
    },
}

impl Height {
    pub fn finite(self) -> Option<usize> {
        match self {
            Height::Finite(n) => Some(n),
            Height::Diverged { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DhResult {
    pub height: Height,
    /// A longest trace starting at the queried term; for divergence, the
    /// path that closed a cycle or hit the budget.
    pub witness: Vec<Term>,
    /// True when divergence was established by an explicit cycle.
    pub cycle: bool,
}

#[derive(Debug, Clone)]
enum Memo {
    Done { height: usize, next: Option<Term> },
    Cyclic,
}

/// Memoizing derivation-height search shared across start terms.
pub struct HeightExplorer<'a> {
    trs: &'a Trs,
    kind: StepKind,
    budget: usize,
    memo: HashMap<Term, Memo>,
}

struct Frame {
    term: Term,
    succs: Vec<Term>,
    next: usize,
    best: usize,
    best_next: Option<Term>,
}

pub const DEFAULT_BUDGET: usize = 10_000;

impl<'a> HeightExplorer<'a> {
    pub fn new(trs: &'a Trs, kind: StepKind, budget: usize) -> Self {
        assert!(budget > 0, "budget must be positive");
        HeightExplorer {
            trs,
            kind,
            budget,
            memo: HashMap::new(),
        }
    }

    fn frame(&self, term: Term) -> Frame {
        let succs = successors(&term, self.kind, self.trs)
            .into_iter()
            .map(|s| s.result)
            .collect();
        Frame {
            term,
            succs,
            next: 0,
            best: 0,
            best_next: None,
        }
    }

    fn trace_from(&self, t: &Term) -> Vec<Term> {
        let mut out = vec![t.clone()];
        let mut cur = t;
        while let Some(Memo::Done { next: Some(n), .. }) = self.memo.get(cur) {
            out.push(n.clone());
            cur = n;
        }
        out
    }

    pub fn height(&mut self, t: &Term) -> DhResult {
        let diverged = Height::Diverged {
            budget: self.budget,
        };
        match self.memo.get(t) {
            Some(Memo::Done { height, .. }) => {
                return self.finish(t, *height);
            }
            Some(Memo::Cyclic) => {
                return DhResult {
                    height: diverged,
                    witness: vec![t.clone()],
                    cycle: true,
                }
            }
            None => {}
        }
        let mut on_path: HashSet<Term> = HashSet::new();
        on_path.insert(t.clone());
        let mut stack = vec![self.frame(t.clone())];

        while let Some(top) = stack.last_mut() {
            if top.next < top.succs.len() {
                let child = top.succs[top.next].clone();
                top.next += 1;
                match self.memo.get(&child) {
                    Some(Memo::Done { height, .. }) => {
                        if height + 1 > top.best || top.best_next.is_none() {
                            top.best = height + 1;
                            top.best_next = Some(child);
                        }
                        continue;
                    }
                    Some(Memo::Cyclic) => {
                        return self.abort(stack, child, true);
                    }
                    None => {}
                }
                if on_path.contains(&child) {
                    return self.abort(stack, child, true);
                }
                if stack.len() > self.budget {
                    return self.abort(stack, child, false);
                }
                on_path.insert(child.clone());
                let fr = self.frame(child);
                stack.push(fr);
            } else {
                let done = stack.pop().expect("nonempty");
                on_path.remove(&done.term);
                let h = done.best;
                self.memo.insert(
                    done.term.clone(),
                    Memo::Done {
                        height: h,
                        next: done.best_next,
                    },
                );
                if let Some(parent) = stack.last_mut() {
                    if h + 1 > parent.best || parent.best_next.is_none() {
                        parent.best = h + 1;
                        parent.best_next = Some(done.term);
                    }
                }
            }
        }
        let h = match self.memo.get(t) {
            Some(Memo::Done { height, .. }) => *height,
            _ => unreachable!("root is memoized after the search"),
        };
        self.finish(t, h)
    }

    fn finish(&self, t: &Term, h: usize) -> DhResult {
        if h > self.budget {
            return DhResult {
                height: Height::Diverged {
                    budget: self.budget,
                },
                witness: self.trace_from(t),
                cycle: false,
            };
        }
        DhResult {
            height: Height::Finite(h),
            witness: self.trace_from(t),
            cycle: false,
        }
    }

    fn abort(&mut self, stack: Vec<Frame>, last: Term, cycle: bool) -> DhResult {
        let mut witness: Vec<Term> = stack.into_iter().map(|f| f.term).collect();
        if cycle {
            // every term on the path reaches the cycle
            for t in &witness {
                self.memo.insert(t.clone(), Memo::Cyclic);
            }
        }
        witness.push(last);
        DhResult {
            height: Height::Diverged {
                budget: self.budget,
            },
            witness,
            cycle,
        }
    }
}

/// `dh(t, →)` with a fresh memo table.
pub fn derivation_height(t: &Term, kind: StepKind, trs: &Trs, budget: usize) -> DhResult {
    HeightExplorer::new(trs, kind, budget).height(t)
}

#[derive(Debug, Clone)]
pub struct IrcRow {
    pub n: usize,
    pub value: Height,
    /// A start term realizing the value (or the first divergent one).
    pub witness: Option<Term>,
    /// Number of start terms of size exactly `n`.
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct IrcTable {
    pub kind: StepKind,
    pub budget: usize,
    pub rows: Vec<IrcRow>,
}

impl IrcTable {
    pub fn value(&self, n: usize) -> Option<Height> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.value)
    }

    pub fn diverged(&self) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(r.value, Height::Diverged { .. }))
    }

    /// Tab-separated `n<TAB>value` lines.
    pub fn to_tsv(&self, trs: &Trs) -> String {
        let mut s = String::from("n\tirc\n");
        for r in &self.rows {
            match r.value {
                Height::Finite(h) => s.push_str(&format!("{}\t{}\n", r.n, h)),
                Height::Diverged { budget } => {
                    s.push_str(&format!("{}\tdiverged(budget={})\n", r.n, budget))
                }
            }
        }
        if let Some(row) = self
            .rows
            .iter()
            .find(|r| matches!(r.value, Height::Diverged { .. }))
        {
            if let Some(w) = &row.witness {
                s.push_str(&format!(
                    "# divergence from size {}: {}\n",
                    row.n,
                    trs.show(w)
                ));
            }
        }
        s
    }
}

/// Which start terms the oracle ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartTerms {
    /// Basic terms: runtime complexity.
    Basic,
    /// All ground sort-typed terms: derivational complexity.
    Ground,
}

/// `comp(n, →, T)` for `n = 1..=n_max` by exhaustive enumeration.
pub fn complexity_table(
    trs: &Trs,
    start: StartTerms,
    n_max: usize,
    budget: usize,
    kind: StepKind,
) -> IrcTable {
    let mut enumerator = TermEnumerator::new(trs);
    let mut explorer = HeightExplorer::new(trs, kind, budget);
    let mut rows = Vec::new();
    let mut best: Option<(Height, Option<Term>)> = None;
    for n in 1..=n_max {
        let terms = match start {
            StartTerms::Basic => enumerator.basic_terms(n),
            StartTerms::Ground => enumerator.ground_terms(n),
        };
        let count = terms.len();
        for t in terms {
            if matches!(best, Some((Height::Diverged { .. }, _))) {
                break;
            }
            let r = explorer.height(&t);
            let better = match (&best, r.height) {
                (None, _) => true,
                (Some((Height::Finite(a), _)), Height::Finite(b)) => b > *a,
                (_, Height::Diverged { .. }) => true,
                _ => false,
            };
            if better {
                best = Some((r.height, Some(t)));
            }
        }
        let (value, witness) = best.clone().unwrap_or((Height::Finite(0), None));
        rows.push(IrcRow {
            n,
            value,
            witness,
            count,
        });
    }
    IrcTable { kind, budget, rows }
}

/// `irc_R(n)` for `n = 1..=n_max`.
pub fn irc_oracle(trs: &Trs, n_max: usize, budget: usize, kind: StepKind) -> IrcTable {
    complexity_table(trs, StartTerms::Basic, n_max, budget, kind)
}

#[cfg(test)]
mod tests;
