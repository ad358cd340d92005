use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Atom, MaxPoly, Monomial, Poly, Q};
use crate::solver::Constraint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `p ≥ q + 1`
    StrictCost,
    /// `p ≥ q`
    WeakSize,
}

impl Mode {
    fn delta(self) -> Q {
        match self {
            Mode::StrictCost => Q::one(),
            Mode::WeakSize => Q::from_integer(0),
        }
    }
}

pub const MAX_SPLIT_ATOMS: usize = 4;

/// The parameter formula that makes `p ≥ q (+1)` hold, by the sufficient
/// coefficient criterion with optional atom-ordering case split.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub direct: Constraint,
    /// Atoms split on and the conjunction over all their orderings.
    pub cases: Option<(Vec<Atom>, Constraint)>,
    /// More atoms needed splitting than the cap allows.
    pub capped: bool,
}

impl Reduction {
    pub fn constraint(&self) -> Constraint {
        match &self.cases {
            Some((_, c)) => Constraint::or([self.direct.clone(), c.clone()]),
            None => self.direct.clone(),
        }
    }
}

/// Coefficientwise nonnegativity of `d` (strict on the constant term).
fn coefficientwise(d: &Poly, mode: Mode) -> Constraint {
    let mut groups = d.by_atom_monomial();
    groups.entry(Monomial::one()).or_default();
    Constraint::and(groups.into_iter().map(|(m, c)| {
        let strict = m.is_one() && mode == Mode::StrictCost;
        let (pos, neg) = c.split_signs();
        Constraint::cmp(&pos, &neg, strict)
    }))
}

/// `∀j ∃i : Pᵢ − Q_j ⪰ δ` coefficientwise.
fn direct(p: &MaxPoly, q: &MaxPoly, mode: Mode) -> Constraint {
    Constraint::and(q.branches().iter().map(|qj| {
        Constraint::or(
            p.branches()
                .iter()
                .map(|pi| coefficientwise(&pi.sub(qj), mode)),
        )
    }))
}

/// Atoms present in some but not all branches of either side.
fn max_origin_atoms(p: &MaxPoly, q: &MaxPoly) -> Vec<Atom> {
    let mut out = BTreeSet::new();
    for side in [p, q] {
        if side.is_max_free() {
            continue;
        }
        let per: Vec<BTreeSet<Atom>> = side
            .branches()
            .iter()
            .map(|b| MaxPoly::poly(b.clone()).atoms())
            .collect();
        let all: BTreeSet<Atom> = per.iter().flatten().cloned().collect();
        for a in all {
            if !per.iter().all(|s| s.contains(&a)) {
                out.insert(a);
            }
        }
    }
    out.into_iter().collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Within the case `a₁ ≥ … ≥ a_k`, write `aᵢ = dᵢ + … + d_k` with fresh `d`.
fn shift(order: &[&Atom]) -> BTreeMap<Atom, MaxPoly> {
    let k = order.len();
    let fresh: Vec<MaxPoly> = (0..k)
        .map(|t| MaxPoly::atom(Atom::scalar(format!("#d{}", t + 1))))
        .collect();
    order
        .iter()
        .enumerate()
        .map(|(i, a)| ((*a).clone(), MaxPoly::sum(&fresh[i..])))
        .collect()
}

/// Reduce `p ≥ q (+1)` on ℕ to a formula over the parameters.
pub fn compare_parametric(p: &MaxPoly, q: &MaxPoly, mode: Mode) -> Reduction {
    let direct_c = direct(p, q, mode);
    if direct_c == Constraint::True {
        return Reduction {
            direct: direct_c,
            cases: None,
            capped: false,
        };
    }
    let split = max_origin_atoms(p, q);
    if split.is_empty() {
        return Reduction {
            direct: direct_c,
            cases: None,
            capped: false,
        };
    }
    if split.len() > MAX_SPLIT_ATOMS {
        return Reduction {
            direct: direct_c,
            cases: None,
            capped: true,
        };
    }
    let mut cases = Vec::new();
    for perm in permutations(split.len()) {
        let order: Vec<&Atom> = perm.iter().map(|&i| &split[i]).collect();
        let sub = shift(&order);
        let f = |v: &super::Var| match v {
            super::Var::Atom(a) => sub.get(a).cloned(),
            _ => None,
        };
        let c = direct(&p.subst(&f), &q.subst(&f), mode);
        if c == Constraint::False {
            cases = vec![Constraint::False];
            break;
        }
        cases.push(c);
    }
    Reduction {
        direct: direct_c,
        cases: Some((split, Constraint::and(cases))),
        capped: false,
    }
}

pub type Env = BTreeMap<Atom, u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompareResult {
    /// Holds everywhere; carries the atoms case-split on (empty if none).
    Proved {
        split: Vec<Atom>,
    },
    Disproved(Env),
    Unknown,
}

fn violates(p: &MaxPoly, q: &MaxPoly, mode: Mode, env: &Env) -> bool {
    match (p.eval_atoms(env), q.eval_atoms(env)) {
        (Ok(a), Ok(b)) => a < b + mode.delta(),
        _ => false,
    }
}

/// A point of `{0..4}^atoms` where `p ≥ q (+1)` fails. The full grid is
/// scanned for up to six atoms; otherwise a fixed pseudo-random sample.
pub fn grid_counterexample(p: &MaxPoly, q: &MaxPoly, mode: Mode) -> Option<Env> {
    let atoms: Vec<Atom> = p.atoms().union(&q.atoms()).cloned().collect();
    const HI: u64 = 4;
    if atoms.len() <= 6 {
        let mut point = vec![0u64; atoms.len()];
        loop {
            let env: Env = atoms.iter().cloned().zip(point.iter().cloned()).collect();
            if violates(p, q, mode, &env) {
                return Some(env);
            }
            let mut i = 0;
            loop {
                if i == point.len() {
                    return None;
                }
                if point[i] < HI {
                    point[i] += 1;
                    break;
                }
                point[i] = 0;
                i += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..4000 {
        let env: Env = atoms
            .iter()
            .map(|a| (a.clone(), rng.gen_range(0..=HI)))
            .collect();
        if violates(p, q, mode, &env) {
            return Some(env);
        }
    }
    None
}

/// Sound comparison of parameter-free max-polynomials.
pub fn compare(p: &MaxPoly, q: &MaxPoly, mode: Mode) -> CompareResult {
    if !p.params().is_empty() || !q.params().is_empty() {
        return CompareResult::Unknown;
    }
    let r = compare_parametric(p, q, mode);
    if r.direct == Constraint::True {
        return CompareResult::Proved { split: Vec::new() };
    }
    if let Some((atoms, c)) = &r.cases {
        if *c == Constraint::True {
            return CompareResult::Proved {
                split: atoms.clone(),
            };
        }
    }
    match grid_counterexample(p, q, mode) {
        Some(env) => CompareResult::Disproved(env),
        None => CompareResult::Unknown,
    }
}
