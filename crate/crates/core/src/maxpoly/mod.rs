//! Max-polynomials over size atoms, with literal or parameter coefficients.
//!
//! A [`MaxPoly`] always keeps `max` outermost: it is a nonempty list of
//! polynomials standing for their pointwise maximum over ℕ.

mod compare;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use compare::{
    compare, compare_parametric, grid_counterexample, CompareResult, Mode, Reduction,
};
pub use parse::{parse_expr, parse_size, ExprError};

pub type Q = Ratio<i128>;

/// Component `comp` (1-based) of the size of `name`, a sort with `width`
/// components.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub comp: usize,
    pub width: usize,
}

impl Atom {
    pub fn new(name: impl Into<String>, comp: usize, width: usize) -> Self {
        Atom {
            name: name.into(),
            comp,
            width,
        }
    }

    pub fn scalar(name: impl Into<String>) -> Self {
        Atom::new(name, 1, 1)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 1 && self.comp == 1 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}.{}", self.name, self.comp)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Atom(Atom),
    Param(String),
}

/// A power product, sorted by variable, exponents positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m: BTreeMap<Var, u32> = self.0.iter().cloned().collect();
        for (v, p) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += p;
        }
        Monomial(m.into_iter().collect())
    }

    /// Total degree in atoms only; parameters count as coefficients.
    pub fn atom_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| matches!(v, Var::Atom(_)))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    /// Split into (parameter part, atom part).
    pub fn split(&self) -> (Monomial, Monomial) {
        let (ps, atoms): (Vec<_>, Vec<_>) = self
            .0
            .iter()
            .cloned()
            .partition(|(v, _)| matches!(v, Var::Param(_)));
        (Monomial(ps), Monomial(atoms))
    }

    pub fn has_atoms(&self) -> bool {
        self.0.iter().any(|(v, _)| matches!(v, Var::Atom(_)))
    }
}

/// Sum of monomials with nonzero rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i128) -> Self {
        Poly::constant(Q::from_integer(n))
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), Q::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -*c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: Q) -> Poly {
        let mut out = Poly::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Positive and negated-negative parts: `self = pos - neg`.
    pub fn split_signs(&self) -> (Poly, Poly) {
        let mut pos = Poly::zero();
        let mut neg = Poly::zero();
        for (m, c) in &self.terms {
            if c.is_negative() {
                neg.add_term(m.clone(), -*c);
            } else {
                pos.add_term(m.clone(), *c);
            }
        }
        (pos, neg)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn atom_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::atom_degree)
            .max()
            .unwrap_or(0)
    }

    /// Regroup by atom monomial: each coefficient becomes a parameter polynomial.
    pub fn by_atom_monomial(&self) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (ps, atoms) = m.split();
            out.entry(atoms).or_default().add_term(ps, *c);
        }
        out
    }

    pub fn eval(&self, env: &dyn Fn(&Var) -> Option<Q>) -> Result<Q, EvalError> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut v = *c;
            for (x, p) in &m.0 {
                let val = env(x).ok_or_else(|| match x {
                    Var::Atom(a) => EvalError::UnboundAtom(a.to_string()),
                    Var::Param(p) => EvalError::UninstantiatedParameter(p.clone()),
                })?;
                for _ in 0..*p {
                    v *= val;
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Replace variables by max-polynomials.
    pub fn subst(&self, f: &dyn Fn(&Var) -> Option<MaxPoly>) -> MaxPoly {
        let mut total = MaxPoly::zero();
        for (m, c) in &self.terms {
            let mut term = MaxPoly::constant(*c);
            for (x, p) in &m.0 {
                let base = f(x).unwrap_or_else(|| MaxPoly::var(x.clone()));
                for _ in 0..*p {
                    term = term.mul(&base);
                }
            }
            total = total.add(&term);
        }
        total
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ms: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        ms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in ms.into_iter().enumerate() {
            let (c, neg) = if c.is_negative() {
                (-*c, true)
            } else {
                (*c, false)
            };
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let factors = monomial_factors(m);
            if factors.is_empty() {
                write!(f, "{}", show_q(&c))?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{} * ", show_q(&c))?;
            }
            write!(f, "{}", factors.join(" * "))?;
        }
        Ok(())
    }
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut params = Vec::new();
    let mut atoms = Vec::new();
    for (v, p) in &m.0 {
        for _ in 0..*p {
            match v {
                Var::Param(name) => params.push(name.clone()),
                Var::Atom(a) => atoms.push(a.to_string()),
            }
        }
    }
    params.reverse();
    params.extend(atoms);
    params
}

pub(crate) fn show_q(q: &Q) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound atom `{0}`")]
    UnboundAtom(String),
    #[error("uninstantiated parameter `{0}`")]
    UninstantiatedParameter(String),
}

/// `max` over a nonempty set of polynomials, kept normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaxPoly {
    branches: Vec<Poly>,
}

impl MaxPoly {
    pub fn from_branches(branches: Vec<Poly>) -> Self {
        let mut m = MaxPoly { branches };
        if m.branches.is_empty() {
            m.branches.push(Poly::zero());
        }
        m.normalize();
        m
    }

    pub fn zero() -> Self {
        MaxPoly::poly(Poly::zero())
    }

    pub fn poly(p: Poly) -> Self {
        MaxPoly { branches: vec![p] }
    }

    pub fn constant(c: Q) -> Self {
        MaxPoly::poly(Poly::constant(c))
    }

    pub fn int(n: i128) -> Self {
        MaxPoly::poly(Poly::int(n))
    }

    pub fn var(v: Var) -> Self {
        MaxPoly::poly(Poly::var(v))
    }

    pub fn atom(a: Atom) -> Self {
        MaxPoly::var(Var::Atom(a))
    }

    pub fn param(name: impl Into<String>) -> Self {
        MaxPoly::var(Var::Param(name.into()))
    }

    pub fn branches(&self) -> &[Poly] {
        &self.branches
    }

    pub fn is_max_free(&self) -> bool {
        self.branches.len() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.branches.len() == 1 && self.branches[0].is_zero()
    }

    /// Drop duplicate and dominated branches; the order is canonical.
    fn normalize(&mut self) {
        self.branches.sort();
        self.branches.dedup();
        if self.branches.len() < 2 {
            return;
        }
        let n = self.branches.len();
        let mut keep = vec![true; n];
        for j in 0..n {
            for i in 0..n {
                if i != j && keep[i] && self.branches[i].sub(&self.branches[j]).nonnegative_coeffs()
                {
                    keep[j] = false;
                    break;
                }
            }
        }
        let mut it = keep.iter();
        self.branches.retain(|_| *it.next().unwrap());
    }

    pub fn add(&self, other: &MaxPoly) -> MaxPoly {
        let mut out = Vec::with_capacity(self.branches.len() * other.branches.len());
        for p in &self.branches {
            for q in &other.branches {
                out.push(p.add(q));
            }
        }
        MaxPoly::from_branches(out)
    }

    pub fn mul(&self, other: &MaxPoly) -> MaxPoly {
        let mut out = Vec::with_capacity(self.branches.len() * other.branches.len());
        for p in &self.branches {
            for q in &other.branches {
                out.push(p.mul(q));
            }
        }
        MaxPoly::from_branches(out)
    }

    pub fn max_with(&self, other: &MaxPoly) -> MaxPoly {
        let mut out = self.branches.clone();
        out.extend(other.branches.iter().cloned());
        MaxPoly::from_branches(out)
    }

    pub fn scale(&self, c: Q) -> MaxPoly {
        MaxPoly::from_branches(self.branches.iter().map(|p| p.scale(c)).collect())
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a MaxPoly>) -> MaxPoly {
        items.into_iter().fold(MaxPoly::zero(), |acc, p| acc.add(p))
    }

    pub fn subst(&self, f: &dyn Fn(&Var) -> Option<MaxPoly>) -> MaxPoly {
        let mut out: Option<MaxPoly> = None;
        for b in &self.branches {
            let s = b.subst(f);
            out = Some(match out {
                None => s,
                Some(acc) => acc.max_with(&s),
            });
        }
        out.expect("nonempty")
    }

    pub fn rename_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> MaxPoly {
        self.subst(&|v| match v {
            Var::Atom(a) => Some(MaxPoly::atom(f(a))),
            _ => None,
        })
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.branches.iter().flat_map(|b| b.vars()).collect()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Atom(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Param(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    pub fn nonnegative(&self) -> bool {
        self.branches.iter().all(Poly::nonnegative_coeffs)
    }

    /// Highest total atom degree over all branches.
    pub fn degree(&self) -> u32 {
        self.branches
            .iter()
            .map(Poly::atom_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, env: &dyn Fn(&Var) -> Option<Q>) -> Result<Q, EvalError> {
        let mut best: Option<Q> = None;
        for b in &self.branches {
            let v = b.eval(env)?;
            best = Some(match best {
                Some(x) if x >= v => x,
                _ => v,
            });
        }
        Ok(best.expect("nonempty"))
    }

    /// Evaluate with atoms from `env` and no parameters.
    pub fn eval_atoms(&self, env: &BTreeMap<Atom, u64>) -> Result<Q, EvalError> {
        self.eval(&|v| match v {
            Var::Atom(a) => env.get(a).map(|n| Q::from_integer(*n as i128)),
            Var::Param(_) => None,
        })
    }

    /// Replace parameters by naturals.
    pub fn instantiate(&self, model: &BTreeMap<String, u64>) -> MaxPoly {
        self.subst(&|v| match v {
            Var::Param(p) => model.get(p).map(|n| MaxPoly::int(*n as i128)),
            _ => None,
        })
    }
}

impl fmt::Display for MaxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.branches.len() == 1 {
            return write!(f, "{}", self.branches[0]);
        }
        write!(f, "max(")?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests;
