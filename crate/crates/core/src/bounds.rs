//! Complexity classes read off an interpretation.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, NumericInterpretation, Valuation};
use crate::check::{Global, Verdict};
use crate::interp::SymbolicInterpretation;
use crate::maxpoly::{MaxPoly, Q};
use crate::rewrite::TermEnumerator;
use crate::syntax::{SymId, Trs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundClass {
    Additive,
    Linear,
    Polynomial(u32),
    /// Never produced from max-polynomials.
    Unbounded,
}

impl BoundClass {
    fn rank(self) -> (u32, u32) {
        match self {
            BoundClass::Additive => (0, 0),
            BoundClass::Linear => (1, 0),
            BoundClass::Polynomial(d) => (2, d),
            BoundClass::Unbounded => (3, 0),
        }
    }

    pub fn worst(self, other: BoundClass) -> BoundClass {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, BoundClass::Additive | BoundClass::Linear)
    }
}

impl fmt::Display for BoundClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundClass::Additive => write!(f, "additive"),
            BoundClass::Linear => write!(f, "linear"),
            BoundClass::Polynomial(d) => write!(f, "polynomial({d})"),
            BoundClass::Unbounded => write!(f, "unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrcVerdict {
    ON,
    OPoly(u32),
    Inconclusive,
}

impl fmt::Display for IrcVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrcVerdict::ON => write!(f, "O(n)"),
            IrcVerdict::OPoly(1) => write!(f, "O(n)"),
            IrcVerdict::OPoly(k) => write!(f, "O(n^{k})"),
            IrcVerdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bounds need a compatible interpretation")]
    PreconditionViolated,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn additive_branch(p: &crate::maxpoly::Poly) -> bool {
    p.terms().all(|(m, c)| match m.degree() {
        0 => true,
        1 => *c <= Q::from_integer(1),
        _ => false,
    })
}

/// Class of a size vector (or a single cost summand).
pub fn classify_size(f: &[MaxPoly]) -> BoundClass {
    let sum = MaxPoly::sum(f);
    if sum.branches().iter().all(additive_branch) {
        return BoundClass::Additive;
    }
    let deg = f.iter().map(MaxPoly::degree).max().unwrap_or(0);
    if deg <= 1 {
        BoundClass::Linear
    } else {
        BoundClass::Polynomial(deg)
    }
}

#[derive(Debug, Clone)]
pub struct SymbolClass {
    pub symbol: SymId,
    pub name: String,
    pub cost: BoundClass,
    pub size: BoundClass,
    /// Largest total degree among the cost summands.
    pub cost_degree: u32,
}

pub fn classify_interpretation(trs: &Trs, interp: &SymbolicInterpretation) -> Vec<SymbolClass> {
    interp
        .syms
        .iter()
        .map(|(f, si)| {
            let cost = si
                .cost
                .iter()
                .map(|e| classify_size(std::slice::from_ref(e)))
                .fold(BoundClass::Additive, BoundClass::worst);
            SymbolClass {
                symbol: *f,
                name: trs.sig.symbol(*f).name.clone(),
                cost,
                size: classify_size(&si.size),
                cost_degree: si.cost.iter().map(MaxPoly::degree).max().unwrap_or(0),
            }
        })
        .collect()
}

/// The irc class induced by a compatible interpretation.
pub fn irc_bound(
    trs: &Trs,
    interp: &SymbolicInterpretation,
    verdict: &Verdict,
) -> Result<IrcVerdict, BoundError> {
    if verdict.global != Global::Compatible {
        return Err(BoundError::PreconditionViolated);
    }
    let classes = classify_interpretation(trs, interp);
    if classes
        .iter()
        .any(|c| trs.is_constructor(c.symbol) && c.size != BoundClass::Additive)
    {
        return Ok(IrcVerdict::Inconclusive);
    }
    if classes
        .iter()
        .all(|c| c.cost == BoundClass::Additive && c.size == BoundClass::Additive)
    {
        return Ok(IrcVerdict::ON);
    }
    let k = classes
        .iter()
        .filter(|c| trs.is_defined(c.symbol))
        .map(|c| c.cost_degree)
        .max()
        .unwrap_or(0);
    Ok(IrcVerdict::OPoly(k.max(1)))
}

fn max_constant(p: &MaxPoly) -> Q {
    p.branches()
        .iter()
        .map(|b| b.constant_term())
        .max()
        .unwrap_or_else(Q::zero)
}

/// `c` with `irc(n) ≤ c·n`, for additive interpretations whose
/// constructors carry no cost.
pub fn linear_constant(trs: &Trs, interp: &SymbolicInterpretation) -> Option<u64> {
    let classes = classify_interpretation(trs, interp);
    if classes
        .iter()
        .any(|c| c.cost != BoundClass::Additive || c.size != BoundClass::Additive)
    {
        return None;
    }
    let mut a = Q::zero();
    let mut b = Q::zero();
    let mut m = 0;
    for (f, si) in &interp.syms {
        if trs.is_constructor(*f) {
            if si.cost.iter().any(|c| !c.is_zero()) {
                return None;
            }
            a = a.max(max_constant(&MaxPoly::sum(&si.size)));
        } else {
            m = m.max(si.cost.len() - 1);
            for e in &si.cost {
                b = b.max(max_constant(e));
            }
        }
    }
    let c = Q::from_integer((m + 1) as i128) * (a + b);
    c.ceil().to_integer().to_u64()
}

/// For each `n ≤ n_max`, the largest evaluated cost over basic terms of
/// size at most `n`.
pub fn cost_bound_table(
    trs: &Trs,
    interp: &SymbolicInterpretation,
    n_max: usize,
) -> Result<Vec<u64>, BoundError> {
    let num = NumericInterpretation::from_symbolic(trs, interp)?;
    let mut en = TermEnumerator::new(trs);
    let mut best = 0;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        for t in en.basic_terms(n) {
            best = best.max(num.interpret(trs, &t, &Valuation::new())?.cost);
        }
        out.push(best);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check;
    use crate::interp::parse_interpretation;
    use crate::maxpoly::{parse_expr, Atom};
    use crate::syntax::parse_trs;

    fn expr(s: &str) -> MaxPoly {
        parse_expr(s, &|n, c| {
            Ok(Atom::new(
                n,
                c.unwrap_or(1),
                if c.is_some() { 2 } else { 1 },
            ))
        })
        .unwrap()
    }

    #[test]
    fn size_classes() {
        assert_eq!(
            classify_size(&[expr("q.1 + 1"), expr("max(x, q.2)")]),
            BoundClass::Additive
        );
        assert_eq!(classify_size(&[expr("2 * x + 1")]), BoundClass::Linear);
        assert_eq!(classify_size(&[expr("x * y")]), BoundClass::Polynomial(2));
        assert_eq!(classify_size(&[expr("0")]), BoundClass::Additive);
        // each argument may appear once across components
        assert_eq!(classify_size(&[expr("x"), expr("x")]), BoundClass::Linear);
    }

    #[test]
    fn toy_bounds() {
        let trs = parse_trs(include_str!("../examples/toy.trs")).unwrap();
        let i = parse_interpretation(&trs, include_str!("../examples/toy.int")).unwrap();
        let v = check(&trs, &i).unwrap();
        let classes = classify_interpretation(&trs, &i);
        let of = |n: &str| classes.iter().find(|c| c.name == n).unwrap();
        assert_eq!(
            (of("add").cost, of("add").size),
            (BoundClass::Additive, BoundClass::Additive)
        );
        assert_eq!(of("sum").cost, BoundClass::Polynomial(2));
        assert_eq!(of("sum").size, BoundClass::Polynomial(2));
        assert_eq!(irc_bound(&trs, &i, &v), Ok(IrcVerdict::OPoly(2)));

        let sub = trs.restrict_to(&["add", "append", "minus"]).unwrap();
        let si = i.transfer(&trs, &sub);
        let sv = check(&sub, &si).unwrap();
        assert_eq!(irc_bound(&sub, &si, &sv), Ok(IrcVerdict::ON));
        assert!(linear_constant(&sub, &si).is_some());
    }

    #[test]
    fn exponential_size_is_inconclusive() {
        let trs = parse_trs(include_str!("../examples/add.trs")).unwrap();
        let i = parse_interpretation(&trs, include_str!("../examples/exp-size.int")).unwrap();
        let v = check(&trs, &i).unwrap();
        assert_eq!(v.global, Global::Compatible);
        assert_eq!(irc_bound(&trs, &i, &v), Ok(IrcVerdict::Inconclusive));
    }

    #[test]
    fn incompatible_is_rejected() {
        let trs = parse_trs(include_str!("../examples/toy.trs")).unwrap();
        let i =
            parse_interpretation(&trs, include_str!("../examples/toy-sum-literal.int")).unwrap();
        let v = check(&trs, &i).unwrap();
        assert_eq!(
            irc_bound(&trs, &i, &v),
            Err(BoundError::PreconditionViolated)
        );
    }
}
