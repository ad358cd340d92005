//! Numeric cost–size tuples over `ℕ^k` size sets.
//!
//! A value of type `ι₁ ⇒ … ⇒ ι_m ⇒ κ` is a numeric cost, a curried cost
//! function handing out one further summand per argument, and a curried
//! size function ending in a vector of `k(κ)` naturals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::interp::{SymbolInterp, SymbolicInterpretation};
use crate::maxpoly::{Atom, MaxPoly};
use crate::syntax::{SymId, Term, Trs, VarId};

pub type SizeVec = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no interpretation for symbol `{0}`")]
    MissingSymbol(String),
    #[error("expression `{0}` is not a natural number at this point")]
    NotNatural(String),
}

type CostFn = dyn Fn(&[u64]) -> Result<(u64, CostPart), AlgebraError> + Send + Sync;
type SizeFn = dyn Fn(&[u64]) -> Result<SizePart, AlgebraError> + Send + Sync;

#[derive(Clone)]
pub enum CostPart {
    Done,
    /// Takes an argument size of `arg_k` components.
    Func {
        arg_k: usize,
        f: Arc<CostFn>,
    },
}

#[derive(Clone)]
pub enum SizePart {
    Value(SizeVec),
    Func { arg_k: usize, f: Arc<SizeFn> },
}

/// `⟨(n, f^c), f^s⟩`.
#[derive(Clone)]
pub struct CsValue {
    pub cost: u64,
    pub cost_fn: CostPart,
    pub size: SizePart,
}

impl fmt::Debug for CsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.cost_fn, &self.size) {
            (CostPart::Done, SizePart::Value(v)) => write!(f, "<{}, {:?}>", self.cost, v),
            _ => write!(f, "<{}, fn>", self.cost),
        }
    }
}

impl CsValue {
    /// A value at sort type.
    pub fn base(cost: u64, size: SizeVec) -> Self {
        CsValue {
            cost,
            cost_fn: CostPart::Done,
            size: SizePart::Value(size),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self.size, SizePart::Value(_))
    }

    pub fn size_vec(&self) -> Option<&SizeVec> {
        match &self.size {
            SizePart::Value(v) => Some(v),
            SizePart::Func { .. } => None,
        }
    }

    /// Number of arguments still expected.
    pub fn pending(&self) -> usize {
        let mut n = 0;
        let mut s = self.size.clone();
        while let SizePart::Func { arg_k, f } = s {
            n += 1;
            s = f(&vec![0; arg_k]).unwrap_or(SizePart::Value(Vec::new()));
        }
        n
    }
}

/// Semantic application `⟨(n,f^c),f^s⟩ · ⟨m,x^s⟩ = ⟨(n+m+k, h), f^s(x^s)⟩`
/// where `f^c(x^s) = (k, h)`.
pub fn sem_apply(f: &CsValue, x: &CsValue) -> Result<CsValue, AlgebraError> {
    let SizePart::Value(xs) = &x.size else {
        return Err(AlgebraError::ShapeMismatch(
            "argument must be at sort type".into(),
        ));
    };
    let (CostPart::Func { arg_k: ck, f: fc }, SizePart::Func { arg_k: sk, f: fs }) =
        (&f.cost_fn, &f.size)
    else {
        return Err(AlgebraError::ShapeMismatch(
            "applying a non-function".into(),
        ));
    };
    if *ck != xs.len() || *sk != xs.len() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "argument has {} size components, expected {}",
            xs.len(),
            sk
        )));
    }
    let (k, h) = fc(xs)?;
    Ok(CsValue {
        cost: f.cost + x.cost + k,
        cost_fn: h,
        size: fs(xs)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Greater,
    GreaterEq,
    Incomparable,
}

/// Sample points for function comparison: every component in `0..=4`.
pub const GRID_MAX: u64 = 4;

fn grid(k: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=GRID_MAX).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn cost_geq(a: &CostPart, b: &CostPart) -> Result<bool, AlgebraError> {
    match (a, b) {
        (CostPart::Done, CostPart::Done) => Ok(true),
        (CostPart::Func { arg_k, f }, CostPart::Func { arg_k: k2, f: g }) if arg_k == k2 => {
            for p in grid(*arg_k) {
                let (n, h1) = f(&p)?;
                let (m, h2) = g(&p)?;
                if n < m || !cost_geq(&h1, &h2)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(AlgebraError::ShapeMismatch(
            "cost parts differ in shape".into(),
        )),
    }
}

fn size_geq(a: &SizePart, b: &SizePart) -> Result<bool, AlgebraError> {
    match (a, b) {
        (SizePart::Value(x), SizePart::Value(y)) if x.len() == y.len() => {
            Ok(x.iter().zip(y).all(|(p, q)| p >= q))
        }
        (SizePart::Func { arg_k, f }, SizePart::Func { arg_k: k2, f: g }) if arg_k == k2 => {
            for p in grid(*arg_k) {
                if !size_geq(&f(&p)?, &g(&p)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(AlgebraError::ShapeMismatch(
            "size parts differ in shape".into(),
        )),
    }
}

/// Product order; functional parts are compared on the sample grid.
pub fn product_compare(a: &CsValue, b: &CsValue) -> Result<Order, AlgebraError> {
    let rest = cost_geq(&a.cost_fn, &b.cost_fn)? && size_geq(&a.size, &b.size)?;
    Ok(if !rest || a.cost < b.cost {
        Order::Incomparable
    } else if a.cost > b.cost {
        Order::Greater
    } else {
        Order::GreaterEq
    })
}

/// True iff the comparison above had to sample functions.
pub fn is_sampled(a: &CsValue) -> bool {
    !a.is_base()
}

pub type Valuation = BTreeMap<VarId, CsValue>;

/// A symbol table of numeric tuples.
#[derive(Clone, Default)]
pub struct NumericInterpretation {
    pub k: BTreeMap<crate::syntax::SortId, usize>,
    pub syms: BTreeMap<SymId, CsValue>,
}

fn eval_nat(p: &MaxPoly, env: &BTreeMap<Atom, u64>) -> Result<u64, AlgebraError> {
    let v = p
        .eval_atoms(env)
        .map_err(|_| AlgebraError::NotNatural(p.to_string()))?;
    if !v.is_integer() {
        return Err(AlgebraError::NotNatural(p.to_string()));
    }
    v.to_integer()
        .to_u64()
        .ok_or_else(|| AlgebraError::NotNatural(p.to_string()))
}

struct Closure {
    si: SymbolInterp,
    atoms: Vec<Vec<Atom>>,
}

fn bind(c: &Closure, prev: &BTreeMap<Atom, u64>, i: usize, x: &[u64]) -> BTreeMap<Atom, u64> {
    let mut env = prev.clone();
    for (a, v) in c.atoms[i].iter().zip(x) {
        env.insert(a.clone(), *v);
    }
    env
}

fn cost_from(c: Arc<Closure>, i: usize, env: BTreeMap<Atom, u64>) -> CostPart {
    if i == c.atoms.len() {
        return CostPart::Done;
    }
    let arg_k = c.atoms[i].len();
    CostPart::Func {
        arg_k,
        f: Arc::new(move |x: &[u64]| {
            let env = bind(&c, &env, i, x);
            let k = eval_nat(&c.si.cost[i + 1], &env)?;
            Ok((k, cost_from(c.clone(), i + 1, env)))
        }),
    }
}

fn size_from(
    c: Arc<Closure>,
    i: usize,
    env: BTreeMap<Atom, u64>,
) -> Result<SizePart, AlgebraError> {
    if i == c.atoms.len() {
        return c
            .si
            .size
            .iter()
            .map(|p| eval_nat(p, &env))
            .collect::<Result<Vec<_>, _>>()
            .map(SizePart::Value);
    }
    let arg_k = c.atoms[i].len();
    Ok(SizePart::Func {
        arg_k,
        f: Arc::new(move |x: &[u64]| size_from(c.clone(), i + 1, bind(&c, &env, i, x))),
    })
}

impl NumericInterpretation {
    /// Evaluate a parameter-free symbolic interpretation into closures.
    pub fn from_symbolic(trs: &Trs, interp: &SymbolicInterpretation) -> Result<Self, AlgebraError> {
        let mut syms = BTreeMap::new();
        for (f, si) in &interp.syms {
            let c = Arc::new(Closure {
                si: si.clone(),
                atoms: interp.arg_atoms(trs, *f),
            });
            let cost = eval_nat(&si.cost[0], &BTreeMap::new())?;
            syms.insert(
                *f,
                CsValue {
                    cost,
                    cost_fn: cost_from(c.clone(), 0, BTreeMap::new()),
                    size: size_from(c, 0, BTreeMap::new())?,
                },
            );
        }
        Ok(NumericInterpretation {
            k: interp.k.clone(),
            syms,
        })
    }

    /// `⟦t⟧_α`.
    pub fn interpret(
        &self,
        trs: &Trs,
        t: &Term,
        alpha: &Valuation,
    ) -> Result<CsValue, AlgebraError> {
        match t {
            Term::Var(v) => {
                let val = alpha
                    .get(v)
                    .ok_or_else(|| AlgebraError::UnboundVariable(trs.sig.var(*v).name.clone()))?;
                if val.cost != 0 {
                    return Err(AlgebraError::ShapeMismatch(
                        "valuations assign zero-cost tuples".into(),
                    ));
                }
                Ok(val.clone())
            }
            Term::App(f, args) => {
                let mut acc =
                    self.syms.get(f).cloned().ok_or_else(|| {
                        AlgebraError::MissingSymbol(trs.sig.symbol(*f).name.clone())
                    })?;
                for a in args {
                    acc = sem_apply(&acc, &self.interpret(trs, a, alpha)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Every constructor's cost summands vanish on the sample grid.
    pub fn zero_cost_data(&self, trs: &Trs) -> bool {
        fn zero(c: &CostPart) -> bool {
            match c {
                CostPart::Done => true,
                CostPart::Func { arg_k, f } => grid(*arg_k)
                    .iter()
                    .all(|p| matches!(f(p), Ok((0, h)) if zero(&h))),
            }
        }
        trs.constructors().all(|c| match self.syms.get(&c) {
            Some(v) => v.cost == 0 && zero(&v.cost_fn),
            None => true,
        })
    }
}
