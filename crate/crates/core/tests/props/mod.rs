//! Randomized algebra properties, shared by the property tests and the
//! acceptance runner. Every suite runs a deterministic proptest runner.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tuplecert::algebra::{
    product_compare, sem_apply, CsValue, NumericInterpretation, Order, Valuation,
};
use tuplecert::interp::parse_interpretation;
use tuplecert::maxpoly::{compare, Atom, CompareResult, MaxPoly, Mode};
use tuplecert::rewrite::TermEnumerator;
use tuplecert::syntax::{parse_trs, Term, Trs, VarId};

pub const CASES: u32 = 1000;

fn runner() -> TestRunner {
    let cfg = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn finish(
    r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

const UNARY: &str =
    "SORTS nat\nSIG 0 : nat\nSIG s : nat => nat\nSIG f g : nat => nat\nVARS x : nat\nRULES\n";

/// Coefficients of `⟨(n, a + b·x + c·x²), p + q·x⟩`.
#[derive(Debug, Clone, Copy)]
struct Unary {
    n: u64,
    a: u64,
    b: u64,
    c: u64,
    p: u64,
    q: u64,
}

impl Unary {
    fn plus(self, d: Unary) -> Unary {
        Unary {
            n: self.n + d.n,
            a: self.a + d.a,
            b: self.b + d.b,
            c: self.c + d.c,
            p: self.p + d.p,
            q: self.q + d.q,
        }
    }

    fn line(self, name: &str) -> String {
        format!(
            "J {name} : cost = [{}, {} + {} * x + {} * x * x] ; size = {} + {} * x\n",
            self.n, self.a, self.b, self.c, self.p, self.q
        )
    }
}

fn unary() -> impl Strategy<Value = Unary> {
    (0..4u64, 0..4u64, 0..4u64, 0..3u64, 0..4u64, 0..3u64).prop_map(|(n, a, b, c, p, q)| Unary {
        n,
        a,
        b,
        c,
        p,
        q,
    })
}

fn pair_values(f: Unary, g: Unary) -> (CsValue, CsValue) {
    let trs = parse_trs(UNARY).unwrap();
    let text = format!(
        "J 0 : cost = 0 ; size = 0\nJ s : cost = 0 ; size = x + 1\n{}{}",
        f.line("f"),
        g.line("g")
    );
    let i = parse_interpretation(&trs, &text).unwrap();
    let n = NumericInterpretation::from_symbolic(&trs, &i).unwrap();
    let id = |s: &str| trs.sig.symbol_id(s).unwrap();
    (n.syms[&id("f")].clone(), n.syms[&id("g")].clone())
}

fn ge(a: &CsValue, b: &CsValue) -> bool {
    matches!(product_compare(a, b), Ok(Order::Greater | Order::GreaterEq))
}

fn gt(a: &CsValue, b: &CsValue) -> bool {
    matches!(product_compare(a, b), Ok(Order::Greater))
}

/// Semantic application is strongly monotonic in both arguments.
pub fn application_monotonic() -> Result<(), String> {
    let strat = (
        unary(),
        unary(),
        (0..5u64, 0..5u64),
        (0..3u64, 0..3u64),
        any::<bool>(),
        any::<bool>(),
    );
    finish(
        runner().run(&strat, |(g, d, (yc, ys), (dc, ds), strict_f, strict_x)| {
            let d = Unary {
                n: d.n + strict_f as u64,
                ..d
            };
            let (fv, gv) = pair_values(g.plus(d), g);
            let x = CsValue::base(yc + dc + strict_x as u64, vec![ys + ds]);
            let y = CsValue::base(yc, vec![ys]);
            prop_assert!(ge(&fv, &gv));
            prop_assert!(ge(&x, &y));
            let fx = sem_apply(&fv, &x).unwrap();
            let gy = sem_apply(&gv, &y).unwrap();
            if gt(&fv, &gv) || gt(&x, &y) {
                prop_assert!(gt(&fx, &gy), "strict clause");
            } else {
                prop_assert!(ge(&fx, &gy), "weak clause");
            }
            Ok(())
        }),
    )
}

fn toy() -> (Trs, NumericInterpretation) {
    let trs = parse_trs(include_str!("../../examples/toy.trs")).unwrap();
    let i = parse_interpretation(&trs, include_str!("../../examples/toy.int")).unwrap();
    let n = NumericInterpretation::from_symbolic(&trs, &i).unwrap();
    (trs, n)
}

/// `⟦sγ⟧_α = ⟦s⟧_{α^γ}` for zero-cost γ (data terms) over the toy rules.
pub fn substitution_commutes() -> Result<(), String> {
    let (trs, num) = toy();
    let sides: Vec<Term> = trs
        .rules
        .iter()
        .flat_map(|r| [r.lhs.clone(), r.rhs.clone()])
        .collect();
    let mut en = TermEnumerator::new(&trs);
    let vars: Vec<VarId> = trs.sig.vars().map(|(v, _)| v).collect();
    let mut pools: BTreeMap<VarId, Vec<Term>> = BTreeMap::new();
    for v in &vars {
        let sort = trs.sig.var(*v).sort;
        let terms: Vec<Term> = (1..=5).flat_map(|n| en.data_terms(sort, n)).collect();
        pools.insert(*v, terms);
    }
    let strat = (0..sides.len(), any::<u64>());
    finish(runner().run(&strat, |(i, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = &sides[i];
        let mut alpha = Valuation::new();
        for v in &vars {
            let k = num.k[&trs.sig.var(*v).sort];
            let size: Vec<u64> = (0..k).map(|_| rng.gen_range(0..6)).collect();
            alpha.insert(*v, CsValue::base(0, size));
        }
        let gamma: Vec<(VarId, Term)> = vars
            .iter()
            .map(|v| {
                let pool = &pools[v];
                (*v, pool[rng.gen_range(0..pool.len())].clone())
            })
            .collect();
        let sg = trs.apply_subst(s, gamma.clone()).unwrap();
        let mut lifted = Valuation::new();
        for (v, t) in &gamma {
            let val = num.interpret(&trs, t, &alpha).unwrap();
            prop_assert_eq!(val.cost, 0);
            lifted.insert(*v, val);
        }
        let a = num.interpret(&trs, &sg, &alpha).unwrap();
        let b = num.interpret(&trs, s, &lifted).unwrap();
        prop_assert_eq!(a.cost, b.cost);
        prop_assert_eq!(a.size_vec(), b.size_vec());
        Ok(())
    }))
}

fn base_value() -> impl Strategy<Value = CsValue> {
    (0..6u64, proptest::collection::vec(0..6u64, 2)).prop_map(|(c, s)| CsValue::base(c, s))
}

/// `≻ ; ≽ ⊆ ≻`, `≽ ; ≻ ⊆ ≻`, transitivity of `≽`, and irreflexivity of `≻`.
pub fn product_order_compatible() -> Result<(), String> {
    let strat = (
        base_value(),
        (0..3u64, 0..3u64, 0..3u64),
        (0..3u64, 0..3u64, 0..3u64),
        base_value(),
    );
    finish(runner().run(&strat, |(c, d1, d2, other)| {
        let raise = |v: &CsValue, (dc, d0, d1): (u64, u64, u64)| {
            let s = v.size_vec().unwrap();
            CsValue::base(v.cost + dc, vec![s[0] + d0, s[1] + d1])
        };
        let b = raise(&c, d1);
        let a = raise(&b, d2);
        for (x, y, z) in [
            (&a, &b, &c),
            (&a, &other, &c),
            (&other, &b, &c),
            (&a, &b, &other),
        ] {
            if gt(x, y) && ge(y, z) || ge(x, y) && gt(y, z) {
                prop_assert!(gt(x, z));
            }
            if ge(x, y) && ge(y, z) {
                prop_assert!(ge(x, z));
            }
        }
        prop_assert!(!gt(&a, &a));
        prop_assert!(ge(&a, &a));
        Ok(())
    }))
}

/// Unnormalized expression trees over the atoms x, y, z.
#[derive(Debug, Clone)]
pub enum Expr {
    Lit(u64),
    Atom(usize),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

const NAMES: [&str; 3] = ["x", "y", "z"];

impl Expr {
    pub fn to_maxpoly(&self) -> MaxPoly {
        match self {
            Expr::Lit(n) => MaxPoly::int(*n as i128),
            Expr::Atom(i) => MaxPoly::atom(Atom::scalar(NAMES[*i])),
            Expr::Add(a, b) => a.to_maxpoly().add(&b.to_maxpoly()),
            Expr::Mul(a, b) => a.to_maxpoly().mul(&b.to_maxpoly()),
            Expr::Max(a, b) => a.to_maxpoly().max_with(&b.to_maxpoly()),
        }
    }

    pub fn eval(&self, env: &[u64; 3]) -> u128 {
        match self {
            Expr::Lit(n) => *n as u128,
            Expr::Atom(i) => env[*i] as u128,
            Expr::Add(a, b) => a.eval(env) + b.eval(env),
            Expr::Mul(a, b) => a.eval(env) * b.eval(env),
            Expr::Max(a, b) => a.eval(env).max(b.eval(env)),
        }
    }
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0..4u64).prop_map(Expr::Lit),
        (0..3usize).prop_map(Expr::Atom)
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Max(Box::new(a), Box::new(b))),
        ]
    })
}

fn env_map(env: &[u64; 3]) -> BTreeMap<Atom, u64> {
    NAMES
        .iter()
        .zip(env)
        .map(|(n, v)| (Atom::scalar(*n), *v))
        .collect()
}

/// The normal form evaluates like the tree on every grid point.
pub fn normalize_eval_agree() -> Result<(), String> {
    finish(runner().run(&expr(), |e| {
        let p = e.to_maxpoly();
        for x in 0..=4 {
            for y in 0..=4 {
                for z in 0..=4 {
                    let env = [x, y, z];
                    let v = p.eval_atoms(&env_map(&env)).unwrap();
                    prop_assert_eq!(v, (e.eval(&env) as i128).into(), "{} at {:?}", p, env);
                }
            }
        }
        Ok(())
    }))
}

/// Whenever `compare` proves `p ≥ q` (or `p > q`), 1000 random points agree.
pub fn compare_sound() -> Result<(), String> {
    let strat = (expr(), expr(), expr(), any::<bool>(), any::<u64>());
    let res = runner().run(&strat, |(q, r, s, strict, seed)| {
        // p = max(q, r) + s proves often; (q, r) pairs rarely do
        let p = Expr::Add(
            Box::new(Expr::Max(Box::new(q.clone()), Box::new(r.clone()))),
            Box::new(s),
        );
        let mode = if strict {
            Mode::StrictCost
        } else {
            Mode::WeakSize
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (a, b) in [(&p, &q), (&q, &r)] {
            let (pa, pb) = (a.to_maxpoly(), b.to_maxpoly());
            match compare(&pa, &pb, mode) {
                CompareResult::Proved { .. } => {
                    for _ in 0..1000 {
                        let env = [
                            rng.gen_range(0..50),
                            rng.gen_range(0..50),
                            rng.gen_range(0..50),
                        ];
                        let (va, vb) = (a.eval(&env), b.eval(&env));
                        prop_assert!(
                            if strict { va > vb } else { va >= vb },
                            "{} vs {} at {:?}",
                            pa,
                            pb,
                            env
                        );
                    }
                }
                CompareResult::Disproved(env) => {
                    let full =
                        [0, 1, 2].map(|i| env.get(&Atom::scalar(NAMES[i])).copied().unwrap_or(0));
                    let (va, vb) = (a.eval(&full), b.eval(&full));
                    prop_assert!(
                        if strict { va <= vb } else { va < vb },
                        "bogus counterexample"
                    );
                }
                CompareResult::Unknown => {}
            }
        }
        Ok(())
    });
    finish(res)
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: [Suite; 5] = [
    ("application is strongly monotonic", application_monotonic),
    ("substitution commutes with interpretation", substitution_commutes),
    ("product order compatibility", product_order_compatible),
    ("normal form agrees with evaluation", normalize_eval_agree),
    ("compare is sound", compare_sound),
];
