//! Rule orientation under a parameter-free interpretation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::interp::{InterpError, SymbolicCs, SymbolicInterpretation};
use crate::maxpoly::{compare, Atom, CompareResult, MaxPoly, Mode};
use crate::syntax::{Rule, Trs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Cost,
    /// Cost summand for the i-th missing argument (1-based).
    LaterCost(usize),
    /// Size component (1-based).
    Size(usize),
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub part: Part,
    pub lhs: MaxPoly,
    pub rhs: MaxPoly,
    pub mode: Mode,
    pub result: CompareResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleStatus {
    Oriented,
    CounterExample(BTreeMap<Atom, u64>),
    Unknown,
}

#[derive(Debug, Clone)]
pub struct RuleReport {
    pub index: usize,
    pub text: String,
    pub status: RuleStatus,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Global {
    Compatible,
    Incompatible,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub global: Global,
    pub rules: Vec<RuleReport>,
    /// Constructors with a nonzero cost summand.
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn oriented(&self) -> usize {
        self.rules
            .iter()
            .filter(|r| r.status == RuleStatus::Oriented)
            .count()
    }

    pub fn summary(&self) -> String {
        let n = self.rules.len();
        match self.global {
            Global::Compatible => format!("Compatible ({n}/{n} rules)"),
            Global::Incompatible => {
                format!("Incompatible ({}/{n} rules oriented)", self.oriented())
            }
            Global::Unknown => format!("Unknown ({}/{n} rules oriented)", self.oriented()),
        }
    }
}

/// The list of comparisons making up `⟦l⟧ ≻ ⟦r⟧`.
pub fn rule_goals(l: &SymbolicCs, r: &SymbolicCs) -> Vec<(Part, MaxPoly, MaxPoly, Mode)> {
    let mut out = vec![(Part::Cost, l.cost.clone(), r.cost.clone(), Mode::StrictCost)];
    for (i, (a, b)) in l.later.iter().zip(&r.later).enumerate() {
        out.push((Part::LaterCost(i + 1), a.clone(), b.clone(), Mode::WeakSize));
    }
    for (c, (a, b)) in l.size.iter().zip(&r.size).enumerate() {
        out.push((Part::Size(c + 1), a.clone(), b.clone(), Mode::WeakSize));
    }
    out
}

/// Both sides of a rule; function-typed rules are applied to fresh atoms.
pub fn interpret_rule(
    trs: &Trs,
    interp: &SymbolicInterpretation,
    rule: &Rule,
) -> Result<(SymbolicCs, SymbolicCs), InterpError> {
    let l = interp.interpret(trs, &rule.lhs)?;
    let r = interp.interpret(trs, &rule.rhs)?;
    if l.later.len() != r.later.len() || l.size.len() != r.size.len() {
        return Err(InterpError::Shape(format!(
            "sides of `{}` interpret to different shapes",
            trs.show_rule(rule)
        )));
    }
    Ok((l, r))
}

/// Complete a counterexample with 0 for every other atom of the rule.
fn full_env(
    goals: &[(Part, MaxPoly, MaxPoly, Mode)],
    env: &BTreeMap<Atom, u64>,
) -> BTreeMap<Atom, u64> {
    let mut out = env.clone();
    for (_, a, b, _) in goals {
        for atom in a.atoms().into_iter().chain(b.atoms()) {
            out.entry(atom).or_insert(0);
        }
    }
    out
}

pub fn check(trs: &Trs, interp: &SymbolicInterpretation) -> Result<Verdict, InterpError> {
    interp.validate(trs)?;
    if !interp.params().is_empty() {
        return Err(InterpError::Shape(
            "interpretation still has parameters".into(),
        ));
    }
    let mut rules = Vec::new();
    for (index, rule) in trs.rules.iter().enumerate() {
        let (l, r) = interpret_rule(trs, interp, rule)?;
        let goals = rule_goals(&l, &r);
        let mut comparisons = Vec::new();
        let mut status = RuleStatus::Oriented;
        for (part, a, b, mode) in &goals {
            let result = compare(a, b, *mode);
            match &result {
                CompareResult::Disproved(env) => {
                    if !matches!(status, RuleStatus::CounterExample(_)) {
                        status = RuleStatus::CounterExample(full_env(&goals, env));
                    }
                }
                CompareResult::Unknown if status == RuleStatus::Oriented => {
                    status = RuleStatus::Unknown
                }
                _ => {}
            }
            comparisons.push(Comparison {
                part: *part,
                lhs: a.clone(),
                rhs: b.clone(),
                mode: *mode,
                result,
            });
        }
        rules.push(RuleReport {
            index,
            text: trs.show_rule(rule),
            status,
            comparisons,
        });
    }
    let global = if rules
        .iter()
        .any(|r| matches!(r.status, RuleStatus::CounterExample(_)))
    {
        Global::Incompatible
    } else if rules.iter().any(|r| r.status == RuleStatus::Unknown) {
        Global::Unknown
    } else {
        Global::Compatible
    };
    let mut warnings = Vec::new();
    for f in trs.constructors() {
        if let Some(si) = interp.syms.get(&f) {
            if si.cost.iter().any(|c| !c.is_zero()) {
                warnings.push(format!(
                    "constructor `{}` has nonzero cost",
                    trs.sig.symbol(f).name
                ));
            }
        }
    }
    Ok(Verdict {
        global,
        rules,
        warnings,
    })
}

fn show_env(env: &BTreeMap<Atom, u64>) -> String {
    if env.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = env.iter().map(|(a, v)| format!("{a}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Human-readable per-rule evidence.
pub fn explain(v: &Verdict) -> String {
    let mut out = String::new();
    for r in &v.rules {
        let tag = match &r.status {
            RuleStatus::Oriented => "oriented",
            RuleStatus::CounterExample(_) => "counterexample",
            RuleStatus::Unknown => "unknown",
        };
        writeln!(out, "rule {}: {}  [{tag}]", r.index + 1, r.text).unwrap();
        for c in &r.comparisons {
            let label = match c.part {
                Part::Cost => "cost".to_string(),
                Part::LaterCost(i) => format!("cost@{i}"),
                Part::Size(_)
                    if r.comparisons
                        .iter()
                        .filter(|c| matches!(c.part, Part::Size(_)))
                        .count()
                        == 1 =>
                {
                    "size".to_string()
                }
                Part::Size(i) => format!("size.{i}"),
            };
            let rel = match (c.mode, c.part) {
                (Mode::StrictCost, _) => ">",
                (_, Part::LaterCost(_)) => ">=",
                _ => "⊒",
            };
            let note = match &c.result {
                CompareResult::Proved { split } if split.is_empty() => String::new(),
                CompareResult::Proved { split } => {
                    let names: Vec<String> = split.iter().map(|a| a.to_string()).collect();
                    format!("  (case split on {})", names.join(", "))
                }
                CompareResult::Disproved(env) => format!("  FAILS at {}", show_env(env)),
                CompareResult::Unknown => "  undecided".to_string(),
            };
            writeln!(out, "  {label}: {} {rel} {}{note}", c.lhs, c.rhs).unwrap();
        }
        if let RuleStatus::CounterExample(env) = &r.status {
            writeln!(out, "  counterexample: {}", show_env(env)).unwrap();
        }
    }
    for w in &v.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(out, "{}", v.summary()).unwrap();
    out
}

/// Names the fresh atoms standing for missing arguments.
pub fn is_fresh(a: &Atom) -> bool {
    a.name.starts_with("#z")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::parse_interpretation;
    use crate::syntax::parse_trs;

    const TOY: &str = include_str!("../examples/toy.trs");

    #[test]
    fn toy_is_compatible() {
        let trs = parse_trs(TOY).unwrap();
        let i = parse_interpretation(&trs, include_str!("../examples/toy.int")).unwrap();
        let v = check(&trs, &i).unwrap();
        let text = explain(&v);
        assert_eq!(v.global, Global::Compatible, "{text}");
        assert_eq!(v.summary(), "Compatible (13/13 rules)");
        assert!(
            text.contains("rule 1: add x 0 -> x  [oriented]\n  cost: 1 > 0\n  size: x ⊒ x\n"),
            "{text}"
        );
        assert!(v.warnings.is_empty());
    }

    #[test]
    fn literal_sum_cost_fails_on_sum_nil() {
        let trs = parse_trs(TOY).unwrap();
        let i =
            parse_interpretation(&trs, include_str!("../examples/toy-sum-literal.int")).unwrap();
        let v = check(&trs, &i).unwrap();
        assert_eq!(v.global, Global::Incompatible);
        let bad: Vec<&RuleReport> = v
            .rules
            .iter()
            .filter(|r| matches!(r.status, RuleStatus::CounterExample(_)))
            .collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].text, "sum nil -> 0");
        assert_eq!(bad[0].status, RuleStatus::CounterExample(BTreeMap::new()));
        assert!(explain(&v).contains("counterexample: {}"));
    }

    #[test]
    fn no_rules_is_compatible() {
        let trs = parse_trs("SORTS nat\nSIG 0 : nat\nRULES\n").unwrap();
        let v = check(&trs, &Default::default()).unwrap();
        assert_eq!(v.global, Global::Compatible);
        assert_eq!(v.summary(), "Compatible (0/0 rules)");
    }

    #[test]
    fn self_loop_is_incompatible() {
        let trs = parse_trs(include_str!("../examples/loop.trs")).unwrap();
        let i = parse_interpretation(
            &trs,
            "J 0 : cost = 0 ; size = 0\nJ f : cost = x + 1 ; size = x\n",
        )
        .unwrap();
        let v = check(&trs, &i).unwrap();
        assert_eq!(v.global, Global::Incompatible);
    }

    #[test]
    fn function_typed_rule() {
        let text = "SORTS nat\nSIG 0 : nat\nSIG s : nat => nat\nSIG f g : nat => nat => nat\nVARS x : nat\nRULES\nf x -> g x\n";
        let trs = parse_trs(text).unwrap();
        let ok = "J 0 : cost = 0 ; size = 0\nJ s x : cost = 0 ; size = x + 1\nJ f x y : cost = [0, 1, y] ; size = x + y\nJ g x y : cost = y ; size = x\n";
        let v = check(&trs, &parse_interpretation(&trs, ok).unwrap()).unwrap();
        assert_eq!(v.global, Global::Compatible, "{}", explain(&v));
        assert!(is_fresh(
            &v.rules[0].comparisons[1]
                .lhs
                .atoms()
                .into_iter()
                .next()
                .unwrap()
        ));
        // the later summand of g exceeds that of f
        let bad = "J 0 : cost = 0 ; size = 0\nJ s x : cost = 0 ; size = x + 1\nJ f x y : cost = [0, 1, y] ; size = x + y\nJ g x y : cost = 2 * y ; size = x\n";
        let v = check(&trs, &parse_interpretation(&trs, bad).unwrap()).unwrap();
        assert_eq!(v.global, Global::Incompatible);
    }
}
