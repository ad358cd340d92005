use super::*;
use crate::syntax::{parse_term, parse_trs};

const TOY: &str = include_str!("../../examples/toy.trs");
const ADD: &str = include_str!("../../examples/add.trs");
const TOYAMA: &str = include_str!("../../examples/toyama.trs");

fn reducts(trs: &Trs, t: &str, kind: StepKind) -> Vec<String> {
    let t = parse_term(&trs.sig, t).unwrap();
    let mut v: Vec<String> = successors(&t, kind, trs)
        .into_iter()
        .map(|s| trs.show(&s.result).to_string())
        .collect();
    v.sort();
    v
}

/// Reference height by plain recursion, without memo or cycle checks.
fn naive_dh(trs: &Trs, t: &Term, kind: StepKind) -> usize {
    successors(t, kind, trs)
        .into_iter()
        .map(|s| 1 + naive_dh(trs, &s.result, kind))
        .max()
        .unwrap_or(0)
}

#[test]
fn innermost_successor_examples() {
    let add = parse_trs(ADD).unwrap();
    assert_eq!(
        reducts(&add, "add 0 (s 0)", StepKind::Innermost),
        ["s (add 0 0)"]
    );
    assert!(reducts(&add, "s 0", StepKind::Innermost).is_empty());

    let toyama = parse_trs(TOYAMA).unwrap();
    assert_eq!(
        reducts(&toyama, "f 0 1 (g 0 1)", StepKind::Innermost),
        ["f 0 1 0", "f 0 1 1"]
    );
    assert_eq!(
        reducts(&toyama, "f 0 1 (g 0 1)", StepKind::Full),
        ["f (g 0 1) (g 0 1) (g 0 1)", "f 0 1 0", "f 0 1 1"]
    );
}

#[test]
fn normal_forms() {
    let toy = parse_trs(TOY).unwrap();
    let p = |s: &str| parse_term(&toy.sig, s).unwrap();
    assert!(is_normal_form(&p("s (s 0)"), &toy));
    assert!(!is_normal_form(&p("add x 0"), &toy));
    let toyama = parse_trs(TOYAMA).unwrap();
    assert!(!is_normal_form(
        &parse_term(&toyama.sig, "g 0 1").unwrap(),
        &toyama
    ));
}

#[test]
fn innermost_is_contained_in_full() {
    let toy = parse_trs(TOY).unwrap();
    let mut e = TermEnumerator::new(&toy);
    for n in 1..=7 {
        for t in e.ground_terms(n) {
            let full: Vec<Term> = successors(&t, StepKind::Full, &toy)
                .into_iter()
                .map(|s| s.result)
                .collect();
            let inner = successors(&t, StepKind::Innermost, &toy);
            for s in &inner {
                assert!(full.contains(&s.result));
            }
            if is_normal_form(&t, &toy) {
                assert!(full.is_empty());
            } else {
                assert!(!inner.is_empty(), "innermost-irreducible non-normal form");
            }
        }
    }
}

#[test]
fn height_examples() {
    let add = parse_trs(ADD).unwrap();
    let t = parse_term(&add.sig, "add (s 0) (s 0)").unwrap();
    let r = derivation_height(&t, StepKind::Innermost, &add, DEFAULT_BUDGET);
    assert_eq!(r.height, Height::Finite(2));
    assert_eq!(r.witness.len(), 3);
    assert_eq!(add.show(r.witness.last().unwrap()).to_string(), "s (s 0)");

    let zero = parse_term(&add.sig, "0").unwrap();
    let r = derivation_height(&zero, StepKind::Innermost, &add, DEFAULT_BUDGET);
    assert_eq!(r.height, Height::Finite(0));

    let toyama = parse_trs(TOYAMA).unwrap();
    let t = parse_term(&toyama.sig, "f 0 1 (g 0 1)").unwrap();
    let r = derivation_height(&t, StepKind::Full, &toyama, 50);
    assert!(r.cycle);
    assert_eq!(r.height, Height::Diverged { budget: 50 });
    assert_eq!(r.witness.first(), Some(&t));
    assert!(r.witness[..r.witness.len() - 1].contains(r.witness.last().unwrap()));
}

#[test]
fn budget_cut_is_divergence() {
    let add = parse_trs(ADD).unwrap();
    let t = parse_term(&add.sig, "add 0 (s (s (s 0)))").unwrap();
    let r = derivation_height(&t, StepKind::Innermost, &add, 2);
    assert_eq!(r.height, Height::Diverged { budget: 2 });
    assert!(!r.cycle);
    let r = derivation_height(&t, StepKind::Innermost, &add, 4);
    assert_eq!(r.height, Height::Finite(4));
}

#[test]
fn memoized_height_matches_recursion() {
    let toy = parse_trs(TOY).unwrap();
    let mut e = TermEnumerator::new(&toy);
    let mut explorer = HeightExplorer::new(&toy, StepKind::Innermost, DEFAULT_BUDGET);
    for n in 1..=6 {
        for t in e.basic_terms(n) {
            let h = explorer.height(&t).height.finite().unwrap();
            assert_eq!(h, naive_dh(&toy, &t, StepKind::Innermost));
        }
    }
}

#[test]
fn self_loop_diverges() {
    let trs = parse_trs(include_str!("../../examples/loop.trs")).unwrap();
    let t = parse_term(&trs.sig, "f 0").unwrap();
    let r = derivation_height(&t, StepKind::Innermost, &trs, 10);
    assert!(r.cycle);
}

#[test]
fn enumeration_counts() {
    let add = parse_trs(ADD).unwrap();
    let nat = add.sig.sort_id("nat").unwrap();
    let mut e = TermEnumerator::new(&add);
    for n in 1..=6 {
        assert_eq!(e.data_terms(nat, n).len(), 1);
    }
    // add a b with |a| + |b| = 4
    assert_eq!(e.basic_terms(5).len(), 3);
    for t in e.basic_terms(5) {
        assert!(add.is_basic(&t));
        assert_eq!(t.size(), 5);
    }
}

#[test]
fn irc_of_add() {
    let add = parse_trs(ADD).unwrap();
    let table = irc_oracle(&add, 6, DEFAULT_BUDGET, StepKind::Innermost);
    assert_eq!(table.value(1), Some(Height::Finite(0)));
    assert_eq!(table.value(5), Some(Height::Finite(3)));
    let w = table.rows[4].witness.as_ref().unwrap();
    let shown = add.show(w).to_string();
    assert!(
        shown == "add 0 (s (s 0))" || shown == "add (s 0) (s 0)",
        "{shown}"
    );
    let vals: Vec<usize> = table
        .rows
        .iter()
        .map(|r| r.value.finite().unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    assert!(table.to_tsv(&add).starts_with("n\tirc\n1\t0\n"));
}

#[test]
fn toyama_innermost_terminates() {
    let toyama = parse_trs(TOYAMA).unwrap();
    let basic = irc_oracle(&toyama, 7, DEFAULT_BUDGET, StepKind::Innermost);
    assert!(!basic.diverged());
    let ground = complexity_table(
        &toyama,
        StartTerms::Ground,
        7,
        DEFAULT_BUDGET,
        StepKind::Innermost,
    );
    assert!(!ground.diverged());
    let full = complexity_table(&toyama, StartTerms::Ground, 8, 50, StepKind::Full);
    assert!(full.diverged());
    assert!(full.to_tsv(&toyama).contains("# divergence"));
}

#[test]
fn spot_value_sum() {
    let toy = parse_trs(TOY).unwrap();
    let t = parse_term(&toy.sig, "sum (cons (s 0) (cons (s 0) nil))").unwrap();
    let r = derivation_height(&t, StepKind::Innermost, &toy, DEFAULT_BUDGET);
    assert_eq!(r.height, Height::Finite(7));
}
