use super::*;

const TOY: &str = include_str!("../../examples/toy.trs");

fn names(trs: &Trs, ids: impl Iterator<Item = SymId>) -> BTreeSet<String> {
    ids.map(|id| trs.sig.symbol(id).name.clone()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn toy_system_partition() {
    let trs = parse_trs(TOY).unwrap();
    assert_eq!(trs.rules.len(), 13);
    assert_eq!(
        names(&trs, trs.constructors()),
        set(&["0", "s", "nil", "cons"])
    );
    assert_eq!(
        names(&trs, trs.defined()),
        set(&["add", "sum", "append", "rev", "minus", "quot"])
    );
    for r in &trs.rules {
        assert_eq!(trs.type_of(&r.lhs), trs.type_of(&r.rhs));
    }
}

#[test]
fn no_rules_means_all_constructors() {
    let trs = parse_trs("SORTS nat\nSIG 0 : nat\nRULES\n").unwrap();
    assert_eq!(trs.constructors().count(), 1);
    assert_eq!(trs.defined().count(), 0);
}

#[test]
fn free_rhs_variable_is_rule_error() {
    let text = "SORTS nat\nSIG 0 : nat\nSIG add : nat => nat => nat\nVARS x y : nat\nRULES\nadd x 0 -> y\n";
    match parse_trs(text) {
        Err(TrsError::Rule { line, .. }) => assert_eq!(line, 6),
        other => panic!("expected rule error, got {other:?}"),
    }
}

#[test]
fn variable_lhs_is_rule_error() {
    let text = "SORTS nat\nSIG 0 : nat\nVARS x : nat\nRULES\nx -> 0\n";
    assert!(matches!(parse_trs(text), Err(TrsError::Rule { .. })));
}

#[test]
fn ill_typed_terms_are_rejected() {
    let base =
        "SORTS nat list\nSIG 0 : nat\nSIG nil : list\nSIG s : nat => nat\nVARS x : nat\nRULES\n";
    assert!(matches!(
        parse_trs(&format!("{base}s nil -> 0\n")),
        Err(TrsError::Type { .. })
    ));
    assert!(matches!(
        parse_trs(&format!("{base}s 0 0 -> 0\n")),
        Err(TrsError::Type { .. })
    ));
    assert!(matches!(
        parse_trs(&format!("{base}s (x 0) -> 0\n")),
        Err(TrsError::Type { .. })
    ));
    // sides of different type
    assert!(matches!(
        parse_trs(&format!("{base}s 0 -> nil\n")),
        Err(TrsError::Type { .. })
    ));
}

#[test]
fn parse_errors_carry_positions() {
    let text = "SORTS nat\nSIG 0 : nat\nSIG s : nat => nat\nRULES\ns (s 0 -> 0\n";
    match parse_trs(text) {
        Err(TrsError::Parse { line, col, .. }) => {
            assert_eq!(line, 5);
            assert_eq!(col, 8);
        }
        other => panic!("{other:?}"),
    }
    let undeclared = "SORTS nat\nSIG 0 : nat\nRULES\nfoo -> 0\n";
    match parse_trs(undeclared) {
        Err(TrsError::Parse { line, col, msg }) => {
            assert_eq!((line, col), (4, 1));
            assert!(msg.contains("foo"));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_trs("SORTS nat\nSIG 0 : int\n"),
        Err(TrsError::Parse { line: 2, .. })
    ));
    assert!(matches!(
        parse_trs("SORT nat\n"),
        Err(TrsError::Parse {
            line: 1,
            col: 1,
            ..
        })
    ));
}

#[test]
fn typing_examples() {
    let trs = parse_trs(TOY).unwrap();
    let sig = &trs.sig;
    let nat = sig.sort_id("nat").unwrap();
    let list = sig.sort_id("list").unwrap();
    let t = parse_term(sig, "cons x q").unwrap();
    assert_eq!(sig.type_of(&t), SimpleType::sort(list));
    let x = parse_term(sig, "x").unwrap();
    assert_eq!(sig.type_of(&x), SimpleType::sort(nat));
    let partial = parse_term(sig, "add x").unwrap();
    assert_eq!(
        sig.type_of(&partial),
        SimpleType {
            args: vec![nat],
            result: nat
        }
    );
    // ((add x) y) flattens to the spine `add x y`
    let nested = parse_term(sig, "(add x) y").unwrap();
    assert_eq!(nested, parse_term(sig, "add x y").unwrap());
}

#[test]
fn data_and_basic_terms() {
    let trs = parse_trs(TOY).unwrap();
    let p = |s: &str| parse_term(&trs.sig, s).unwrap();
    assert!(trs.is_data(&p("s (s 0)")));
    assert!(!trs.is_basic(&p("s (s 0)")));
    assert!(trs.is_basic(&p("add (s 0) 0")));
    assert!(!trs.is_data(&p("add (s 0) 0")));
    assert!(!trs.is_basic(&p("add (add 0 0) 0")));
    assert!(!trs.is_data(&p("add (add 0 0) 0")));
    assert!(!trs.is_basic(&p("add 0")));
    assert!(!trs.is_data(&p("x")));
}

#[test]
fn substitution_examples() {
    let trs = parse_trs(TOY).unwrap();
    let sig = &trs.sig;
    let p = |s: &str| parse_term(sig, s).unwrap();
    let x = sig.var_id("x").unwrap();
    let y = sig.var_id("y").unwrap();
    let q = sig.var_id("q").unwrap();
    let out = trs
        .apply_subst(&p("add x y"), [(x, p("0")), (y, p("s 0"))])
        .unwrap();
    assert_eq!(out, p("add 0 (s 0)"));
    let sym = p("nil");
    assert_eq!(trs.apply_subst(&sym, [(q, p("nil"))]).unwrap(), sym);
    let out = trs.apply_subst(&p("cons x q"), [(q, p("nil"))]).unwrap();
    assert_eq!(out, p("cons x nil"));
    assert!(matches!(
        trs.apply_subst(&p("cons x q"), [(q, p("0"))]),
        Err(TrsError::Type { .. })
    ));
}

#[test]
fn absolute_size() {
    let trs = parse_trs(TOY).unwrap();
    let p = |s: &str| parse_term(&trs.sig, s).unwrap();
    assert_eq!(p("0").size(), 1);
    assert_eq!(p("x").size(), 1);
    assert_eq!(p("add (s 0) (s 0)").size(), 5);
    assert_eq!(p("sum (cons (s 0) (cons (s 0) nil))").size(), 8);
}

#[test]
fn restriction_keeps_callees() {
    let trs = parse_trs(TOY).unwrap();
    let sub = trs.restrict_to(&["sum"]).unwrap();
    assert_eq!(sub.rules.len(), 4);
    assert_eq!(names(&sub, sub.defined()), set(&["add", "sum"]));
    assert_eq!(
        names(&sub, sub.constructors()),
        set(&["0", "s", "nil", "cons"])
    );
}

#[test]
fn display_round_trips() {
    let trs = parse_trs(TOY).unwrap();
    for r in &trs.rules {
        let shown = trs.show_rule(r);
        let (l, rhs) = shown.split_once(" -> ").unwrap();
        assert_eq!(parse_term(&trs.sig, l).unwrap(), r.lhs);
        assert_eq!(parse_term(&trs.sig, rhs).unwrap(), r.rhs);
    }
}

#[test]
fn numeral_symbols_are_allowed() {
    let trs = parse_trs(include_str!("../../examples/toyama.trs")).unwrap();
    assert!(trs.sig.symbol_id("1").is_some());
    assert_eq!(trs.rules.len(), 3);
}
