use super::*;

fn resolve(name: &str, comp: Option<usize>) -> Result<Atom, String> {
    let width = if name == "q" || name == "l" { 2 } else { 1 };
    let comp = comp.unwrap_or(1);
    if comp > width {
        return Err(format!("`{name}` has {width} components"));
    }
    Ok(Atom::new(name, comp, width))
}

fn e(text: &str) -> MaxPoly {
    parse_expr(text, &resolve).unwrap()
}

fn env(pairs: &[(&str, u64)]) -> BTreeMap<Atom, u64> {
    pairs
        .iter()
        .map(|(n, v)| {
            let (name, comp) = match n.split_once('.') {
                Some((a, c)) => (a, Some(c.parse().unwrap())),
                None => (*n, None),
            };
            (resolve(name, comp).unwrap(), *v)
        })
        .collect()
}

#[test]
fn normalize_distributes_max() {
    let p = e("(max(x, q.2) + 1) * q.1");
    assert_eq!(p.branches().len(), 2);
    assert_eq!(p, e("max(x * q.1 + q.1, q.2 * q.1 + q.1)"));
    assert_eq!(e("x + 0"), e("x"));
    assert!(e("x + 0").is_max_free());
    assert_eq!(e("max(x, x)"), e("x"));
    assert_eq!(e("max(x, x + 1)"), e("x + 1"));
    assert_eq!(e("max(x, y)").branches().len(), 2);
}

#[test]
fn eval_examples() {
    let sum = e("2 * q.1 + q.1 * q.2 + 1");
    assert_eq!(
        sum.eval_atoms(&env(&[("q.1", 2), ("q.2", 1)])).unwrap(),
        Q::from_integer(7)
    );
    let m = e("max(x, y)");
    assert_eq!(
        m.eval_atoms(&env(&[("x", 0), ("y", 0)])).unwrap(),
        Q::from_integer(0)
    );
    let rev = e("q.1 * (q.1 + 1) * 1/2 + q.1 + 1");
    assert_eq!(
        rev.eval_atoms(&env(&[("q.1", 3)])).unwrap(),
        Q::from_integer(10)
    );
    assert!(matches!(
        m.eval_atoms(&env(&[("x", 0)])),
        Err(EvalError::UnboundAtom(_))
    ));
    assert!(matches!(
        MaxPoly::param("c").eval_atoms(&env(&[])),
        Err(EvalError::UninstantiatedParameter(_))
    ));
}

#[test]
fn parse_errors() {
    assert!(parse_expr("x - 1", &resolve).is_err());
    assert!(parse_expr("1/3 * x", &resolve).is_err());
    assert!(parse_expr("x.2", &resolve).is_err());
    assert!(parse_expr("max(x", &resolve).is_err());
    assert!(parse_expr("x y", &resolve).is_err());
    let sizes = parse_size("(q.1 + 1, max(x, q.2))", &resolve).unwrap();
    assert_eq!(sizes.len(), 2);
    assert_eq!(parse_size("(x + 1)", &resolve).unwrap(), vec![e("x + 1")]);
}

#[test]
fn display_round_trips() {
    for text in [
        "(max(x, q.2) + 1) * q.1",
        "q.1 + 1/2 * q.1 * (q.1 + 1) + 1",
        "0",
        "max(x, y, 2 * x * y)",
    ] {
        let p = e(text);
        assert_eq!(e(&p.to_string()), p, "{p}");
    }
    assert_eq!(e("x + 1").to_string(), "x + 1");
    assert_eq!(e("max(x, q.2)").to_string(), "max(q.2, x)");
}

#[test]
fn compare_examples() {
    assert_eq!(
        compare(&e("y + 2"), &e("y + 1"), Mode::StrictCost),
        CompareResult::Proved { split: vec![] }
    );
    assert_eq!(
        compare(&e("0"), &e("0"), Mode::StrictCost),
        CompareResult::Disproved(BTreeMap::new())
    );
    assert!(matches!(
        compare(&e("max(x, y)"), &e("x"), Mode::WeakSize),
        CompareResult::Proved { .. }
    ));
    // needs the x ≥ q.2 / q.2 ≥ x split
    let lhs = e("(q.1 + 1) * max(x, q.2)");
    let rhs = e("q.1 * q.2 + x");
    match compare(&lhs, &rhs, Mode::WeakSize) {
        CompareResult::Proved { split } => assert_eq!(split.len(), 2),
        other => panic!("{other:?}"),
    }
    match compare(&e("x"), &e("y"), Mode::WeakSize) {
        CompareResult::Disproved(w) => assert_eq!(w, env(&[("x", 0), ("y", 1)])),
        other => panic!("{other:?}"),
    }
    // true but outside the sufficient criterion
    assert_eq!(
        compare(&e("x * x + 1"), &e("2 * x"), Mode::WeakSize),
        CompareResult::Unknown
    );
}

#[test]
fn parametric_reduction_cancels() {
    let c1 = MaxPoly::param("c1");
    let c0 = MaxPoly::param("c0");
    let b0 = MaxPoly::param("b0");
    let x = MaxPoly::atom(Atom::scalar("x"));
    let lhs = c1.mul(&x).add(&c1.mul(&b0)).add(&c0);
    let rhs = c1.mul(&x).add(&c0);
    let r = compare_parametric(&lhs, &rhs, Mode::StrictCost);
    assert_eq!(r.constraint().to_string(), "c1 * b0 > 0");
}

#[test]
fn substitution_plugs_in_max() {
    let p = e("x * y + 1");
    let q = p.subst(&|v| match v {
        Var::Atom(a) if a.name == "y" => Some(e("max(x, 2)")),
        _ => None,
    });
    assert_eq!(q, e("max(x * x + 1, 2 * x + 1)"));
    assert_eq!(q.degree(), 2);
}
