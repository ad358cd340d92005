//! Per-symbol classes and the induced irc bound, for the whole system and
//! for its linear part; each bound is compared with the oracle.
use tuplecert::bounds::{classify_interpretation, cost_bound_table, irc_bound, linear_constant};
use tuplecert::check::check;
use tuplecert::interp::parse_interpretation;
use tuplecert::rewrite::{irc_oracle, StepKind};
use tuplecert::syntax::parse_trs;

fn main() {
    let full = parse_trs(include_str!("toy.trs")).unwrap();
    let interp = parse_interpretation(&full, include_str!("toy.int")).unwrap();
    let sub = full.restrict_to(&["add", "append", "minus"]).unwrap();
    for (label, trs, i) in [
        ("full", &full, interp.clone()),
        ("add/append/minus", &sub, interp.transfer(&full, &sub)),
    ] {
        println!("== {label}");
        for c in classify_interpretation(trs, &i) {
            println!("{:>7}: cost {}, size {}", c.name, c.cost, c.size);
        }
        let v = check(trs, &i).unwrap();
        println!("irc: {}", irc_bound(trs, &i, &v).unwrap());
        if let Some(c) = linear_constant(trs, &i) {
            println!("irc(n) <= {c} * n");
        }
        let measured = irc_oracle(trs, 6, 10_000, StepKind::Innermost);
        let bound = cost_bound_table(trs, &i, 6).unwrap();
        for row in &measured.rows {
            println!(
                "n={}  irc={:?}  cost bound={}",
                row.n, row.value, bound[row.n]
            );
        }
    }
}
