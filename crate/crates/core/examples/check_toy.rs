//! Check the hand-written interpretation of the list/arithmetic system,
//! then the variant whose `sum` cost is off by one.
use tuplecert::check::{check, explain};
use tuplecert::interp::parse_interpretation;
use tuplecert::syntax::parse_trs;

fn main() {
    let trs = parse_trs(include_str!("toy.trs")).expect("toy.trs parses");
    for (name, text) in [
        ("toy.int", include_str!("toy.int")),
        ("toy-sum-literal.int", include_str!("toy-sum-literal.int")),
    ] {
        let interp = parse_interpretation(&trs, text).expect("interpretation parses");
        let verdict = check(&trs, &interp).expect("no parameters left");
        println!("== {name}");
        print!("{}", explain(&verdict));
    }
}
