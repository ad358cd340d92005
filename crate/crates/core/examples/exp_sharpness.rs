//! A size interpretation that doubles: data sizes grow exponentially and
//! no polynomial bound is derived.
use tuplecert::algebra::{NumericInterpretation, Valuation};
use tuplecert::bounds::irc_bound;
use tuplecert::check::check;
use tuplecert::interp::parse_interpretation;
use tuplecert::syntax::{parse_term, parse_trs};

fn main() {
    let trs = parse_trs(include_str!("add.trs")).unwrap();
    let interp = parse_interpretation(&trs, include_str!("exp-size.int")).unwrap();
    let num = NumericInterpretation::from_symbolic(&trs, &interp).unwrap();
    let mut text = String::from("0");
    for n in 0..=10 {
        let t = parse_term(&trs.sig, &text).unwrap();
        let v = num.interpret(&trs, &t, &Valuation::new()).unwrap();
        println!(
            "|s^{n}(0)| = {}  size = {:?}",
            t.size(),
            v.size_vec().unwrap()
        );
        text = format!("s ({text})");
    }
    let verdict = check(&trs, &interp).unwrap();
    println!("{}", verdict.summary());
    println!("irc: {}", irc_bound(&trs, &interp, &verdict).unwrap());
}
