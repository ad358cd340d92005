//! Innermost steps from a basic term, and the innermost runtime table.
use tuplecert::rewrite::{derivation_height, irc_oracle, successors, StepKind};
use tuplecert::syntax::{parse_term, parse_trs};

fn main() {
    let trs = parse_trs(include_str!("toy.trs")).unwrap();
    let mut t = parse_term(&trs.sig, "sum (cons (s 0) (cons (s 0) nil))").unwrap();
    println!(
        "dh = {:?}",
        derivation_height(&t, StepKind::Innermost, &trs, 1000).height
    );
    loop {
        println!("{}", trs.show(&t));
        let Some(step) = successors(&t, StepKind::Innermost, &trs).into_iter().next() else {
            break;
        };
        t = step.result;
    }
    print!(
        "{}",
        irc_oracle(&trs, 6, 10_000, StepKind::Innermost).to_tsv(&trs)
    );
}
