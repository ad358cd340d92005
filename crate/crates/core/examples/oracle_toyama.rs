//! Toyama's system: a cycle under full rewriting, finite under innermost.
use tuplecert::rewrite::{complexity_table, derivation_height, StartTerms, StepKind};
use tuplecert::syntax::{parse_term, parse_trs};

fn main() {
    let trs = parse_trs(include_str!("toyama.trs")).unwrap();
    let t = parse_term(&trs.sig, "f 0 1 (g 0 1)").unwrap();
    for kind in [StepKind::Full, StepKind::Innermost] {
        let r = derivation_height(&t, kind, &trs, 50);
        println!("{kind:?}: {:?} (cycle: {})", r.height, r.cycle);
        for step in &r.witness {
            println!("  {}", trs.show(step));
        }
    }
    let table = complexity_table(&trs, StartTerms::Ground, 7, 10_000, StepKind::Innermost);
    print!("{}", table.to_tsv(&trs));
}
