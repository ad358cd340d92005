//! Synthesize an interpretation for `dbl` and show the solved constraints.
use tuplecert::search::{search, Answer, SearchConfig};
use tuplecert::syntax::parse_trs;

fn main() {
    let trs = parse_trs(include_str!("dbl.trs")).unwrap();
    let cfg = SearchConfig {
        k_max: 1,
        ..SearchConfig::default()
    };
    let out = search(&trs, &cfg);
    for s in &out.strata {
        if let Some(c) = s.final_constraint() {
            println!("constraint: {c}");
        }
    }
    println!("model: {:?}", out.model);
    match out.answer {
        Answer::Yes(i) => print!("{}", i.emit(&trs)),
        Answer::Maybe { .. } => println!("MAYBE"),
    }
}
