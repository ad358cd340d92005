//! Export the `dbl` constraints as SMT-LIB and read a solver model back.
use tuplecert::search::{search, SearchConfig};
use tuplecert::solver::{export_smtlib, parse_model};
use tuplecert::syntax::parse_trs;

fn main() {
    let trs = parse_trs(include_str!("dbl.trs")).unwrap();
    let out = search(&trs, &SearchConfig::default());
    let c = out.strata[0].final_constraint().unwrap();
    print!("{}", export_smtlib(c));

    let reply = "sat\n(\n  (define-fun a_0_1 () Int 0)\n  (define-fun a_s_1 () Int 1)\n  \
                 (define-fun c_dbl_0 () Int 1)\n  (define-fun c_dbl_1 () Int 2)\n  \
                 (define-fun d_dbl_1_0 () Int 0)\n  (define-fun d_dbl_1_1 () Int 2)\n)\n";
    let model = parse_model(reply).unwrap();
    println!("imported model holds: {}", c.holds(&model));
}
