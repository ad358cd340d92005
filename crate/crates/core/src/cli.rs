//! Command-line front end. `run` never exits the process, so tests drive it
//! with in-memory writers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{classify_interpretation, irc_bound, linear_constant, BoundError, IrcVerdict};
use crate::check::{check, explain, Global, RuleStatus, Verdict};
use crate::interp::{parse_interpretation, SymbolicInterpretation};
use crate::rewrite::{complexity_table, Height, StartTerms, StepKind, DEFAULT_BUDGET};
use crate::search::{search, Answer, SearchConfig, SearchOutcome, StrategyKind};
use crate::solver::{export_smtlib, parse_model, Constraint};
use crate::syntax::{parse_trs, Trs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCOMPATIBLE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "tuplecert",
    version,
    about = "Cost-size tuple interpretations for simply-typed TRSs"
)]
struct Cli {
    /// Print a JSON envelope instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Blind,
    Progressive,
    Pattern,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelationArg {
    Innermost,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TermsArg {
    Basic,
    Ground,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "progressive")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    kmax: u64,
    #[arg(long = "coeff-bound", default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    coeff_bound: u64,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check an interpretation file against a TRS.
    Check { trs: PathBuf, int: PathBuf },
    /// Synthesize an interpretation.
    Search {
        trs: PathBuf,
        #[command(flatten)]
        opts: SearchArgs,
        /// Where to write the interpretation on success
        /// (default: `<name>.found.int` in the working directory).
        #[arg(long = "emit-int")]
        emit_int: Option<PathBuf>,
        /// Directory receiving one SMT-LIB file per stratum.
        #[arg(long = "emit-smt")]
        emit_smt: Option<PathBuf>,
    },
    /// Classify an interpretation and derive the irc class.
    Bound {
        trs: PathBuf,
        int: PathBuf,
        /// Restrict to the rules of these symbols (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Brute-force complexity table.
    Oracle {
        trs: PathBuf,
        #[arg(long = "max-size", default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value = "innermost")]
        relation: RelationArg,
        /// Start terms (default: basic for innermost, ground for full).
        #[arg(long, value_enum)]
        terms: Option<TermsArg>,
    },
    /// Print the stratum constraints as QF_NIA, or check a model for them.
    ExportSmt {
        trs: PathBuf,
        #[command(flatten)]
        opts: SearchArgs,
        /// Solver output with `define-fun` lines to check.
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Input {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Envelope {
    command: String,
    inputs: Vec<Input>,
    verdict: String,
    details: Value,
    seed: Option<u64>,
    elapsed_ms: u128,
}

struct Report {
    text: String,
    verdict: String,
    details: Value,
    seed: Option<u64>,
    code: i32,
}

enum Failure {
    Usage(String),
    Parse(String),
}

struct Loaded {
    inputs: Vec<Input>,
}

impl Loaded {
    fn read(&mut self, p: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
        self.inputs.push(Input {
            path: p.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Failure::Parse(format!("{}: not UTF-8", p.display())))
    }

    fn trs(&mut self, p: &Path) -> Result<Trs, Failure> {
        let text = self.read(p)?;
        parse_trs(&text).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))
    }

    fn interp(&mut self, trs: &Trs, p: &Path) -> Result<SymbolicInterpretation, Failure> {
        let text = self.read(p)?;
        parse_interpretation(trs, &text)
            .map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let start = Instant::now();
    let mut files = Loaded { inputs: Vec::new() };
    let command = match &cli.cmd {
        Cmd::Check { .. } => "check",
        Cmd::Search { .. } => "search",
        Cmd::Bound { .. } => "bound",
        Cmd::Oracle { .. } => "oracle",
        Cmd::ExportSmt { .. } => "export-smt",
    };
    let report = match dispatch(cli.cmd, &mut files) {
        Ok(r) => r,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_USAGE;
        }
        Err(Failure::Parse(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_PARSE;
        }
    };
    if cli.json {
        let env = Envelope {
            command: command.into(),
            inputs: files.inputs,
            verdict: report.verdict,
            details: report.details,
            seed: report.seed,
            elapsed_ms: start.elapsed().as_millis(),
        };
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&env).expect("serializable")
        );
    } else {
        let _ = write!(out, "{}", report.text);
    }
    report.code
}

fn dispatch(cmd: Cmd, files: &mut Loaded) -> Result<Report, Failure> {
    match cmd {
        Cmd::Check { trs, int } => {
            let trs = files.trs(&trs)?;
            let interp = files.interp(&trs, &int)?;
            let v = check(&trs, &interp).map_err(|e| Failure::Parse(e.to_string()))?;
            Ok(check_report(&v))
        }
        Cmd::Search {
            trs,
            opts,
            emit_int,
            emit_smt,
        } => {
            let path = trs.clone();
            let trs = files.trs(&trs)?;
            let cfg = config(&opts);
            let outcome = search(&trs, &cfg);
            if let Some(dir) = &emit_smt {
                write_smt(&trs, &outcome, dir)?;
            }
            let target = emit_int.unwrap_or_else(|| {
                let stem = path
                    .file_stem()
                    .map_or("out".into(), |s| s.to_string_lossy().into_owned());
                PathBuf::from(format!("{stem}.found.int"))
            });
            search_report(&trs, &outcome, &cfg, &target)
        }
        Cmd::Bound { trs, int, only } => {
            let full = files.trs(&trs)?;
            let interp = files.interp(&full, &int)?;
            let (trs, interp) = if only.is_empty() {
                (full, interp)
            } else {
                let names: Vec<&str> = only.iter().map(String::as_str).collect();
                let sub = full
                    .restrict_to(&names)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                let si = interp.transfer(&full, &sub);
                (sub, si)
            };
            let v = check(&trs, &interp).map_err(|e| Failure::Parse(e.to_string()))?;
            Ok(bound_report(&trs, &interp, &v))
        }
        Cmd::Oracle {
            trs,
            max_size,
            budget,
            relation,
            terms,
        } => {
            if budget == 0 {
                return Err(Failure::Usage("--budget must be positive".into()));
            }
            let trs = files.trs(&trs)?;
            let kind = match relation {
                RelationArg::Innermost => StepKind::Innermost,
                RelationArg::Full => StepKind::Full,
            };
            let start = match (terms, relation) {
                (Some(TermsArg::Basic), _) | (None, RelationArg::Innermost) => StartTerms::Basic,
                (Some(TermsArg::Ground), _) | (None, RelationArg::Full) => StartTerms::Ground,
            };
            let table = complexity_table(&trs, start, max_size, budget, kind);
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| match r.value {
                    Height::Finite(h) => json!({"n": r.n, "irc": h, "terms": r.count}),
                    Height::Diverged { .. } => json!({"n": r.n, "irc": null, "terms": r.count}),
                })
                .collect();
            let diverged = table.diverged();
            Ok(Report {
                text: table.to_tsv(&trs),
                verdict: if diverged { "diverged" } else { "finite" }.into(),
                details: json!({
                    "relation": format!("{kind:?}").to_lowercase(),
                    "terms": format!("{start:?}").to_lowercase(),
                    "budget": budget,
                    "rows": rows,
                }),
                seed: None,
                code: EXIT_OK,
            })
        }
        Cmd::ExportSmt { trs, opts, model } => {
            let trs = files.trs(&trs)?;
            let cfg = config(&opts);
            let outcome = search(&trs, &cfg);
            let constraints: Vec<(String, Constraint)> = stratum_constraints(&trs, &outcome);
            match model {
                None => {
                    let text = constraints
                        .iter()
                        .map(|(names, c)| format!("; stratum: {names}\n{}", export_smtlib(c)))
                        .collect::<Vec<_>>()
                        .join("(reset)\n");
                    Ok(Report {
                        text,
                        verdict: "exported".into(),
                        details: json!({
                            "strata": constraints.iter().map(|(n, c)| json!({
                                "symbols": n,
                                "smtlib": export_smtlib(c),
                            })).collect::<Vec<_>>()
                        }),
                        seed: Some(cfg.seed),
                        code: EXIT_OK,
                    })
                }
                Some(p) => {
                    let text = files.read(&p)?;
                    let m = parse_model(&text)
                        .map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
                    let all = Constraint::and(constraints.into_iter().map(|(_, c)| c));
                    let ok = all.holds(&m);
                    Ok(Report {
                        text: if ok {
                            "model satisfies the constraints\n".into()
                        } else {
                            "model violates the constraints\n".into()
                        },
                        verdict: if ok { "satisfied" } else { "violated" }.into(),
                        details: json!({ "model": m }),
                        seed: Some(cfg.seed),
                        code: if ok { EXIT_OK } else { EXIT_INCOMPATIBLE },
                    })
                }
            }
        }
    }
}

fn config(a: &SearchArgs) -> SearchConfig {
    SearchConfig {
        k_max: a.kmax as usize,
        coeff_bound: a.coeff_bound,
        strategy: match a.strategy {
            StrategyArg::Blind => StrategyKind::Blind,
            StrategyArg::Progressive => StrategyKind::Progressive,
            StrategyArg::Pattern => StrategyKind::Pattern,
        },
        seed: a.seed,
        time_budget: a.timeout.map(Duration::from_secs),
        ..SearchConfig::default()
    }
}

fn verdict_code(g: Global) -> i32 {
    match g {
        Global::Compatible => EXIT_OK,
        Global::Incompatible => EXIT_INCOMPATIBLE,
        Global::Unknown => EXIT_UNKNOWN,
    }
}

fn check_report(v: &Verdict) -> Report {
    let rules: Vec<Value> = v
        .rules
        .iter()
        .map(|r| {
            let (status, cex) = match &r.status {
                RuleStatus::Oriented => ("oriented", Value::Null),
                RuleStatus::Unknown => ("unknown", Value::Null),
                RuleStatus::CounterExample(env) => (
                    "counterexample",
                    env.iter().map(|(a, n)| (a.to_string(), json!(n))).collect(),
                ),
            };
            json!({"index": r.index + 1, "rule": r.text, "status": status, "counterexample": cex})
        })
        .collect();
    Report {
        text: explain(v),
        verdict: v.summary(),
        details: json!({"rules": rules, "warnings": v.warnings}),
        seed: None,
        code: verdict_code(v.global),
    }
}

fn stratum_names(trs: &Trs, syms: &[crate::syntax::SymId]) -> String {
    syms.iter()
        .map(|f| trs.sig.symbol(*f).name.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn stratum_constraints(trs: &Trs, o: &SearchOutcome) -> Vec<(String, Constraint)> {
    o.strata
        .iter()
        .filter_map(|s| {
            Some((
                stratum_names(trs, &s.symbols),
                s.final_constraint()?.clone(),
            ))
        })
        .collect()
}

fn write_smt(trs: &Trs, o: &SearchOutcome, dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    for (i, (names, c)) in stratum_constraints(trs, o).iter().enumerate() {
        let p = dir.join(format!("stratum-{}.smt2", i + 1));
        std::fs::write(&p, format!("; stratum: {names}\n{}", export_smtlib(c)))
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn search_report(
    trs: &Trs,
    o: &SearchOutcome,
    cfg: &SearchConfig,
    target: &Path,
) -> Result<Report, Failure> {
    let mut text = String::new();
    let mut strata = Vec::new();
    for (i, s) in o.strata.iter().enumerate() {
        let names = stratum_names(trs, &s.symbols);
        text.push_str(&format!("stratum {}: {names}\n", i + 1));
        let mut attempts = Vec::new();
        for a in &s.attempts {
            let k: Vec<String> =
                a.k.iter()
                    .map(|(s, w)| format!("{}={w}", trs.sig.sort_name(*s)))
                    .collect();
            let result = format!("{:?}", a.result);
            text.push_str(&format!("  {}  k[{}]  {result}\n", a.proposal, k.join(",")));
            attempts.push(json!({"proposal": a.proposal.to_string(), "k": k, "result": result}));
        }
        strata.push(json!({"symbols": names, "attempts": attempts}));
    }
    let (verdict, code, written) = match &o.answer {
        Answer::Yes(i) => {
            let body = i.emit(trs);
            std::fs::write(target, &body)
                .map_err(|e| Failure::Usage(format!("{}: {e}", target.display())))?;
            text.push_str(&format!(
                "YES\ninterpretation written to {}\n{body}",
                target.display()
            ));
            ("YES", EXIT_OK, Some(body))
        }
        Answer::Maybe { timeout } => {
            text.push_str(if *timeout {
                "MAYBE (time budget exhausted)\n"
            } else {
                "MAYBE\n"
            });
            ("MAYBE", EXIT_UNKNOWN, None)
        }
    };
    Ok(Report {
        text,
        verdict: verdict.into(),
        details: json!({
            "strata": strata,
            "model": o.model,
            "interpretation": written,
            "k_max": cfg.k_max,
            "coeff_bound": cfg.coeff_bound,
        }),
        seed: Some(cfg.seed),
        code,
    })
}

fn bound_report(trs: &Trs, interp: &SymbolicInterpretation, v: &Verdict) -> Report {
    let mut text = String::new();
    let mut symbols = Vec::new();
    for c in classify_interpretation(trs, interp) {
        text.push_str(&format!("{}: cost {}, size {}\n", c.name, c.cost, c.size));
        symbols.push(
            json!({"symbol": c.name, "cost": c.cost.to_string(), "size": c.size.to_string()}),
        );
    }
    let (verdict, code) = match irc_bound(trs, interp, v) {
        Ok(b) => {
            text.push_str(&format!("irc: {b}\n"));
            if b == IrcVerdict::ON {
                if let Some(c) = linear_constant(trs, interp) {
                    text.push_str(&format!("irc(n) <= {c} * n\n"));
                }
            }
            let code = if b == IrcVerdict::Inconclusive {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
            (b.to_string(), code)
        }
        Err(BoundError::PreconditionViolated) => {
            text.push_str(&format!("irc: no bound, {}\n", v.summary()));
            (v.summary(), verdict_code(v.global))
        }
        Err(e) => {
            text.push_str(&format!("irc: {e}\n"));
            ("error".into(), EXIT_UNKNOWN)
        }
    };
    Report {
        text,
        verdict,
        details: json!({"symbols": symbols, "compatibility": v.summary()}),
        seed: None,
        code,
    }
}
