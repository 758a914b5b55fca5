//! `elcompl`: complement, inspect and test Emerson-Lei automata.
//!
//! Exit codes: 0 success, 1 a checked property failed (the offending lasso
//! is printed), 2 usage or parse error, 3 macrostate budget exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use elcompl::hoa::{parse_hoa, print_hoa};
use elcompl::oracle::{accepts, is_empty, xor_suite, LassoWord};
use elcompl::pipeline::{dispatch, Backend, ComplementOptions, OutputForm};
use elcompl::random::{GenParams, RandomClass};
use elcompl::rundag::{build_rundag, check_labelling, export_dot, label_dag};
use elcompl::selftest::{run_selftest, SelftestConfig, Status};
use elcompl::transform::{product, ProductMode};
use elcompl::{Error, Tela, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "elcompl", version, about = "Complementation of transition-based Emerson-Lei automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complement an automaton and write the result as HOA.
    Complement {
        #[command(flatten)]
        input: Input,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        construction: Construction,
        /// Degeneralise the result into a Büchi automaton.
        #[arg(long)]
        to_ba: bool,
        /// Print the size report to stderr.
        #[arg(long)]
        report: bool,
    },
    /// Print the acceptance class and the derived condition data.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Decide whether the automaton accepts `prefix · period^ω`.
    Member {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        word: Word,
    },
    /// Check that `-c` complements `-i` on all short lassos, and that the two
    /// languages are disjoint.
    Check {
        #[command(flatten)]
        input: Input,
        /// The claimed complement.
        #[arg(short, long)]
        complement: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_u: usize,
        #[arg(long, default_value_t = 3)]
        max_v: usize,
    },
    /// Generate random automata, complement them and check the results.
    Selftest(SelftestArgs),
    /// Label the run DAG of an Inf-only automaton over a lasso.
    Rundag {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        word: Word,
        /// Write the labelled DAG in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Complement and print the size report only.
    Stats {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        construction: Construction,
        /// One JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Input {
    /// Input HOA file; `-` reads stdin.
    #[arg(short, long, default_value = "-")]
    input: PathBuf,
}

#[derive(Args)]
struct Word {
    /// Finite prefix, one letter per minterm: `a`, `b`, ...
    #[arg(long, default_value = "")]
    prefix: String,
    /// Non-empty period.
    #[arg(long)]
    period: String,
}

#[derive(Args)]
struct Construction {
    /// auto picks by class: Inf-only → rank-based, co-Büchi → breakpoint,
    /// Rabin → per-pair modular, anything else → modular over the DNF.
    #[arg(long, default_value = "auto")]
    backend: Backend,
    /// Maximal number of macrostates per construction.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Keep useless and bisimilar states in the result.
    #[arg(long)]
    no_reduce: bool,
}

impl Construction {
    fn options(&self, to_ba: bool) -> ComplementOptions {
        ComplementOptions {
            backend: self.backend,
            output: if to_ba { OutputForm::Ba } else { OutputForm::Gba },
            budget: self.budget,
            reduce: !self.no_reduce,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct SelftestArgs {
    /// Comma-separated classes (default: all).
    #[arg(long, value_delimiter = ',')]
    classes: Vec<RandomClass>,
    #[arg(long, default_value_t = 50)]
    count: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest number of states of a generated automaton.
    #[arg(long, default_value_t = 4)]
    max_states: usize,
    #[arg(long, default_value_t = 2)]
    max_u: usize,
    #[arg(long, default_value_t = 3)]
    max_v: usize,
    /// Worker threads (default: one per core).
    #[arg(long)]
    threads: Option<usize>,
    /// One JSON object per line.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    construction: Construction,
}

/// Exit status of a command that ran to completion.
struct Outcome {
    code: u8,
}

const OK: Outcome = Outcome { code: 0 };
const VIOLATION: Outcome = Outcome { code: 1 };

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        Error::Parse { .. }
        | Error::Unsupported { .. }
        | Error::Usage(_)
        | Error::UnknownSymbol(_)
        | Error::InvalidWord(_)
        | Error::AlphabetMismatch => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => ExitCode::from(out.code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read_automaton(path: &Path) -> elcompl::Result<Tela> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Usage(format!("reading {}: {e}", path.display())))?
    };
    parse_hoa(&text)
}

fn write_text(path: Option<&Path>, text: &str) -> elcompl::Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| Error::Usage(format!("writing {}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Usage(format!("writing stdout: {e}")))
        }
    }
}

fn run(cmd: Command) -> elcompl::Result<Outcome> {
    match cmd {
        Command::Complement { input, output, construction, to_ba, report } => {
            let a = read_automaton(&input.input)?;
            let (c, rep) = dispatch(&a, &construction.options(to_ba))?;
            write_text(output.as_deref(), &print_hoa(&c))?;
            if report {
                eprint!("{rep}");
            }
            Ok(OK)
        }
        Command::Classify { input } => {
            let a = read_automaton(&input.input)?;
            let alpha = a.acceptance();
            let k = a.num_colours();
            let mut text = format!("class: {}\nacceptance: {} {alpha}\n", alpha.classify(), k);
            let clauses = alpha.dnf();
            text.push_str(&format!("dnf clauses: {}\n", clauses.len()));
            let models = alpha.minimal_models(k);
            let listed: Vec<String> = models.iter().map(|m| m.to_string()).collect();
            text.push_str(&format!("minimal dual models: {}\n", if listed.is_empty() { "none".into() } else { listed.join(" ") }));
            write_text(None, &text)?;
            Ok(OK)
        }
        Command::Member { input, word } => {
            let a = read_automaton(&input.input)?;
            let w = LassoWord::parse(&a, &word.prefix, &word.period)?;
            let verdict = if accepts(&a, &w)? { "accepted" } else { "rejected" };
            write_text(None, &format!("{verdict}\n"))?;
            Ok(OK)
        }
        Command::Check { input, complement, max_u, max_v } => {
            let a = read_automaton(&input.input)?;
            let c = read_automaton(&complement)?;
            let xor = xor_suite(&a, &c, max_u, max_v)?;
            let disjoint = is_empty(&product(&a, &c, ProductMode::Reachable)?)?;
            let mut text = format!("checked {} lassos\n{} violations\n", xor.checked, xor.violations.len());
            for w in &xor.violations {
                text.push_str(&format!("violation: {w}\n"));
            }
            text.push_str(if disjoint { "disjoint: yes\n" } else { "disjoint: no\n" });
            write_text(None, &text)?;
            Ok(if xor.passed() && disjoint { OK } else { VIOLATION })
        }
        Command::Selftest(args) => selftest(args),
        Command::Rundag { input, word, dot } => {
            let a = read_automaton(&input.input)?;
            let w = LassoWord::parse(&a, &word.prefix, &word.period)?;
            let d = build_rundag(&a, &w)?;
            let lab = label_dag(&a, &d)?;
            let mut code = OK;
            let text = match &lab {
                None => "stuck: some run is accepting\n".to_string(),
                Some(l) => {
                    let bad = check_labelling(&a, &d, l);
                    let mut t = format!("labelled: {} nodes, max rank {}\n", d.node_count(), l.max_rank());
                    for b in &bad {
                        t.push_str(&format!("violation: {b}\n"));
                    }
                    if !bad.is_empty() {
                        code = VIOLATION;
                    }
                    t
                }
            };
            write_text(None, &text)?;
            if let Some(p) = dot {
                write_text(Some(&p), &export_dot(&a, &d, lab.as_ref()))?;
            }
            Ok(code)
        }
        Command::Stats { input, construction, json } => {
            let a = read_automaton(&input.input)?;
            let (_, rep) = dispatch(&a, &construction.options(false))?;
            let text = if json {
                serde_json::to_string(&rep).expect("reports serialise") + "\n"
            } else {
                rep.to_string()
            };
            write_text(None, &text)?;
            Ok(OK)
        }
    }
}

fn selftest(args: SelftestArgs) -> elcompl::Result<Outcome> {
    let cfg = SelftestConfig {
        classes: if args.classes.is_empty() { RandomClass::ALL.to_vec() } else { args.classes.clone() },
        count: args.count,
        seed: args.seed,
        params: GenParams { max_states: args.max_states, ..GenParams::default() },
        max_u: args.max_u,
        max_v: args.max_v,
        options: ComplementOptions { seed: args.seed, ..args.construction.options(false) },
    };
    let report = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?
            .install(|| run_selftest(&cfg))?,
        None => run_selftest(&cfg)?,
    };
    write_text(None, &if args.json { report.to_json_lines() } else { report.to_text() })?;
    Ok(if report.passed() {
        OK
    } else if report.records.iter().all(|r| matches!(r.status, Status::Ok | Status::Budget)) {
        Outcome { code: 3 }
    } else {
        VIOLATION
    })
}
