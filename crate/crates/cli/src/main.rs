//! `z3flow`: batch front end over the z3flow library.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 class
//! violation. A path of `-` reads standard input.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use z3flow::classes::{check, ClassKind};
use z3flow::cuts::enumerate_cuts;
use z3flow::families::{gen, Family, FamilySpec};
use z3flow::reducer::{reduce_solve, Config, Outcome};
use z3flow::{format, oracle, Instance};

#[derive(Parser)]
#[command(name = "z3flow", version, about = "Valid mod-3 orientations of plane multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    /// Exact backtracking search.
    Oracle,
    /// Reduction steps down to two-vertex leaves, oracle at the leaves.
    Reduce,
    /// Reduction with the oracle on instances up to the budget.
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a valid instance.
    Validate { path: String },
    /// Find a valid orientation; prints `orient` lines.
    Solve {
        path: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: Engine,
        /// Vertex count at or below which the reducer hands over to the oracle.
        #[arg(long)]
        oracle_budget: Option<usize>,
        /// Print the reduction trace to standard error.
        #[arg(long)]
        trace: bool,
    },
    /// Run a class test with per-clause diagnostics.
    Class {
        path: String,
        /// One of DTS, 3DTS, RST, 3RST, FT.
        klass: String,
    },
    /// List edge cuts of at most `kmax` edges.
    Cuts {
        path: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Count valid orientations.
    Count {
        path: String,
        /// Largest number of free edges to enumerate.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Write a family instance.
    Gen {
        /// One of d5a, d5b, ts33a, ts33b, star.
        family: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        blob: u32,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check an orientation file against an instance.
    Verify { path: String, orientation: String },
}

struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn read(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Result<Instance, Failure> {
    format::parse(&read(path)?).map_err(|e| input(format!("{path}: {e}")))
}

fn run(cli: Cli, out: &mut String) -> Result<(), Failure> {
    use std::fmt::Write as _;
    match cli.command {
        Command::Validate { path } => {
            let inst = load(&path)?;
            let g = inst.graph();
            let (lhs, rhs) = g.euler();
            let sum: z3flow::Z3 = inst.prescription().values().sum();
            let _ = writeln!(out, "vertices {} edges {} faces {}", g.vertex_count(), g.edge_count(), g.face_count());
            let _ = writeln!(out, "euler {lhs} = {rhs}");
            let _ = writeln!(out, "prescription sum {}", sum.value());
            let marks: Vec<String> = inst.marks().iter().map(|(m, v)| format!("{m}={v}")).collect();
            let _ = writeln!(out, "marks {}", if marks.is_empty() { "none".to_string() } else { marks.join(" ") });
            let _ = writeln!(out, "unoriented {}", inst.unoriented_count());
            out.push_str("ok\n");
        }
        Command::Solve { path, engine, oracle_budget, trace } => {
            let inst = load(&path)?;
            let verdict = match engine {
                Engine::Oracle => match oracle::solve(&inst) {
                    oracle::Verdict::Sat(o) => Some(o),
                    oracle::Verdict::Unsat => None,
                },
                Engine::Reduce | Engine::Auto => {
                    let default = if matches!(engine, Engine::Reduce) { 2 } else { Config::default().oracle_vertex_budget };
                    let cfg = Config { oracle_vertex_budget: oracle_budget.unwrap_or(default), ..Config::default() };
                    let outcome = reduce_solve(&inst, &cfg);
                    if trace {
                        eprint!("{}", outcome.trace().dump());
                    }
                    match outcome {
                        Outcome::Sat(o, _) => Some(o),
                        Outcome::Unsat(_) => None,
                    }
                }
            };
            match verdict {
                Some(o) => out.push_str(&format::write_orientation(&inst, &o)),
                None => return Err(Failure { code: 1, message: "UNSAT".into() }),
            }
        }
        Command::Class { path, klass } => {
            let inst = load(&path)?;
            let klass = ClassKind::parse(&klass).ok_or_else(|| input(format!("unknown class `{klass}`")))?;
            let report = check(&inst, klass);
            for v in &report.violations {
                let _ = writeln!(out, "violation clause {}: {}", v.clause, v.witness);
            }
            if !report.pass {
                return Err(Failure { code: 3, message: format!("not a {klass} instance") });
            }
            let _ = writeln!(out, "{klass} pass");
        }
        Command::Cuts { path, kmax } => {
            let inst = load(&path)?;
            let g = inst.graph();
            for c in enumerate_cuts(g, kmax, 1) {
                let side: Vec<String> = c.side.iter().map(|v| v.to_string()).collect();
                let edges: Vec<String> = c.edges.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(out, "cut size={} side={} edges={}", c.size(), side.join(","), edges.join(","));
            }
        }
        Command::Count { path, budget } => {
            let inst = load(&path)?;
            let n = match budget {
                Some(b) => oracle::count_with_budget(&inst, b),
                None => oracle::count(&inst),
            }
            .map_err(input)?;
            let _ = writeln!(out, "{n}");
        }
        Command::Gen { family, k, blob, out: file } => {
            let family = Family::parse(&family).ok_or_else(|| input(format!("unknown family `{family}`")))?;
            let (inst, _) = gen(&FamilySpec { family, k, blob }).map_err(input)?;
            let text = format::write(&inst);
            match file {
                Some(p) => fs::write(&p, text).map_err(|e| input(format!("{}: {e}", p.display())))?,
                None => out.push_str(&text),
            }
        }
        Command::Verify { path, orientation } => {
            let inst = load(&path)?;
            let o = format::parse_orientation(&inst, &read(&orientation)?).map_err(|e| input(format!("{orientation}: {e}")))?;
            let report = inst.verify(&o).map_err(|e| Failure { code: 1, message: e.to_string() })?;
            for (v, r, p) in &report.offenders {
                let _ = writeln!(out, "vertex {v}: residual {} but prescription {}", r.balanced(), p.balanced());
            }
            if !report.is_valid() {
                return Err(Failure { code: 1, message: "invalid orientation".into() });
            }
            out.push_str("valid\n");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    let _ = io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
