use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use regsolve::output::{match_json, solve_json};
use regsolve::problem_file::{parse_problem, Compiled};
use regsolve::scan_fs::scan_paths;
use regsolve::solver::{solve, SolverConfig, DEFAULT_SOLVER};
use regsolve_core::cegar::{Status, DEFAULT_REFINEMENT_LIMIT};
use regsolve_core::matcher::RegexValue;
use regsolve_core::model::UnrollConfig;
use regsolve_core::parse_pattern;
use regsolve_core::smtlib::SmtEmitter;

const EXIT_ERROR: u8 = 3;

/// Solve ES6 regex constraints with an SMT-LIB string solver.
#[derive(Parser)]
#[command(name = "regsolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a problem file. Exit 0 sat, 1 unsat, 2 unknown, 3 error.
    Solve {
        problem: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REFINEMENT_LIMIT)]
        refinement_limit: usize,
        /// Iterations unrolled for quantified backreferences.
        #[arg(long, default_value_t = 5)]
        unroll_bound: usize,
        #[arg(long, env = "REGSOLVE_SOLVER", default_value = DEFAULT_SOLVER)]
        solver_cmd: String,
        /// Seconds for the whole solve.
        #[arg(long, default_value_t = 30.0)]
        timeout: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the SMT-LIB script for a problem file without solving it.
    Compile {
        problem: PathBuf,
        #[arg(long, default_value_t = 5)]
        unroll_bound: usize,
    },
    /// Run `RegExp.prototype.exec`. Exit 0 on match, 1 otherwise.
    Match {
        pattern: String,
        input: String,
        #[arg(long, default_value = "")]
        flags: String,
        #[arg(long, default_value_t = 0)]
        last_index: usize,
    },
    /// Report regex feature usage in .js, .mjs and .cjs files.
    Scan {
        root: PathBuf,
        #[arg(long)]
        csv: bool,
    },
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_ERROR)
}

fn load(path: &PathBuf, unroll_bound: usize) -> Result<Compiled, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg = UnrollConfig { max_repeats: unroll_bound.max(1), ..UnrollConfig::default() };
    parse_problem(&text).and_then(|f| f.compile(&cfg)).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: Cmd) -> ExitCode {
    match cmd {
        Cmd::Solve { problem, refinement_limit, unroll_bound, solver_cmd, timeout, seed } => {
            let started = Instant::now();
            let compiled = match load(&problem, unroll_bound) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if !(timeout.is_finite() && timeout > 0.0) {
                return fail("--timeout must be a positive number of seconds");
            }
            let cfg = SolverConfig { command: solver_cmd, timeout: Duration::from_secs_f64(timeout), seed };
            let (result, solver_time) = match solve(&compiled.problem, refinement_limit, cfg) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            println!("{}", solve_json(&result, started.elapsed(), solver_time));
            ExitCode::from(match result.status {
                Status::Sat => 0,
                Status::Unsat => 1,
                Status::Unknown => 2,
            })
        }
        Cmd::Compile { problem, unroll_bound } => match load(&problem, unroll_bound) {
            Ok(c) => {
                println!("{}(check-sat)", SmtEmitter::new().problem(&c.problem));
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Cmd::Match { pattern, input, flags, last_index } => {
            let (ast, flags) = match parse_pattern(&pattern, &flags) {
                Ok(p) => p,
                Err(e) => return fail(format!("/{pattern}/: {e}")),
            };
            let mut re = RegexValue::new(ast, flags);
            re.last_index = last_index;
            match re.exec(&input) {
                Ok(m) => {
                    println!("{}", match_json(&m));
                    ExitCode::from(if m.matched { 0 } else { 1 })
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Scan { root, csv } => {
            if let Err(e) = std::fs::read_dir(&root) {
                return fail(format!("{}: {e}", root.display()));
            }
            let outcome = scan_paths(&[root]);
            for (path, e) in &outcome.errors {
                eprintln!("warning: {}: {e}", path.display());
            }
            if csv {
                print!("{}", outcome.report.to_csv());
            } else {
                print!("{}", outcome.report.to_text());
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
