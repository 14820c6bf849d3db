//! An SMT-LIB solver running as a child process.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use regsolve_core::cegar::{cegar_solve, Backend, SolveResult, SolverAnswer};
use regsolve_core::ir::{ConstraintProblem, Formula, VarRef};
use regsolve_core::smtlib::{get_value_command, parse_model, SmtEmitter, SmtParseError};

pub const DEFAULT_SOLVER: &str = "z3 -in -smt2";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("cannot start solver `{command}`: {source}")]
    Spawn { command: String, source: std::io::Error },
    #[error("empty solver command")]
    EmptyCommand,
    #[error("solver I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver exited unexpectedly")]
    Crashed,
    #[error("solver reported: {0}")]
    Protocol(String),
    #[error("cannot read solver model: {0}")]
    Model(#[from] SmtParseError),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Program and arguments, split on whitespace.
    pub command: String,
    /// Budget for the whole solve, refinements included.
    pub timeout: Duration,
    pub seed: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { command: DEFAULT_SOLVER.into(), timeout: DEFAULT_TIMEOUT, seed: None }
    }
}

struct Session {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl Drop for Session {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Incremental solver process: the problem is sent once and refinement
/// clauses are appended as further assertions.
pub struct ProcessSolver {
    cfg: SolverConfig,
    session: Option<Session>,
    emitter: SmtEmitter,
    vars: Vec<VarRef>,
    deadline: Instant,
    /// Time spent waiting on the solver.
    pub solver_time: Duration,
    /// Every command sent, for diagnostics.
    pub transcript: String,
}

impl ProcessSolver {
    pub fn new(cfg: SolverConfig) -> ProcessSolver {
        let deadline = Instant::now() + cfg.timeout;
        ProcessSolver { cfg, session: None, emitter: SmtEmitter::new(), vars: Vec::new(), deadline, solver_time: Duration::ZERO, transcript: String::new() }
    }

    fn spawn(&self) -> Result<Session, SolverError> {
        let mut words = self.cfg.command.split_whitespace();
        let program = words.next().ok_or(SolverError::EmptyCommand)?;
        let mut child = Command::new(program)
            .args(words)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolverError::Spawn { command: self.cfg.command.clone(), source })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Session { child, stdin, lines })
    }

    fn send(&mut self, text: &str) -> Result<(), SolverError> {
        self.transcript.push_str(text);
        let s = self.session.as_mut().ok_or(SolverError::Crashed)?;
        s.stdin.write_all(text.as_bytes())?;
        s.stdin.flush()?;
        Ok(())
    }

    /// Next output line, or `None` when the deadline passes.
    fn line(&mut self) -> Result<Option<String>, SolverError> {
        let s = self.session.as_mut().ok_or(SolverError::Crashed)?;
        let now = Instant::now();
        let left = self.deadline.saturating_duration_since(now);
        let got = s.lines.recv_timeout(left);
        self.solver_time += now.elapsed();
        match got {
            Ok(l) => Ok(Some(l)),
            Err(RecvTimeoutError::Timeout) => Ok(None),
            Err(RecvTimeoutError::Disconnected) => Err(SolverError::Crashed),
        }
    }

    fn timed_out(&mut self) -> SolverAnswer {
        self.session = None;
        SolverAnswer::Unknown(format!("solver timeout after {:?}", self.cfg.timeout))
    }

    fn check(&mut self) -> Result<SolverAnswer, SolverError> {
        self.send("(check-sat)\n")?;
        let verdict = loop {
            let Some(line) = self.line()? else {
                return Ok(self.timed_out());
            };
            match line.trim() {
                "" => continue,
                "sat" => break true,
                "unsat" => return Ok(SolverAnswer::Unsat),
                "unknown" => return Ok(SolverAnswer::Unknown("solver returned unknown".into())),
                other => return Err(SolverError::Protocol(other.to_string())),
            }
        };
        debug_assert!(verdict);
        if self.vars.is_empty() {
            return Ok(SolverAnswer::Sat(Default::default()));
        }
        let cmd = get_value_command(&self.vars);
        self.send(&cmd)?;
        let mut response = String::new();
        let mut depth = 0i64;
        let mut in_string = false;
        loop {
            let Some(line) = self.line()? else {
                return Ok(self.timed_out());
            };
            if response.is_empty() && line.trim_start().starts_with("(error") {
                return Err(SolverError::Protocol(line));
            }
            for c in line.chars() {
                match c {
                    '"' => in_string = !in_string,
                    '(' if !in_string => depth += 1,
                    ')' if !in_string => depth -= 1,
                    _ => {}
                }
            }
            response.push_str(&line);
            response.push('\n');
            if depth <= 0 && !in_string && response.contains('(') {
                break;
            }
        }
        Ok(SolverAnswer::Sat(parse_model(&response, &self.vars)?))
    }
}

impl Backend for ProcessSolver {
    type Error = SolverError;

    fn start(&mut self, problem: &ConstraintProblem) -> Result<SolverAnswer, SolverError> {
        self.session = Some(self.spawn()?);
        self.deadline = Instant::now() + self.cfg.timeout;
        self.emitter = SmtEmitter::new();
        self.vars = problem.all_vars().into_iter().collect();
        let mut script = String::new();
        if let Some(seed) = self.cfg.seed {
            script.push_str(&format!("(set-option :random-seed {seed})\n"));
        }
        script.push_str(&self.emitter.problem(problem));
        self.send(&script)?;
        self.check()
    }

    fn refine(&mut self, clauses: &[Formula]) -> Result<SolverAnswer, SolverError> {
        if self.session.is_none() {
            return Ok(SolverAnswer::Unknown("solver session ended".into()));
        }
        let text = self.emitter.assertions(clauses);
        self.send(&text)?;
        self.check()
    }
}

/// Runs the refinement loop against a fresh solver process.
pub fn solve(problem: &ConstraintProblem, limit: usize, cfg: SolverConfig) -> Result<(SolveResult, Duration), SolverError> {
    let mut solver = ProcessSolver::new(cfg);
    let r = cegar_solve(problem, &mut solver, limit)?;
    Ok((r, solver.solver_time))
}
