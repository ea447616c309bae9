//! SAT solver backends and the portfolio runner.
//!
//! Backends implement one contract: given a CNF instance, answer SAT with a
//! total model, UNSAT, or a resource limit. The portfolio launches every
//! configured backend concurrently and takes the first definitive answer;
//! when several answers are available at once the first registered backend
//! wins, and any disagreement is reported as a fatal error.

use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cnf::{CnfInstance, Lit, Model};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Model),
    Unsat,
    /// Timeout, memory, or an enforced backend limit.
    Limit(String),
}

impl SolveOutcome {
    pub fn is_definitive(&self) -> bool {
        !matches!(self, SolveOutcome::Limit(_))
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("backends disagree on {instance}: {a} says {ra}, {b} says {rb}")]
    Disagreement {
        instance: String,
        a: String,
        ra: &'static str,
        b: String,
        rb: &'static str,
    },
    #[error("no solver backend configured")]
    NoBackends,
    #[error("backend {0} returned a model that does not satisfy the instance")]
    BadModel(String),
}

pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, cnf: &CnfInstance, timeout: Duration) -> SolveOutcome;
}

// ---------------------------------------------------------------------------
// in-process CDCL backends
// ---------------------------------------------------------------------------

/// CDCL backend on the splr solver.
pub struct SplrBackend;

impl SolverBackend for SplrBackend {
    fn name(&self) -> &str {
        "splr"
    }

    fn solve(&self, cnf: &CnfInstance, timeout: Duration) -> SolveOutcome {
        use splr::{Certificate, Config, SolveIF, Solver, SolverError as SpErr};
        if cnf.clauses().iter().any(|c| c.is_empty()) {
            return SolveOutcome::Unsat;
        }
        let config = Config {
            c_timeout: timeout.as_secs_f64(),
            quiet_mode: true,
            ..Config::default()
        };
        let mut solver = match Solver::try_from((config, cnf.clauses())) {
            Ok(s) => s,
            Err(Ok(Certificate::UNSAT)) => return SolveOutcome::Unsat,
            Err(Ok(Certificate::SAT(lits))) => {
                return SolveOutcome::Sat(Model::from_lits(cnf.num_vars(), lits))
            }
            Err(Err(SpErr::EmptyClause | SpErr::Inconsistent | SpErr::RootLevelConflict(_))) => {
                return SolveOutcome::Unsat
            }
            Err(Err(e)) => return SolveOutcome::Limit(format!("splr setup: {e:?}")),
        };
        match solver.solve() {
            Ok(Certificate::SAT(lits)) => {
                SolveOutcome::Sat(Model::from_lits(cnf.num_vars(), lits))
            }
            Ok(Certificate::UNSAT) => SolveOutcome::Unsat,
            Err(SpErr::EmptyClause | SpErr::RootLevelConflict(_) | SpErr::Inconsistent) => {
                SolveOutcome::Unsat
            }
            Err(SpErr::TimeOut) => SolveOutcome::Limit("splr timeout".to_string()),
            Err(e) => SolveOutcome::Limit(format!("splr: {e:?}")),
        }
    }
}

/// CDCL backend on the varisat solver.
pub struct VarisatBackend;

impl SolverBackend for VarisatBackend {
    fn name(&self) -> &str {
        "varisat"
    }

    fn solve(&self, cnf: &CnfInstance, _timeout: Duration) -> SolveOutcome {
        use varisat::{ExtendFormula, Solver};
        let mut solver = Solver::new();
        for clause in cnf.clauses() {
            let lits: Vec<varisat::Lit> = clause
                .iter()
                .map(|&l| varisat::Lit::from_dimacs(l as isize))
                .collect();
            solver.add_clause(&lits);
        }
        match solver.solve() {
            Ok(true) => {
                let lits: Vec<Lit> = solver
                    .model()
                    .unwrap_or_default()
                    .into_iter()
                    .map(|l| l.to_dimacs() as Lit)
                    .collect();
                SolveOutcome::Sat(Model::from_lits(cnf.num_vars(), lits))
            }
            Ok(false) => SolveOutcome::Unsat,
            Err(e) => SolveOutcome::Limit(format!("varisat: {e}")),
        }
    }
}

/// Naive DPLL with unit propagation. Only usable on instances of at most 60
/// variables; larger inputs answer with a resource limit. Exists so the
/// pipeline remains testable without any CDCL library or external process.
pub struct DpllBackend;

pub const DPLL_VAR_LIMIT: usize = 60;

impl SolverBackend for DpllBackend {
    fn name(&self) -> &str {
        "dpll"
    }

    fn solve(&self, cnf: &CnfInstance, timeout: Duration) -> SolveOutcome {
        if cnf.num_vars() > DPLL_VAR_LIMIT {
            return SolveOutcome::Limit(format!(
                "dpll refuses instances over {DPLL_VAR_LIMIT} variables"
            ));
        }
        let deadline = Instant::now() + timeout;
        let mut assignment: Vec<Option<bool>> = vec![None; cnf.num_vars() + 1];
        match dpll(cnf.clauses(), &mut assignment, &deadline) {
            Some(true) => {
                let trues = (1..=cnf.num_vars() as u32).filter(|&v| assignment[v as usize] == Some(true));
                SolveOutcome::Sat(Model::from_true_vars(cnf.num_vars(), trues))
            }
            Some(false) => SolveOutcome::Unsat,
            None => SolveOutcome::Limit("dpll timeout".to_string()),
        }
    }
}

fn dpll(clauses: &[Vec<Lit>], assignment: &mut Vec<Option<bool>>, deadline: &Instant) -> Option<bool> {
    if Instant::now() > *deadline {
        return None;
    }
    // unit propagation to fixpoint
    let mut trail: Vec<u32> = Vec::new();
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned: Option<Lit> = None;
            let mut satisfied = false;
            let mut open = 0;
            for &l in clause {
                match assignment[l.unsigned_abs() as usize] {
                    Some(v) if v == (l > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => {
                    for v in trail {
                        assignment[v as usize] = None;
                    }
                    return Some(false);
                }
                1 => {
                    let l = unassigned.unwrap();
                    assignment[l.unsigned_abs() as usize] = Some(l > 0);
                    trail.push(l.unsigned_abs());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = (1..assignment.len()).find(|&v| assignment[v].is_none());
    let Some(v) = branch else {
        return Some(true);
    };
    for value in [true, false] {
        assignment[v] = Some(value);
        match dpll(clauses, assignment, deadline) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => {
                assignment[v] = None;
                for w in trail {
                    assignment[w as usize] = None;
                }
                return None;
            }
        }
    }
    assignment[v] = None;
    for w in trail {
        assignment[w as usize] = None;
    }
    Some(false)
}

// ---------------------------------------------------------------------------
// external process backend
// ---------------------------------------------------------------------------

/// Runs an external solver command with DIMACS on stdin, expecting the
/// conventional `s SATISFIABLE`/`s UNSATISFIABLE` plus `v` lines on stdout
/// (a bare `SAT`/`UNSAT` first line is accepted too). The command is
/// interpreted by `sh -c`.
pub struct ExternalBackend {
    pub command: String,
}

impl ExternalBackend {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalBackend {
            command: command.into(),
        }
    }
}

impl SolverBackend for ExternalBackend {
    fn name(&self) -> &str {
        &self.command
    }

    fn solve(&self, cnf: &CnfInstance, timeout: Duration) -> SolveOutcome {
        use std::io::Write;
        let mut child = match Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
        {
            Ok(c) => c,
            Err(e) => return SolveOutcome::Limit(format!("spawn `{}`: {e}", self.command)),
        };
        let dimacs = cnf.to_dimacs();
        if let Some(mut stdin) = child.stdin.take() {
            // the solver may exit before reading everything; ignore EPIPE
            let _ = stdin.write_all(dimacs.as_bytes());
        }
        let deadline = Instant::now() + timeout;
        loop {
            match child.try_wait() {
                Ok(Some(_)) => break,
                Ok(None) => {
                    if Instant::now() > deadline {
                        let _ = child.kill();
                        let _ = child.wait();
                        return SolveOutcome::Limit(format!("`{}` timed out", self.command));
                    }
                    thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return SolveOutcome::Limit(format!("wait `{}`: {e}", self.command)),
            }
        }
        let output = match child.wait_with_output() {
            Ok(o) => o,
            Err(e) => return SolveOutcome::Limit(format!("output `{}`: {e}", self.command)),
        };
        parse_solver_output(&String::from_utf8_lossy(&output.stdout), cnf.num_vars())
    }
}

fn parse_solver_output(stdout: &str, num_vars: usize) -> SolveOutcome {
    let mut answer: Option<bool> = None;
    let mut lits: Vec<Lit> = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => answer = Some(true),
                "UNSATISFIABLE" => answer = Some(false),
                _ => {}
            }
        } else if line == "SAT" || line == "SATISFIABLE" {
            answer = Some(true);
        } else if line == "UNSAT" || line == "UNSATISFIABLE" {
            answer = Some(false);
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                if let Ok(l) = tok.parse::<Lit>() {
                    if l != 0 {
                        lits.push(l);
                    }
                }
            }
        } else if answer == Some(true)
            && !line.is_empty()
            && line
                .split_whitespace()
                .all(|t| t.parse::<Lit>().is_ok())
        {
            // minisat-style model line without the `v ` prefix
            for tok in line.split_whitespace() {
                if let Ok(l) = tok.parse::<Lit>() {
                    if l != 0 {
                        lits.push(l);
                    }
                }
            }
        }
    }
    match answer {
        Some(true) => SolveOutcome::Sat(Model::from_lits(num_vars, lits)),
        Some(false) => SolveOutcome::Unsat,
        None => SolveOutcome::Limit("unrecognized solver output".to_string()),
    }
}

// ---------------------------------------------------------------------------
// portfolio
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PortfolioAnswer {
    pub outcome: SolveOutcome,
    pub backend: String,
    pub wall: Duration,
}

pub struct SolverPortfolio {
    backends: Vec<Arc<dyn SolverBackend>>,
    pub timeout: Duration,
}

/// Environment variable holding `;`-separated external solver commands used
/// as the default backend list.
pub const SOLVER_ENV: &str = "SYNTH_SOLVERS";

impl SolverPortfolio {
    pub fn new(backends: Vec<Arc<dyn SolverBackend>>, timeout: Duration) -> Self {
        SolverPortfolio { backends, timeout }
    }

    /// Default portfolio: external commands from `SYNTH_SOLVERS` when set,
    /// otherwise the two in-process CDCL backends.
    pub fn default_portfolio(timeout: Duration) -> Self {
        if let Ok(spec) = std::env::var(SOLVER_ENV) {
            let backends: Vec<Arc<dyn SolverBackend>> = spec
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|cmd| Arc::new(ExternalBackend::new(cmd)) as Arc<dyn SolverBackend>)
                .collect();
            if !backends.is_empty() {
                return SolverPortfolio::new(backends, timeout);
            }
        }
        SolverPortfolio::new(
            vec![Arc::new(SplrBackend), Arc::new(VarisatBackend)],
            timeout,
        )
    }

    pub fn backend_names(&self) -> Vec<String> {
        self.backends.iter().map(|b| b.name().to_string()).collect()
    }

    /// Launches every backend concurrently and returns the first definitive
    /// answer (ties resolved toward the first registered backend). A SAT
    /// model is re-checked against the instance before being accepted.
    pub fn solve(&self, cnf: &CnfInstance) -> Result<PortfolioAnswer, SolverError> {
        if self.backends.is_empty() {
            return Err(SolverError::NoBackends);
        }
        let started = Instant::now();
        let (tx, rx) = mpsc::channel::<(usize, SolveOutcome)>();
        let cnf = Arc::new(cnf.clone());
        for (i, backend) in self.backends.iter().enumerate() {
            let tx = tx.clone();
            let backend = Arc::clone(backend);
            let cnf = Arc::clone(&cnf);
            let timeout = self.timeout;
            thread::spawn(move || {
                let outcome = backend.solve(&cnf, timeout);
                let _ = tx.send((i, outcome));
            });
        }
        drop(tx);

        let mut answers: Vec<Option<SolveOutcome>> = vec![None; self.backends.len()];
        let mut first: Option<usize> = None;
        let deadline = started + self.timeout + Duration::from_millis(200);
        while first.is_none() {
            let remaining = deadline.saturating_duration_since(Instant::now());
            match rx.recv_timeout(remaining.max(Duration::from_millis(1))) {
                Ok((i, outcome)) => {
                    let definitive = outcome.is_definitive();
                    answers[i] = Some(outcome);
                    if definitive {
                        first = Some(i);
                    } else if answers.iter().all(|a| a.is_some()) {
                        break;
                    }
                }
                Err(_) => break,
            }
        }
        // drain answers that are already available to honor registration
        // order on ties and to detect disagreements
        while let Ok((i, outcome)) = rx.try_recv() {
            answers[i] = Some(outcome);
        }
        let winner = (0..self.backends.len())
            .find(|&i| answers[i].as_ref().is_some_and(SolveOutcome::is_definitive));
        let Some(w) = winner else {
            return Ok(PortfolioAnswer {
                outcome: SolveOutcome::Limit("all backends hit their limits".to_string()),
                backend: "portfolio".to_string(),
                wall: started.elapsed(),
            });
        };
        // all definitive answers must agree
        for i in 0..self.backends.len() {
            if i == w {
                continue;
            }
            if let Some(other) = &answers[i] {
                let conflicting = matches!(
                    (&answers[w], other),
                    (Some(SolveOutcome::Sat(_)), SolveOutcome::Unsat)
                        | (Some(SolveOutcome::Unsat), SolveOutcome::Sat(_))
                );
                if conflicting {
                    return Err(SolverError::Disagreement {
                        instance: format!("{} vars", cnf.num_vars()),
                        a: self.backends[w].name().to_string(),
                        ra: outcome_name(answers[w].as_ref().unwrap()),
                        b: self.backends[i].name().to_string(),
                        rb: outcome_name(other),
                    });
                }
            }
        }
        let outcome = answers[w].clone().unwrap();
        if let SolveOutcome::Sat(model) = &outcome {
            if !model.satisfies(&cnf) {
                return Err(SolverError::BadModel(
                    self.backends[w].name().to_string(),
                ));
            }
        }
        Ok(PortfolioAnswer {
            outcome,
            backend: self.backends[w].name().to_string(),
            wall: started.elapsed(),
        })
    }

    /// Runs every backend to completion sequentially. Test helper for the
    /// agreement checks.
    pub fn solve_with_all(&self, cnf: &CnfInstance) -> Vec<(String, SolveOutcome)> {
        self.backends
            .iter()
            .map(|b| (b.name().to_string(), b.solve(cnf, self.timeout)))
            .collect()
    }
}

fn outcome_name(o: &SolveOutcome) -> &'static str {
    match o {
        SolveOutcome::Sat(_) => "SAT",
        SolveOutcome::Unsat => "UNSAT",
        SolveOutcome::Limit(_) => "LIMIT",
    }
}
