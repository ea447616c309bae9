//! Bound-search driver: finds the minimal state bound, then descends on the
//! cycle bound, verifying every produced machine and collecting a report of
//! solved instances.

use std::time::Duration;

use thiserror::Error;

use crate::automata::{build_run_graph, run_graph_accepting, UniversalCoBuchiAutomaton};
use crate::cycles::{count_cycles_scc, CycleCount};
use crate::encode::{decode_machine, decode_witness, encode_bocy, encode_bs};
use crate::ltl::{LassoWord, SpecificationFile};
use crate::machine::MealyMachine;
use crate::solver::{SolveOutcome, SolverError, SolverPortfolio};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// State bound only.
    Bs,
    /// State bound plus cycle bound.
    Bocy,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Bs => "bs",
            Mode::Bocy => "bocy",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: Mode,
    /// Solve exactly this state bound instead of searching from 1.
    pub fixed_states: Option<usize>,
    /// Solve exactly this cycle bound instead of descending.
    pub fixed_cycles: Option<usize>,
    /// Largest state bound tried during the search.
    pub max_states: usize,
    pub cycle_cap: u64,
    /// Bisect the cycle bound instead of stepping down linearly.
    pub binary_descent: bool,
    pub spec_name: String,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Bs,
            fixed_states: None,
            fixed_cycles: None,
            max_states: 8,
            cycle_cap: crate::cycles::DEFAULT_CYCLE_CAP,
            binary_descent: false,
            spec_name: "spec".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowResult {
    Sat,
    Unsat,
    /// Refuted without solving: no total machine has zero cycles, and no
    /// machine exists with zero states.
    TrivialUnsat,
    Limit,
}

impl RowResult {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowResult::Sat => "SAT",
            RowResult::Unsat => "UNSAT",
            RowResult::TrivialUnsat => "UNSAT*",
            RowResult::Limit => "LIMIT",
        }
    }
}

/// One solved instance, mirroring the result-table layout: automaton size,
/// bounds, result, recounted cycles and wall time.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub spec: String,
    pub uca_states: usize,
    pub mode: Mode,
    pub n: usize,
    pub m_bound: Option<usize>,
    pub result: RowResult,
    /// Recounted with the cycle search, never copied from the bound.
    pub cycles: Option<CycleCount>,
    pub seconds: f64,
    pub backend: String,
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
}

impl RunReport {
    /// CSV rendering. `with_timing` controls the race-dependent columns
    /// (wall time and winning backend); without them the report is a pure
    /// function of the input.
    pub fn to_csv(&self, with_timing: bool) -> String {
        let mut out = String::from("spec,uca_states,mode,n,m_bound,result,cycles,time_s,backend\n");
        for row in &self.rows {
            let m_bound = row.m_bound.map_or(String::from("-"), |m| m.to_string());
            let cycles = row
                .cycles
                .as_ref()
                .map_or(String::from("-"), CycleCount::render);
            let (time, backend) = if with_timing {
                (format!("{:.3}", row.seconds), row.backend.as_str())
            } else {
                (String::from("-"), "-")
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.spec,
                row.uca_states,
                row.mode.as_str(),
                row.n,
                m_bound,
                row.result.as_str(),
                cycles,
                time,
                backend,
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchVerdict {
    Synthesized,
    /// The fixed bounds admit no machine.
    BoundsUnsat,
    /// No state bound up to the ceiling admits a machine; says nothing
    /// about larger bounds.
    CeilingReached,
    /// Every backend hit its resource limit on some instance.
    ResourceLimit,
}

pub struct SearchOutput {
    pub verdict: SearchVerdict,
    pub machine: Option<MealyMachine>,
    pub states: Option<usize>,
    pub cycles: Option<u64>,
    pub report: RunReport,
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("decoded machine failed verification: {0}")]
    Verification(String),
    #[error("cycle count of an intermediate machine exceeded the cap {0}")]
    CycleCapExceeded(u64),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Independent verdict on a machine: run-graph model check plus cycle
/// recount. Run on every machine before it leaves the pipeline.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub accepted: bool,
    pub counterexample: Option<LassoWord>,
    pub cycles: CycleCount,
}

pub fn verify(
    machine: &MealyMachine,
    a: &UniversalCoBuchiAutomaton,
    cycle_cap: u64,
) -> VerifyOutcome {
    let run_graph = build_run_graph(machine, a);
    let (accepted, counterexample) = match run_graph_accepting(&run_graph, machine) {
        Ok(()) => (true, None),
        Err(lasso) => (false, Some(lasso.word)),
    };
    let cycles = count_cycles_scc(&machine.abstract_graph(), cycle_cap).count;
    VerifyOutcome {
        accepted,
        counterexample,
        cycles,
    }
}

fn recount(machine: &MealyMachine, cap: u64) -> Result<u64, DriverError> {
    count_cycles_scc(&machine.abstract_graph(), cap)
        .count
        .exact()
        .ok_or(DriverError::CycleCapExceeded(cap))
}

struct Ctx<'a> {
    spec_name: String,
    uca: &'a UniversalCoBuchiAutomaton,
    signals: &'a crate::ltl::SignalSpace,
    portfolio: &'a SolverPortfolio,
    cap: u64,
    report: RunReport,
}

impl Ctx<'_> {
    fn row(
        &mut self,
        mode: Mode,
        n: usize,
        m: Option<usize>,
        result: RowResult,
        cycles: Option<CycleCount>,
        seconds: f64,
        backend: &str,
    ) {
        self.report.rows.push(ReportRow {
            spec: self.spec_name.clone(),
            uca_states: self.uca.num_states,
            mode,
            n,
            m_bound: m,
            result,
            cycles,
            seconds,
            backend: backend.to_string(),
        });
    }

    /// Solves the plain state-bound instance.
    fn solve_bs(&mut self, n: usize) -> Result<Option<MealyMachine>, DriverError> {
        let enc = encode_bs(self.uca, self.signals, n);
        let answer = self.portfolio.solve(&enc.cnf)?;
        match answer.outcome {
            SolveOutcome::Sat(model) => {
                let result = decode_machine(&enc, self.uca, &model)
                    .map_err(|e| DriverError::Verification(e.to_string()))?;
                let cycles = count_cycles_scc(&result.machine.abstract_graph(), self.cap).count;
                self.row(
                    Mode::Bs,
                    n,
                    None,
                    RowResult::Sat,
                    Some(cycles),
                    answer.wall.as_secs_f64(),
                    &answer.backend,
                );
                Ok(Some(result.machine))
            }
            SolveOutcome::Unsat => {
                self.row(
                    Mode::Bs,
                    n,
                    None,
                    RowResult::Unsat,
                    None,
                    answer.wall.as_secs_f64(),
                    &answer.backend,
                );
                Ok(None)
            }
            SolveOutcome::Limit(msg) => Err(DriverError::Internal(format!(
                "resource limit on the ({n}) instance: {msg}"
            ))),
        }
    }

    /// Solves the combined instance at `(n, m)`; a model is decoded to a
    /// machine, its witness is validated, and the recount is checked
    /// against the bound.
    fn solve_bocy(
        &mut self,
        n: usize,
        m: usize,
    ) -> Result<Option<(MealyMachine, u64)>, DriverError> {
        let enc = encode_bocy(self.uca, self.signals, n, m);
        let answer = self.portfolio.solve(&enc.cnf)?;
        match answer.outcome {
            SolveOutcome::Sat(model) => {
                let decoded = decode_witness(&enc, &model)
                    .map_err(|e| DriverError::Verification(e.to_string()))?;
                let machine = decoded.machine;
                // independent acceptance check before the machine is used
                if let Err(lasso) =
                    run_graph_accepting(&build_run_graph(&machine, self.uca), &machine)
                {
                    return Err(DriverError::Verification(format!(
                        "machine from the ({n},{m}) instance violates the \
                         specification on {}",
                        lasso.word.format(self.signals)
                    )));
                }
                let cycles = recount(&machine, self.cap)?;
                if cycles as usize > m {
                    return Err(DriverError::Internal(format!(
                        "machine decoded at cycle bound {m} recounts to {cycles}"
                    )));
                }
                if decoded.forest.total_red() < cycles as usize {
                    return Err(DriverError::Internal(format!(
                        "witness admits {} cycles but machine has {cycles}",
                        decoded.forest.total_red()
                    )));
                }
                self.row(
                    Mode::Bocy,
                    n,
                    Some(m),
                    RowResult::Sat,
                    Some(CycleCount::Exact(cycles)),
                    answer.wall.as_secs_f64(),
                    &answer.backend,
                );
                Ok(Some((machine, cycles)))
            }
            SolveOutcome::Unsat => {
                self.row(
                    Mode::Bocy,
                    n,
                    Some(m),
                    RowResult::Unsat,
                    None,
                    answer.wall.as_secs_f64(),
                    &answer.backend,
                );
                Ok(None)
            }
            SolveOutcome::Limit(msg) => Err(DriverError::Internal(format!(
                "resource limit on the ({n},{m}) instance: {msg}"
            ))),
        }
    }
}

/// Finds the minimal bounds for the given mode: the state bound grows from
/// 1 until satisfiable, then (in cycle mode) the cycle bound starts at the
/// cycle count of the found machine and descends until unsatisfiable.
/// Returns the last machine together with the report of solved instances,
/// including the unsatisfiable companion at bound minus one.
pub fn search_minimal(
    spec: &SpecificationFile,
    uca: &UniversalCoBuchiAutomaton,
    config: &SearchConfig,
    portfolio: &SolverPortfolio,
) -> Result<SearchOutput, DriverError> {
    let mut ctx = Ctx {
        spec_name: config.spec_name.clone(),
        uca,
        signals: &spec.signals,
        portfolio,
        cap: config.cycle_cap,
        report: RunReport::default(),
    };

    // state bound: if n = 0 is conceptually requested, it is refuted
    // without solving (no machine has zero states)
    let mut bs_machine = None;
    let mut found_n = None;
    let candidates: Vec<usize> = match config.fixed_states {
        Some(n) => vec![n],
        None => (1..=config.max_states).collect(),
    };
    for n in candidates {
        if let Some(machine) = ctx.solve_bs(n)? {
            bs_machine = Some(machine);
            found_n = Some(n);
            break;
        }
    }
    let Some(n) = found_n else {
        let verdict = if config.fixed_states.is_some() {
            SearchVerdict::BoundsUnsat
        } else {
            SearchVerdict::CeilingReached
        };
        return Ok(SearchOutput {
            verdict,
            machine: None,
            states: None,
            cycles: None,
            report: ctx.report,
        });
    };
    let bs_machine = bs_machine.unwrap();

    if config.mode == Mode::Bs {
        let cycles = recount(&bs_machine, config.cycle_cap).ok();
        return Ok(SearchOutput {
            verdict: SearchVerdict::Synthesized,
            machine: Some(bs_machine),
            states: Some(n),
            cycles,
            report: ctx.report,
        });
    }

    // cycle bound
    if let Some(m) = config.fixed_cycles {
        if m == 0 {
            // every total machine closes at least one cycle
            ctx.row(Mode::Bocy, n, Some(0), RowResult::TrivialUnsat, None, 0.0, "-");
            return Ok(SearchOutput {
                verdict: SearchVerdict::BoundsUnsat,
                machine: None,
                states: Some(n),
                cycles: None,
                report: ctx.report,
            });
        }
        return match ctx.solve_bocy(n, m)? {
            Some((machine, cycles)) => Ok(SearchOutput {
                verdict: SearchVerdict::Synthesized,
                machine: Some(machine),
                states: Some(n),
                cycles: Some(cycles),
                report: ctx.report,
            }),
            None => Ok(SearchOutput {
                verdict: SearchVerdict::BoundsUnsat,
                machine: None,
                states: Some(n),
                cycles: None,
                report: ctx.report,
            }),
        };
    }

    let m0 = recount(&bs_machine, config.cycle_cap)? as usize;
    let mut best: (MealyMachine, usize) = (bs_machine, m0);
    let mut best_bound_solved = false; // was (n, best.1) itself solved SAT?

    if config.binary_descent {
        let mut lo = 1usize;
        while lo < best.1 {
            let mid = (lo + best.1 - 1) / 2;
            match ctx.solve_bocy(n, mid)? {
                Some((machine, cycles)) => {
                    best_bound_solved = cycles as usize == mid;
                    best = (machine, cycles as usize);
                }
                None => lo = mid + 1,
            }
        }
    } else {
        loop {
            let target = best.1.saturating_sub(1);
            if target == 0 {
                break;
            }
            match ctx.solve_bocy(n, target)? {
                Some((machine, cycles)) => {
                    best_bound_solved = cycles as usize == target;
                    best = (machine, cycles as usize);
                }
                None => break,
            }
        }
    }

    // make sure the reported pair contains the satisfiable instance at the
    // minimal bound itself (descent may have jumped past it). The witness
    // pool holds m copies per vertex, so a bound equal to the cycle count
    // can still be unsatisfiable when some unfolding needs more copies of
    // one vertex than there are cycles; the recount of the machine in hand
    // stays authoritative in that case.
    if !best_bound_solved {
        if let Some((machine, cycles)) = ctx.solve_bocy(n, best.1)? {
            best = (machine, cycles as usize);
        }
    }
    if best.1 == 1 {
        // the companion at bound zero is refuted without solving
        ctx.row(Mode::Bocy, n, Some(0), RowResult::TrivialUnsat, None, 0.0, "-");
    }

    let cycles = best.1 as u64;
    Ok(SearchOutput {
        verdict: SearchVerdict::Synthesized,
        machine: Some(best.0),
        states: Some(n),
        cycles: Some(cycles),
        report: ctx.report,
    })
}

/// Convenience: default portfolio with the given timeout.
pub fn default_portfolio(timeout_secs: u64) -> SolverPortfolio {
    SolverPortfolio::default_portfolio(Duration::from_secs(timeout_secs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ltl_to_uca;
    use crate::ltl::parse_spec;

    fn run(spec_text: &str, mode: Mode) -> SearchOutput {
        let spec = parse_spec(spec_text).unwrap();
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode,
            max_states: 4,
            spec_name: "test".to_string(),
            ..SearchConfig::default()
        };
        let portfolio = default_portfolio(60);
        search_minimal(&spec, &uca, &config, &portfolio).unwrap()
    }

    #[test]
    fn globally_b_minimal_bounds() {
        let out = run("INPUTS:\nOUTPUTS: b\nSPEC: G b", Mode::Bocy);
        assert_eq!(out.verdict, SearchVerdict::Synthesized);
        assert_eq!(out.states, Some(1));
        assert_eq!(out.cycles, Some(1));
        // the zero-cycle companion is refuted trivially
        assert!(out
            .report
            .rows
            .iter()
            .any(|r| r.m_bound == Some(0) && r.result == RowResult::TrivialUnsat));
    }

    #[test]
    fn contradiction_reaches_ceiling() {
        let spec = parse_spec("INPUTS:\nOUTPUTS: b\nSPEC: b && !b").unwrap();
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode: Mode::Bs,
            max_states: 3,
            spec_name: "contradiction".to_string(),
            ..SearchConfig::default()
        };
        let portfolio = default_portfolio(60);
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        assert_eq!(out.verdict, SearchVerdict::CeilingReached);
        assert_eq!(out.report.rows.len(), 3);
        assert!(out
            .report
            .rows
            .iter()
            .all(|r| r.result == RowResult::Unsat));
    }

    #[test]
    fn iff_spec_minimal_cycles() {
        let out = run("INPUTS: a\nOUTPUTS: b\nSPEC: G (a <-> X b)", Mode::Bocy);
        assert_eq!(out.verdict, SearchVerdict::Synthesized);
        assert_eq!(out.states, Some(2));
        assert_eq!(out.cycles, Some(3));
        // SAT at 3 and UNSAT at 2 are both in the report
        assert!(out.report.rows.iter().any(|r| r.mode == Mode::Bocy
            && r.m_bound == Some(3)
            && r.result == RowResult::Sat));
        assert!(out.report.rows.iter().any(|r| r.mode == Mode::Bocy
            && r.m_bound == Some(2)
            && r.result == RowResult::Unsat));
    }

    #[test]
    fn fixed_bounds_unsat_verdict() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a <-> X b)").unwrap();
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode: Mode::Bocy,
            fixed_states: Some(2),
            fixed_cycles: Some(2),
            spec_name: "fixed".to_string(),
            ..SearchConfig::default()
        };
        let portfolio = default_portfolio(60);
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        assert_eq!(out.verdict, SearchVerdict::BoundsUnsat);
    }

    #[test]
    fn binary_descent_agrees_with_linear() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a <-> X b)").unwrap();
        let uca = ltl_to_uca(&spec);
        let portfolio = default_portfolio(60);
        let mut outputs = Vec::new();
        for binary in [false, true] {
            let config = SearchConfig {
                mode: Mode::Bocy,
                binary_descent: binary,
                spec_name: "descent".to_string(),
                ..SearchConfig::default()
            };
            outputs.push(search_minimal(&spec, &uca, &config, &portfolio).unwrap());
        }
        assert_eq!(outputs[0].cycles, outputs[1].cycles);
        assert_eq!(outputs[0].states, outputs[1].states);
    }

    #[test]
    fn verify_catches_output_flip() {
        let spec = parse_spec("INPUTS:\nOUTPUTS: b\nSPEC: G b").unwrap();
        let uca = ltl_to_uca(&spec);
        let out = run("INPUTS:\nOUTPUTS: b\nSPEC: G b", Mode::Bs);
        let machine = out.machine.unwrap();
        assert!(verify(&machine, &uca, 1000).accepted);

        // flip the output bit of the single state
        let b = spec.signals.id_of("b").unwrap();
        let corrupted = MealyMachine::new(
            spec.signals.clone(),
            1,
            0,
            vec![vec![0]],
            vec![vec![machine.output(0, 0) ^ (1 << b)]],
        )
        .unwrap();
        let verdict = verify(&corrupted, &uca, 1000);
        assert!(!verdict.accepted);
        let lasso = verdict.counterexample.unwrap();
        assert!(!crate::ltl::evaluate(&spec.formula, &lasso, 0));
    }

    #[test]
    fn report_csv_shape() {
        let out = run("INPUTS:\nOUTPUTS: b\nSPEC: G b", Mode::Bocy);
        let csv = out.report.to_csv(false);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "spec,uca_states,mode,n,m_bound,result,cycles,time_s,backend"
        );
        assert!(csv.lines().count() >= 3);
        // deterministic without times
        let again = run("INPUTS:\nOUTPUTS: b\nSPEC: G b", Mode::Bocy);
        assert_eq!(csv, again.report.to_csv(false));
    }
}
