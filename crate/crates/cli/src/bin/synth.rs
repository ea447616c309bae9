//! Command-line synthesizer: reads a specification file, searches for a
//! machine within the requested bounds, verifies it, and prints it.
//!
//! Exit codes: 0 synthesized, 1 bounds unsatisfiable, 2 ceiling or resource
//! limit reached, 3 input error, 4 internal verification failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use synth_core::automata::ltl_to_uca;
use synth_core::hoa::import_hoa;
use synth_core::ltl::parse_spec;
use synth_core::search::{search_minimal, verify, Mode, SearchConfig, SearchVerdict};
use synth_core::solver::{ExternalBackend, SolverBackend, SolverPortfolio};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CliMode {
    Bs,
    Bocy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Text,
    Dot,
}

#[derive(Parser, Debug)]
#[command(
    name = "synth",
    about = "Bounded-state / bounded-cycle reactive synthesis from LTL"
)]
struct Cli {
    /// Specification file (INPUTS:/OUTPUTS:/SPEC: format).
    spec: String,

    /// Synthesis mode: state bound only, or state and cycle bounds.
    #[arg(long, value_enum, default_value = "bocy")]
    mode: CliMode,

    /// Fix the state bound instead of searching from 1.
    #[arg(long)]
    states: Option<usize>,

    /// Fix the cycle bound instead of descending from the first solution.
    #[arg(long)]
    cycles: Option<usize>,

    /// Search minimal bounds even when --states is given (it then serves
    /// as the search ceiling).
    #[arg(long)]
    auto: bool,

    /// Ceiling for the state-bound search.
    #[arg(long, default_value_t = 8)]
    max_states: usize,

    /// External solver command (repeatable); DIMACS on stdin, solver output
    /// on stdout. Overrides the built-in portfolio and SYNTH_SOLVERS.
    #[arg(long = "solver")]
    solvers: Vec<String>,

    /// Per-instance solver timeout in seconds.
    #[arg(long, default_value_t = 600)]
    timeout: u64,

    /// Machine output format.
    #[arg(long, value_enum, default_value = "text")]
    out: OutFormat,

    /// Emit a CSV report of all solved instances to stderr.
    #[arg(long, value_parser = ["csv"])]
    report: Option<String>,

    /// Import the universal co-Büchi automaton from a HOA file instead of
    /// translating the formula.
    #[arg(long)]
    hoa: Option<String>,

    /// Cycle-counting cap.
    #[arg(long, default_value_t = synth_core::cycles::DEFAULT_CYCLE_CAP)]
    cap: u64,

    /// Use bisection for the cycle-bound descent.
    #[arg(long)]
    binary_descent: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let text = match std::fs::read_to_string(&cli.spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.spec);
            return ExitCode::from(3);
        }
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.spec);
            return ExitCode::from(3);
        }
    };

    let uca = match &cli.hoa {
        None => ltl_to_uca(&spec),
        Some(path) => {
            let hoa_text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {path}: {e}");
                    return ExitCode::from(3);
                }
            };
            match import_hoa(&hoa_text, &spec.signals) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("error: {path}: {e}");
                    return ExitCode::from(3);
                }
            }
        }
    };

    let timeout = Duration::from_secs(cli.timeout);
    let portfolio = if cli.solvers.is_empty() {
        SolverPortfolio::default_portfolio(timeout)
    } else {
        let backends: Vec<Arc<dyn SolverBackend>> = cli
            .solvers
            .iter()
            .map(|cmd| Arc::new(ExternalBackend::new(cmd.clone())) as Arc<dyn SolverBackend>)
            .collect();
        SolverPortfolio::new(backends, timeout)
    };

    let spec_name = std::path::Path::new(&cli.spec)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| cli.spec.clone());
    let config = SearchConfig {
        mode: match cli.mode {
            CliMode::Bs => Mode::Bs,
            CliMode::Bocy => Mode::Bocy,
        },
        fixed_states: if cli.auto { None } else { cli.states },
        fixed_cycles: if cli.auto { None } else { cli.cycles },
        max_states: match (cli.auto, cli.states) {
            (true, Some(n)) => n,
            _ => cli.max_states,
        },
        cycle_cap: cli.cap,
        binary_descent: cli.binary_descent,
        spec_name,
    };

    let output = match search_minimal(&spec, &uca, &config, &portfolio) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };

    if cli.report.as_deref() == Some("csv") {
        eprint!("{}", output.report.to_csv(true));
    }

    match output.verdict {
        SearchVerdict::Synthesized => {
            let machine = output.machine.expect("synthesized run carries a machine");
            // final gate before anything is written out
            let verdict = verify(&machine, &uca, cli.cap);
            if !verdict.accepted {
                eprintln!(
                    "error: verification failed on {}",
                    verdict
                        .counterexample
                        .map(|w| w.format(&spec.signals))
                        .unwrap_or_default()
                );
                return ExitCode::from(4);
            }
            eprintln!(
                "synthesized: {} states, {} cycles",
                output.states.unwrap_or_default(),
                verdict.cycles.render()
            );
            match cli.out {
                OutFormat::Text => print!("{}", machine.to_text()),
                OutFormat::Dot => print!("{}", machine.to_dot(true)),
            }
            ExitCode::SUCCESS
        }
        SearchVerdict::BoundsUnsat => {
            eprintln!("the requested bounds admit no implementation");
            ExitCode::from(1)
        }
        SearchVerdict::CeilingReached => {
            eprintln!(
                "no implementation with up to {} states found (not a proof of unrealizability)",
                config.max_states
            );
            ExitCode::from(2)
        }
        SearchVerdict::ResourceLimit => {
            eprintln!("solver resource limit reached");
            ExitCode::from(2)
        }
    }
}
