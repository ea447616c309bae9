//! Generates the built-in specification families, either emitting the
//! specification file or running the full minimal-bound search on it.

use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use synth_core::automata::ltl_to_uca;
use synth_core::bench::{family, FAMILY_NAMES};
use synth_core::search::{default_portfolio, search_minimal, Mode, SearchConfig, SearchVerdict};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    /// Print the generated specification file.
    Spec,
    /// Run the minimal-bound search and print the report.
    Run,
}

#[derive(Parser, Debug)]
#[command(
    name = "synth-bench",
    about = "Built-in specification families for the synthesizer"
)]
struct Cli {
    /// Family name: gadget, monitor or tradeoff.
    family: String,

    /// Family parameter (gadget applications, block size, or memory depth).
    param: usize,

    #[arg(long, value_enum, default_value = "spec")]
    emit: Emit,

    /// Per-instance solver timeout in seconds (run mode).
    #[arg(long, default_value_t = 600)]
    timeout: u64,

    /// Ceiling for the state-bound search (run mode).
    #[arg(long, default_value_t = 8)]
    max_states: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(spec) = family(&cli.family, cli.param) else {
        eprintln!(
            "error: unknown family `{}` or bad parameter {} (families: {})",
            cli.family,
            cli.param,
            FAMILY_NAMES.join(", ")
        );
        return ExitCode::from(3);
    };

    match cli.emit {
        Emit::Spec => {
            print!("{}", spec.to_text());
            ExitCode::SUCCESS
        }
        Emit::Run => {
            let uca = ltl_to_uca(&spec);
            let config = SearchConfig {
                mode: Mode::Bocy,
                max_states: cli.max_states,
                spec_name: format!("{}[{}]", cli.family, cli.param),
                ..SearchConfig::default()
            };
            let portfolio = default_portfolio(cli.timeout);
            match search_minimal(&spec, &uca, &config, &portfolio) {
                Ok(out) => {
                    print!("{}", out.report.to_csv(true));
                    match out.verdict {
                        SearchVerdict::Synthesized => {
                            eprintln!(
                                "synthesized: {} states, {} cycles",
                                out.states.unwrap_or_default(),
                                out.cycles.unwrap_or_default()
                            );
                            ExitCode::SUCCESS
                        }
                        SearchVerdict::BoundsUnsat => ExitCode::from(1),
                        SearchVerdict::CeilingReached | SearchVerdict::ResourceLimit => {
                            ExitCode::from(2)
                        }
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(4)
                }
            }
        }
    }
}
