//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its wall time. Expected values are either fixed by semantics,
//! computed by the brute-force cycle oracle, or computed by exhaustive
//! machine enumeration with model checking.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use synth_core::automata::{ltl_to_uca, machine_accepted, UniversalCoBuchiAutomaton};
use synth_core::bench::{gen_blowup_gadget, gen_tradeoff_family};
use synth_core::cnf::CnfInstance;
use synth_core::cycles::{
    check_lemma1_bound, count_cycles_scc, count_cycles_tiernan, enumerate_cycles_bruteforce,
    extract_witness_from_graph, validate_witness_forest, Cycle, CycleCount,
};
use synth_core::encode::{encode_bocy, encode_bs};
use synth_core::ltl::{evaluate, parse_spec, LassoWord, Letter, SpecificationFile};
use synth_core::machine::{MealyMachine, StateGraph};
use synth_core::search::{
    default_portfolio, search_minimal, verify, Mode, RowResult, SearchConfig, SearchVerdict,
};
use synth_core::solver::{SolveOutcome, SolverBackend, SplrBackend, VarisatBackend};

const CAP: u64 = 1_000_000;

fn finish(criterion: &str, started: Instant, limit: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance {criterion}: PASS ({:.2}s)", elapsed.as_secs_f64());
    assert!(
        elapsed <= limit,
        "{criterion} exceeded its time budget: {:.2}s > {:.2}s",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
}

// ---------------------------------------------------------------------------
// graph generation shared by criteria 2 and 3
// ---------------------------------------------------------------------------

fn exhaustive_graphs(max_n: usize) -> Vec<StateGraph> {
    let mut graphs = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .collect();
        for mask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            graphs.push(StateGraph::from_edges(n, &edges));
        }
    }
    graphs
}

fn random_graphs(count: usize, max_n: usize, seed: u64) -> Vec<StateGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if rng.gen_bool(0.35) {
                        edges.push((a, b));
                    }
                }
            }
            StateGraph::from_edges(n, &edges)
        })
        .collect()
}

fn criterion_graphs() -> Vec<StateGraph> {
    let mut graphs = exhaustive_graphs(4);
    graphs.extend(random_graphs(300, 7, 0x5EED_CAFE));
    graphs
}

// ---------------------------------------------------------------------------
// exhaustive machine enumeration with model checking (criterion 4 oracle)
// ---------------------------------------------------------------------------

fn all_machines(spec: &SpecificationFile, n: usize) -> Vec<MealyMachine> {
    let sig = &spec.signals;
    let v = sig.input_valuations();
    let outs = sig.outputs();
    let delta_combos = (n as u64).pow((n * v) as u32);
    let lambda_combos = 1u64 << (n * v * outs.len());
    let mut machines = Vec::new();
    for d in 0..delta_combos {
        let mut dd = d;
        let mut delta = vec![vec![0usize; v]; n];
        for row in delta.iter_mut() {
            for slot in row.iter_mut() {
                *slot = (dd % n as u64) as usize;
                dd /= n as u64;
            }
        }
        for l in 0..lambda_combos {
            let mut lambda = vec![vec![0u64; v]; n];
            let mut bit = 0;
            for row in lambda.iter_mut() {
                for slot in row.iter_mut() {
                    for &o in &outs {
                        if l & (1 << bit) != 0 {
                            *slot |= 1 << o;
                        }
                        bit += 1;
                    }
                }
            }
            machines.push(
                MealyMachine::new(sig.clone(), n, 0, delta.clone(), lambda).expect("total tables"),
            );
        }
    }
    machines
}

/// Smallest n admitting an accepted machine, up to `ceiling`.
fn oracle_minimal_states(
    spec: &SpecificationFile,
    uca: &UniversalCoBuchiAutomaton,
    ceiling: usize,
) -> Option<usize> {
    (1..=ceiling).find(|&n| {
        all_machines(spec, n)
            .iter()
            .any(|m| machine_accepted(m, uca))
    })
}

/// Smallest cycle count over all accepted machines with exactly `n` states.
fn oracle_minimal_cycles(
    spec: &SpecificationFile,
    uca: &UniversalCoBuchiAutomaton,
    n: usize,
) -> Option<u64> {
    all_machines(spec, n)
        .iter()
        .filter(|m| machine_accepted(m, uca))
        .map(|m| {
            count_cycles_scc(&m.abstract_graph(), CAP)
                .count
                .exact()
                .expect("small machine")
        })
        .min()
}

fn fixture_specs() -> Vec<(&'static str, SpecificationFile)> {
    vec![
        ("gb", parse_spec("INPUTS:\nOUTPUTS: b\nSPEC: G b").unwrap()),
        (
            "contradiction",
            parse_spec("INPUTS:\nOUTPUTS: b\nSPEC: b && !b").unwrap(),
        ),
        (
            "implies",
            parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a -> X b)").unwrap(),
        ),
        (
            "iff",
            parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a <-> X b)").unwrap(),
        ),
    ]
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_three_vertex_fixture() {
    let started = Instant::now();
    let g = StateGraph::from_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 0)]);

    for (name, search) in [
        ("plain", count_cycles_tiernan(&g, CAP)),
        ("restricted", count_cycles_scc(&g, CAP)),
    ] {
        assert_eq!(search.count, CycleCount::Exact(3), "{name}");
        let set: BTreeSet<Cycle> = search.cycles.into_iter().collect();
        let expected: BTreeSet<Cycle> = [
            Cycle::new(vec![0, 1]),
            Cycle::new(vec![1, 2]),
            Cycle::new(vec![0, 1, 2]),
        ]
        .into_iter()
        .collect();
        assert_eq!(set, expected, "{name}");
    }

    let forest = extract_witness_from_graph(&g, CAP).unwrap();
    assert_eq!(forest.red_per_root(), vec![2, 1, 0]);
    let report = validate_witness_forest(&forest, &g, CAP).unwrap();
    assert_eq!(report.total_red, 3);

    finish("criterion 1 (three-vertex fixture)", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_oracle_equivalence() {
    let started = Instant::now();
    for g in criterion_graphs() {
        let oracle: BTreeSet<Cycle> = enumerate_cycles_bruteforce(&g).into_iter().collect();
        let plain = count_cycles_tiernan(&g, CAP);
        let restricted = count_cycles_scc(&g, CAP);
        assert_eq!(plain.count, CycleCount::Exact(oracle.len() as u64));
        assert_eq!(restricted.count, CycleCount::Exact(oracle.len() as u64));
        let plain_set: BTreeSet<Cycle> = plain.cycles.into_iter().collect();
        let restricted_set: BTreeSet<Cycle> = restricted.cycles.into_iter().collect();
        assert_eq!(plain_set, oracle);
        assert_eq!(restricted_set, oracle);
        assert!(check_lemma1_bound(&g, CAP));
    }
    finish("criterion 2 (oracle equivalence)", started, Duration::from_secs(60));
}

#[test]
fn criterion_3_witness_validator() {
    let started = Instant::now();
    for g in criterion_graphs() {
        let oracle_count = enumerate_cycles_bruteforce(&g).len();
        let forest = extract_witness_from_graph(&g, CAP).unwrap();
        let report = validate_witness_forest(&forest, &g, CAP).unwrap();
        assert_eq!(report.total_red, oracle_count);
    }
    finish("criterion 3 (witness validator)", started, Duration::from_secs(60));
}

#[test]
fn criterion_4_end_to_end_state_bounds() {
    let started = Instant::now();
    let portfolio = default_portfolio(120);
    for (name, spec) in fixture_specs() {
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode: Mode::Bs,
            max_states: 3,
            spec_name: name.to_string(),
            ..SearchConfig::default()
        };
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        let oracle_n = oracle_minimal_states(&spec, &uca, 3);
        match oracle_n {
            None => {
                assert_eq!(out.verdict, SearchVerdict::CeilingReached, "{name}");
                assert!(
                    out.report.rows.iter().all(|r| r.result == RowResult::Unsat),
                    "{name}"
                );
            }
            Some(n_star) => {
                assert_eq!(out.verdict, SearchVerdict::Synthesized, "{name}");
                assert_eq!(out.states, Some(n_star), "{name}: minimal state bound");
                let machine = out.machine.as_ref().unwrap();
                assert!(machine_accepted(machine, &uca), "{name}");
                // the instance below the minimum is unsatisfiable: either
                // solved by the search loop or impossible a priori (n = 0)
                if n_star > 1 {
                    assert!(
                        out.report.rows.iter().any(|r| r.mode == Mode::Bs
                            && r.n == n_star - 1
                            && r.result == RowResult::Unsat),
                        "{name}: missing UNSAT companion at {}",
                        n_star - 1
                    );
                    assert_eq!(oracle_minimal_states(&spec, &uca, n_star - 1), None);
                }
            }
        }
    }
    finish("criterion 4 (bounded synthesis end-to-end)", started, Duration::from_secs(120));
}

#[test]
fn criterion_5_end_to_end_cycle_bounds() {
    let started = Instant::now();
    let portfolio = default_portfolio(300);

    // plain fixtures: minimal m equals the machine-enumeration optimum
    for (name, spec) in fixture_specs() {
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode: Mode::Bocy,
            max_states: 3,
            spec_name: name.to_string(),
            ..SearchConfig::default()
        };
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        if name == "contradiction" {
            assert_eq!(out.verdict, SearchVerdict::CeilingReached);
            continue;
        }
        assert_eq!(out.verdict, SearchVerdict::Synthesized, "{name}");
        let n_star = out.states.unwrap();
        let m_star = out.cycles.unwrap();
        let machine = out.machine.as_ref().unwrap();
        // minimal m equals the independent recount of the final machine
        let recount = count_cycles_scc(&machine.abstract_graph(), CAP)
            .count
            .exact()
            .unwrap();
        assert_eq!(m_star, recount, "{name}");
        // and equals the true optimum over all machines of that size
        assert_eq!(
            oracle_minimal_cycles(&spec, &uca, n_star),
            Some(m_star),
            "{name}"
        );
        // the bound below the minimum is unsatisfiable (solver row, or the
        // a-priori refutation at bound zero)
        if m_star > 1 {
            assert!(
                out.report.rows.iter().any(|r| r.mode == Mode::Bocy
                    && r.m_bound == Some(m_star as usize - 1)
                    && r.result == RowResult::Unsat),
                "{name}: missing UNSAT companion at {}",
                m_star - 1
            );
        } else {
            assert!(
                out.report.rows.iter().any(|r| r.mode == Mode::Bocy
                    && r.m_bound == Some(0)
                    && r.result == RowResult::TrivialUnsat),
                "{name}: missing refutation at bound 0"
            );
        }
        // the SAT witness at the minimal bound itself is in the report
        assert!(
            out.report.rows.iter().any(|r| r.mode == Mode::Bocy
                && r.m_bound == Some(m_star as usize)
                && r.result == RowResult::Sat),
            "{name}: missing SAT row at {m_star}"
        );
    }

    // trade-off family: at the minimal state count the cycle minimum is
    // 2^k, one extra state brings it down to a single cycle
    for k in [1usize, 2] {
        let spec = gen_tradeoff_family(k);
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode: Mode::Bocy,
            max_states: 8,
            spec_name: format!("tradeoff[{k}]"),
            ..SearchConfig::default()
        };
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        assert_eq!(out.verdict, SearchVerdict::Synthesized);
        let n_star = out.states.unwrap();
        assert_eq!(out.cycles, Some(1 << k), "tradeoff k={k} at minimal n");
        let machine = out.machine.as_ref().unwrap();
        let recount = count_cycles_scc(&machine.abstract_graph(), CAP)
            .count
            .exact()
            .unwrap();
        assert_eq!(recount, 1 << k);
        assert!(
            out.report.rows.iter().any(|r| r.mode == Mode::Bocy
                && r.m_bound == Some((1 << k) - 1)
                && r.result == RowResult::Unsat),
            "tradeoff k={k}: missing UNSAT companion"
        );

        let config = SearchConfig {
            mode: Mode::Bocy,
            fixed_states: Some(n_star + 1),
            spec_name: format!("tradeoff[{k}]+1"),
            ..SearchConfig::default()
        };
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        assert_eq!(out.verdict, SearchVerdict::Synthesized);
        assert_eq!(out.cycles, Some(1), "tradeoff k={k} at n+1");
    }

    finish("criterion 5 (cycle-bound end-to-end)", started, Duration::from_secs(600));
}

#[test]
fn criterion_6_verification_gate() {
    let started = Instant::now();
    let portfolio = default_portfolio(120);
    let mut rng = StdRng::seed_from_u64(0xBADC_0DE5);

    for (name, spec) in fixture_specs() {
        if name == "contradiction" {
            continue;
        }
        let uca = ltl_to_uca(&spec);
        let config = SearchConfig {
            mode: Mode::Bocy,
            max_states: 3,
            spec_name: name.to_string(),
            ..SearchConfig::default()
        };
        let out = search_minimal(&spec, &uca, &config, &portfolio).unwrap();
        let machine = out.machine.unwrap();

        // every emitted machine passes the independent check and recount
        let verdict = verify(&machine, &uca, CAP);
        assert!(verdict.accepted, "{name}");
        assert_eq!(verdict.cycles.exact(), out.cycles, "{name}");

        // mutation test: flip output bits on reachable (state, input)
        // pairs in seeded-random order; the verifier must catch at least
        // one corruption, and whenever it passes a flipped machine the
        // machine must genuinely still satisfy the formula
        let sig = &spec.signals;
        let mut flips: Vec<(usize, u32, usize)> = Vec::new();
        for t in 0..machine.num_states {
            for v in 0..sig.input_valuations() as u32 {
                for &o in &sig.outputs() {
                    flips.push((t, v, o));
                }
            }
        }
        for i in (1..flips.len()).rev() {
            flips.swap(i, rng.gen_range(0..=i));
        }
        let mut caught = 0;
        for &(t, v, o) in &flips {
            let mut delta = Vec::new();
            let mut lambda = Vec::new();
            for s in 0..machine.num_states {
                delta.push(
                    (0..sig.input_valuations() as u32)
                        .map(|x| machine.step(s, x))
                        .collect::<Vec<_>>(),
                );
                lambda.push(
                    (0..sig.input_valuations() as u32)
                        .map(|x| machine.output(s, x))
                        .collect::<Vec<_>>(),
                );
            }
            lambda[t][v as usize] ^= 1 << o;
            let corrupted =
                MealyMachine::new(sig.clone(), machine.num_states, 0, delta, lambda).unwrap();
            let verdict = verify(&corrupted, &uca, CAP);
            if verdict.accepted {
                // escaped mutation: confirm by driving the machine over
                // every short input lasso and evaluating the formula
                for input in short_input_lassos(sig, 4) {
                    let word = corrupted.path_word(&input);
                    assert!(
                        evaluate(&spec.formula, &word, 0),
                        "{name}: verifier passed a corrupted machine that \
                         violates the formula on {}",
                        word.format(sig)
                    );
                }
            } else {
                caught += 1;
                let lasso = verdict.counterexample.unwrap();
                assert!(
                    !evaluate(&spec.formula, &lasso, 0),
                    "{name}: counterexample does not violate the formula"
                );
            }
        }
        assert!(caught > 0, "{name}: no mutation caught");
    }
    finish("criterion 6 (verification gate)", started, Duration::from_secs(120));
}

fn short_input_lassos(sig: &synth_core::ltl::SignalSpace, max_total: usize) -> Vec<LassoWord> {
    let letters: Vec<Letter> = (0..sig.input_valuations() as u32)
        .map(|v| sig.input_letter(v))
        .collect();
    let mut out = Vec::new();
    for total in 1..=max_total {
        for loop_len in 1..=total {
            let prefix_len = total - loop_len;
            let mut stack = vec![Vec::<Letter>::new()];
            while let Some(cur) = stack.pop() {
                if cur.len() == total {
                    let (p, c) = cur.split_at(prefix_len);
                    out.push(LassoWord::new(p.to_vec(), c.to_vec()).unwrap());
                    continue;
                }
                for &l in &letters {
                    let mut next = cur.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_7_determinism_and_portfolio_agreement() {
    let started = Instant::now();
    let splr = SplrBackend;
    let varisat = VarisatBackend;
    let timeout = Duration::from_secs(120);

    let mut instances: Vec<(String, CnfInstance)> = Vec::new();
    for (name, spec) in fixture_specs() {
        let uca = ltl_to_uca(&spec);
        for n in 1..=2usize {
            instances.push((
                format!("{name} bs n={n}"),
                encode_bs(&uca, &spec.signals, n).cnf,
            ));
            for m in 1..=3usize {
                instances.push((
                    format!("{name} bocy n={n} m={m}"),
                    encode_bocy(&uca, &spec.signals, n, m).cnf,
                ));
            }
        }
    }

    for (name, cnf) in &instances {
        // byte-identical re-encoding
        let again = rebuild(name, fixture_specs());
        assert_eq!(
            cnf.to_dimacs(),
            again.to_dimacs(),
            "{name}: DIMACS differs between encodings"
        );
        // the two backends never disagree
        let a = splr.solve(cnf, timeout);
        let b = varisat.solve(cnf, timeout);
        match (&a, &b) {
            (SolveOutcome::Sat(_), SolveOutcome::Sat(_))
            | (SolveOutcome::Unsat, SolveOutcome::Unsat) => {}
            other => panic!("{name}: backends disagree: {other:?}"),
        }
    }
    finish(
        "criterion 7 (determinism and portfolio agreement)",
        started,
        Duration::from_secs(120),
    );
}

fn rebuild(name: &str, fixtures: Vec<(&'static str, SpecificationFile)>) -> CnfInstance {
    // re-encode the instance identified by the label built above
    let parts: Vec<&str> = name.split_whitespace().collect();
    let spec = fixtures
        .into_iter()
        .find(|(n, _)| *n == parts[0])
        .map(|(_, s)| s)
        .unwrap();
    let uca = ltl_to_uca(&spec);
    match parts[1] {
        "bs" => {
            let n: usize = parts[2].trim_start_matches("n=").parse().unwrap();
            encode_bs(&uca, &spec.signals, n).cnf
        }
        _ => {
            let n: usize = parts[2].trim_start_matches("n=").parse().unwrap();
            let m: usize = parts[3].trim_start_matches("m=").parse().unwrap();
            encode_bocy(&uca, &spec.signals, n, m).cnf
        }
    }
}

#[test]
fn criterion_8_gadget_scaling() {
    let started = Instant::now();
    let portfolio = default_portfolio(120);

    // base with a length-1 cycle and base with a length-2 cycle
    let bases = [
        ("gc", parse_spec("OUTPUTS: c\nSPEC: G c").unwrap()),
        ("alt", parse_spec("OUTPUTS: c\nSPEC: G (c <-> X !c)").unwrap()),
    ];
    for (name, base) in bases {
        let base_uca = ltl_to_uca(&base);
        let config = SearchConfig {
            mode: Mode::Bs,
            max_states: 4,
            spec_name: name.to_string(),
            ..SearchConfig::default()
        };
        let base_out = search_minimal(&base, &base_uca, &config, &portfolio).unwrap();
        let base_machine = base_out.machine.unwrap();
        let base_search = count_cycles_scc(&base_machine.abstract_graph(), CAP);
        let base_cycles = base_search.count.exact().unwrap();
        let longest = base_search
            .cycles
            .iter()
            .map(Cycle::len)
            .max()
            .expect("every total machine has a cycle");

        let gadgeted = gen_blowup_gadget(&base);
        let g_uca = ltl_to_uca(&gadgeted);
        let config = SearchConfig {
            mode: Mode::Bocy,
            max_states: 6,
            spec_name: format!("{name}+gadget"),
            ..SearchConfig::default()
        };
        let g_out = search_minimal(&gadgeted, &g_uca, &config, &portfolio).unwrap();
        assert_eq!(g_out.verdict, SearchVerdict::Synthesized, "{name}");
        let g_cycles = g_out.cycles.unwrap();
        assert!(
            g_cycles >= 2 * base_cycles,
            "{name}: {g_cycles} < 2 * {base_cycles}"
        );
        assert!(
            g_cycles >= 1 << longest,
            "{name}: {g_cycles} < 2^{longest}"
        );
    }
    finish("criterion 8 (gadget scaling)", started, Duration::from_secs(120));
}
