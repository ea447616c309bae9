//! Soundness bridge between the run-graph model check and the lasso
//! semantics: for random small specifications and random machines, an
//! accepting run graph means every sampled machine path satisfies the
//! formula, and a rejecting run graph comes with a concrete lasso that
//! violates it.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use synth_core::automata::{build_run_graph, ltl_to_uca, run_graph_accepting};
use synth_core::ltl::{
    evaluate, LassoWord, Letter, LtlFormula, SignalKind, SignalSpace, SpecificationFile,
};
use synth_core::machine::MealyMachine;

fn random_formula(rng: &mut StdRng, atoms: &[usize], budget: usize) -> LtlFormula {
    if budget <= 1 {
        return match rng.gen_range(0..4) {
            0 => LtlFormula::True,
            1 => LtlFormula::False,
            _ => LtlFormula::atom(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    match rng.gen_range(0..10) {
        0 => LtlFormula::not(random_formula(rng, atoms, budget - 1)),
        1 => LtlFormula::next(random_formula(rng, atoms, budget - 1)),
        2 => LtlFormula::finally(random_formula(rng, atoms, budget - 1)),
        3 => LtlFormula::globally(random_formula(rng, atoms, budget - 1)),
        n => {
            let left = rng.gen_range(1..budget);
            let a = random_formula(rng, atoms, left);
            let b = random_formula(rng, atoms, budget - left);
            match n {
                4 => LtlFormula::and(a, b),
                5 => LtlFormula::or(a, b),
                6 => LtlFormula::implies(a, b),
                7 => LtlFormula::iff(a, b),
                8 => LtlFormula::until(a, b),
                _ => LtlFormula::release(a, b),
            }
        }
    }
}

fn random_machine(rng: &mut StdRng, sig: &SignalSpace, max_states: usize) -> MealyMachine {
    let n = rng.gen_range(1..=max_states);
    let v = sig.input_valuations();
    let out_mask = sig.output_mask();
    let delta = (0..n)
        .map(|_| (0..v).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let lambda = (0..n)
        .map(|_| (0..v).map(|_| rng.gen::<u64>() & out_mask).collect())
        .collect();
    MealyMachine::new(sig.clone(), n, 0, delta, lambda).unwrap()
}

fn all_input_lassos(sig: &SignalSpace, max_total: usize) -> Vec<LassoWord> {
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
fn run_graph_verdicts_agree_with_path_semantics() {
    let mut sig = SignalSpace::new();
    let a = sig.declare("a", SignalKind::Input).unwrap();
    let b = sig.declare("b", SignalKind::Output).unwrap();
    let inputs = all_input_lassos(&sig, 6);

    let mut rng = StdRng::seed_from_u64(0xB01D_FACE);
    for round in 0..150 {
        let formula = random_formula(&mut rng, &[a, b], 8);
        let spec = SpecificationFile {
            signals: sig.clone(),
            formula,
        };
        let uca = ltl_to_uca(&spec);
        let machine = random_machine(&mut rng, &sig, 3);
        let run_graph = build_run_graph(&machine, &uca);
        match run_graph_accepting(&run_graph, &machine) {
            Ok(()) => {
                // accepting: every sampled path must satisfy the formula
                for input in &inputs {
                    let word = machine.path_word(input);
                    assert!(
                        evaluate(&spec.formula, &word, 0),
                        "round {round}: accepting verdict but path {} violates {}",
                        word.format(&sig),
                        spec.formula.display(&sig)
                    );
                }
            }
            Err(lasso) => {
                // rejecting: the diagnostic lasso is conclusive
                assert!(
                    !evaluate(&spec.formula, &lasso.word, 0),
                    "round {round}: rejecting verdict but counterexample {} satisfies {}",
                    lasso.word.format(&sig),
                    spec.formula.display(&sig)
                );
            }
        }
    }
}
