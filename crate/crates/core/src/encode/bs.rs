//! Encoding of machine existence under a state bound.
//!
//! A model is a total deterministic Mealy machine with `n` states together
//! with an annotated run graph certifying acceptance by the universal
//! automaton: reachable product vertices carry a bounded counter that must
//! not decrease along edges and must strictly increase into rejecting
//! vertices, which rules out rejecting cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::automata::{build_run_graph, run_graph_accepting, UniversalCoBuchiAutomaton};
use crate::cnf::{
    assert_compare_if, const_bits, exactly_one, neg, pos, var_bits, width_for, CmpRel,
    CnfInstance, Lit, Model, Var, VarTag,
};
use crate::ltl::{Letter, SignalSpace};
use crate::machine::MealyMachine;

/// The constraint system for one `(automaton, n)` instance.
pub struct BsEncoding {
    pub cnf: CnfInstance,
    pub signals: SignalSpace,
    pub n: usize,
    pub automaton_states: usize,
    pub rejecting_count: usize,
    pub annot_width: u32,
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("model selects {count} successors for state {state} on input {input}")]
    NonFunctional {
        state: usize,
        input: u32,
        count: usize,
    },
    #[error("decoded machine fails the run-graph model check: {lasso}")]
    VerificationFailed { lasso: String },
    #[error("decoded machine is malformed: {0}")]
    Malformed(String),
}

/// A decoded, verified machine plus its acceptance certificate.
pub struct SynthesisResult {
    pub machine: MealyMachine,
    /// Annotation value per (machine state, automaton state).
    pub annotations: Vec<Vec<u64>>,
    pub reachable: Vec<Vec<bool>>,
}

pub(crate) struct BsLayout {
    pub n: usize,
    pub q_count: usize,
    pub k: usize,
    pub annot_width: u32,
}

pub(crate) fn alloc_bs(
    cnf: &mut CnfInstance,
    a: &UniversalCoBuchiAutomaton,
    sig: &SignalSpace,
    n: usize,
) -> BsLayout {
    let valuations = sig.input_valuations() as u32;
    let outputs = sig.num_outputs();
    let q_count = a.num_states;
    let k = a.num_rejecting();
    let annot_width = width_for((n * k) as u64).max(1);

    for t in 0..n {
        for v in 0..valuations {
            for t2 in 0..n {
                cnf.alloc(VarTag::Trans {
                    from: t,
                    input: v,
                    to: t2,
                });
            }
        }
    }
    for t in 0..n {
        for v in 0..valuations {
            for x in 0..outputs {
                cnf.alloc(VarTag::Label {
                    state: t,
                    input: v,
                    output: x,
                });
            }
        }
    }
    for t in 0..n {
        for q in 0..q_count {
            cnf.alloc(VarTag::RgState {
                state: t,
                automaton: q,
            });
        }
    }
    for t in 0..n {
        for q in 0..q_count {
            for bit in 0..annot_width {
                cnf.alloc(VarTag::AnnotBit {
                    state: t,
                    automaton: q,
                    bit,
                });
            }
        }
    }
    BsLayout {
        n,
        q_count,
        k,
        annot_width,
    }
}

pub(crate) fn annot_bits(cnf: &CnfInstance, layout: &BsLayout, t: usize, q: usize) -> Vec<Var> {
    (0..layout.annot_width)
        .map(|bit| {
            cnf.var(&VarTag::AnnotBit {
                state: t,
                automaton: q,
                bit,
            })
        })
        .collect()
}

pub(crate) fn emit_bs(
    cnf: &mut CnfInstance,
    a: &UniversalCoBuchiAutomaton,
    sig: &SignalSpace,
    layout: &BsLayout,
) {
    let n = layout.n;
    let valuations = sig.input_valuations() as u32;
    let output_ids = sig.outputs();
    let universe: u64 = (0..sig.len()).fold(0, |m, i| m | (1 << i));

    // every (state, input) pair has exactly one successor
    for t in 0..n {
        for v in 0..valuations {
            let vars: Vec<Var> = (0..n)
                .map(|t2| {
                    cnf.var(&VarTag::Trans {
                        from: t,
                        input: v,
                        to: t2,
                    })
                })
                .collect();
            exactly_one(cnf, &vars).expect("state bound is at least 1");
        }
    }

    // the initial product vertex is reachable with annotation 1, and every
    // annotation is bounded by n * k
    let init = cnf.var(&VarTag::RgState {
        state: 0,
        automaton: a.initial,
    });
    cnf.add_clause(&[pos(init)]);
    let init_bits = annot_bits(cnf, layout, 0, a.initial);
    assert_compare_if(
        cnf,
        &[],
        &var_bits(&init_bits),
        CmpRel::Eq,
        &const_bits(1, layout.annot_width),
    )
    .expect("nonzero width");
    if layout.k > 0 {
        let bound = (n * layout.k) as u64;
        for t in 0..n {
            for q in 0..layout.q_count {
                let bits = annot_bits(cnf, layout, t, q);
                assert_compare_if(
                    cnf,
                    &[],
                    &var_bits(&bits),
                    CmpRel::Le,
                    &const_bits(bound, layout.annot_width),
                )
                .expect("nonzero width");
            }
        }
    }

    // reachability and annotation propagation along every joint step of the
    // machine and the automaton
    let mut cmp_cache: HashMap<(usize, usize, usize, usize), Lit> = HashMap::new();
    for q in 0..layout.q_count {
        // letters relevant at q, grouped with their automaton successors
        let mut letters: BTreeMap<Letter, BTreeSet<usize>> = BTreeMap::new();
        for &(guard, q2) in &a.transitions[q] {
            for letter in guard.satisfying_letters(universe) {
                letters.entry(letter).or_default().insert(q2);
            }
        }
        for (&letter, succs) in &letters {
            let v = sig.input_index(letter);
            for t in 0..n {
                let rg = cnf.var(&VarTag::RgState {
                    state: t,
                    automaton: q,
                });
                // antecedent: vertex reachable, transition labeled with
                // exactly this letter's outputs, successor chosen
                let mut antecedent: Vec<Lit> = vec![pos(rg)];
                for (x, &id) in output_ids.iter().enumerate() {
                    let lv = cnf.var(&VarTag::Label {
                        state: t,
                        input: v,
                        output: x,
                    });
                    antecedent.push(if letter.contains(id) { pos(lv) } else { neg(lv) });
                }
                for t2 in 0..n {
                    let tr = cnf.var(&VarTag::Trans {
                        from: t,
                        input: v,
                        to: t2,
                    });
                    let mut full = antecedent.clone();
                    full.push(pos(tr));
                    for &q2 in succs {
                        let rg2 = cnf.var(&VarTag::RgState {
                            state: t2,
                            automaton: q2,
                        });
                        cnf.add_guarded(&full, &[pos(rg2)]);
                        let cmp = *cmp_cache.entry((t, q, t2, q2)).or_insert_with(|| {
                            let lit = pos(cnf.fresh_aux());
                            let from_bits = annot_bits(cnf, layout, t, q);
                            let to_bits = annot_bits(cnf, layout, t2, q2);
                            let rel = if a.rejecting[q2] { CmpRel::Lt } else { CmpRel::Le };
                            assert_compare_if(
                                cnf,
                                &[lit],
                                &var_bits(&from_bits),
                                rel,
                                &var_bits(&to_bits),
                            )
                            .expect("nonzero width");
                            lit
                        });
                        cnf.add_guarded(&full, &[cmp]);
                    }
                }
            }
        }
    }
}

/// Builds the constraint system for synthesizing an `n`-state machine
/// accepted by `a`.
pub fn encode_bs(a: &UniversalCoBuchiAutomaton, sig: &SignalSpace, n: usize) -> BsEncoding {
    assert!(n >= 1, "state bound must be positive");
    let mut cnf = CnfInstance::new();
    let layout = alloc_bs(&mut cnf, a, sig, n);
    emit_bs(&mut cnf, a, sig, &layout);
    BsEncoding {
        cnf,
        signals: sig.clone(),
        n,
        automaton_states: layout.q_count,
        rejecting_count: layout.k,
        annot_width: layout.annot_width,
    }
}

pub(crate) fn machine_from_model(
    cnf: &CnfInstance,
    sig: &SignalSpace,
    n: usize,
    model: &Model,
) -> Result<MealyMachine, DecodeError> {
    let valuations = sig.input_valuations();
    let output_ids = sig.outputs();
    let mut delta = vec![vec![0usize; valuations]; n];
    let mut lambda = vec![vec![0u64; valuations]; n];
    for t in 0..n {
        for v in 0..valuations as u32 {
            let successors: Vec<usize> = (0..n)
                .filter(|&t2| {
                    model.value(cnf.var(&VarTag::Trans {
                        from: t,
                        input: v,
                        to: t2,
                    }))
                })
                .collect();
            if successors.len() != 1 {
                return Err(DecodeError::NonFunctional {
                    state: t,
                    input: v,
                    count: successors.len(),
                });
            }
            delta[t][v as usize] = successors[0];
            for (x, &id) in output_ids.iter().enumerate() {
                if model.value(cnf.var(&VarTag::Label {
                    state: t,
                    input: v,
                    output: x,
                })) {
                    lambda[t][v as usize] |= 1 << id;
                }
            }
        }
    }
    MealyMachine::new(sig.clone(), n, 0, delta, lambda)
        .map_err(|e| DecodeError::Malformed(e.to_string()))
}

/// Decodes a model into a machine and re-verifies it against the automaton
/// with the independent run-graph check before returning.
pub fn decode_machine(
    enc: &BsEncoding,
    a: &UniversalCoBuchiAutomaton,
    model: &Model,
) -> Result<SynthesisResult, DecodeError> {
    let machine = machine_from_model(&enc.cnf, &enc.signals, enc.n, model)?;
    let run_graph = build_run_graph(&machine, a);
    if let Err(lasso) = run_graph_accepting(&run_graph, &machine) {
        return Err(DecodeError::VerificationFailed {
            lasso: lasso.word.format(&enc.signals),
        });
    }
    let layout = BsLayout {
        n: enc.n,
        q_count: enc.automaton_states,
        k: enc.rejecting_count,
        annot_width: enc.annot_width,
    };
    let mut annotations = vec![vec![0u64; enc.automaton_states]; enc.n];
    let mut reachable = vec![vec![false; enc.automaton_states]; enc.n];
    for t in 0..enc.n {
        for q in 0..enc.automaton_states {
            let bits = annot_bits(&enc.cnf, &layout, t, q);
            annotations[t][q] = model.read_bits(&bits);
            reachable[t][q] = model.value(enc.cnf.var(&VarTag::RgState {
                state: t,
                automaton: q,
            }));
        }
    }
    Ok(SynthesisResult {
        machine,
        annotations,
        reachable,
    })
}
