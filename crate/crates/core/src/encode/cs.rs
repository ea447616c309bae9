//! Witness-forest encoding bounding the number of simple cycles.
//!
//! On top of the state-bound constraints, a model guesses the label-erased
//! graph of the machine and one unfolding tree per graph vertex, all drawn
//! from a shared pool of `m` copies per vertex. Tree edges are blue, edges
//! closing at a tree's root are red, and every red edge must register in a
//! strictly ordered list of `m` slots, so at most `m` cycles exist.
//! Completeness rows force each tree to unfold its root's strongly
//! connected component exactly like the counting search, which makes red
//! edges match cycles one for one.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::UniversalCoBuchiAutomaton;
use crate::cnf::{
    assert_compare_if, at_most_one_if, neg, pos, reify_eq_const, var_bits, width_for, CmpRel,
    CnfInstance, CopyId, Lit, Model, Var, VarTag,
};
use crate::cycles::{validate_witness_forest, WitnessForest, WitnessTree, WitnessViolation};
use crate::ltl::SignalSpace;
use crate::machine::StateGraph;

use super::bs::{alloc_bs, emit_bs, machine_from_model, BsLayout};
use super::scc::{alloc_scc, emit_scc, SccCaches, SccLayout};

/// The combined constraint system for one `(automaton, n, m)` instance.
pub struct BocyEncoding {
    pub cnf: CnfInstance,
    pub signals: SignalSpace,
    pub n: usize,
    pub m: usize,
    pub automaton_states: usize,
    pub rejecting_count: usize,
    pub annot_width: u32,
    pub wtree_width: u32,
    pub rbound_width: u32,
}

#[derive(Debug, Error)]
pub enum WitnessDecodeError {
    #[error("model does not decode to a machine: {0}")]
    Machine(String),
    #[error("edge variables disagree with the decoded machine graph")]
    EdgeMismatch,
    #[error("decoded forest fails validation: {0}")]
    Invalid(#[from] WitnessViolation),
    #[error("decoded forest has {red} red edges, over the bound {bound}")]
    TooManyRed { red: usize, bound: usize },
}

fn copies(n: usize, m: usize) -> Vec<CopyId> {
    let mut out = Vec::with_capacity(n * m);
    for t in 0..n {
        for c in 0..m {
            out.push((t, c));
        }
    }
    out
}

fn wtree_bits(cnf: &CnfInstance, width: u32, vertex: CopyId) -> Vec<Var> {
    (0..width)
        .map(|bit| cnf.var(&VarTag::WtreeBit { vertex, bit }))
        .collect()
}

fn rbound_bits(cnf: &CnfInstance, width: u32, slot: usize) -> Vec<Var> {
    (0..width)
        .map(|bit| cnf.var(&VarTag::RboundBit { slot, bit }))
        .collect()
}

/// Fixed numbering of forest vertices, `1..=n*m`.
fn forest_number((t, c): CopyId, m: usize) -> u64 {
    (t * m + c) as u64 + 1
}

/// Builds the full constraint system: machine existence under the state
/// bound conjoined with the witness structure bounding the cycles by `m`.
pub fn encode_bocy(
    a: &UniversalCoBuchiAutomaton,
    sig: &SignalSpace,
    n: usize,
    m: usize,
) -> BocyEncoding {
    assert!(n >= 1, "state bound must be positive");
    assert!(m >= 1, "cycle bound must be positive");
    let mut cnf = CnfInstance::new();
    let bs_layout = alloc_bs(&mut cnf, a, sig, n);

    // graph and forest variables
    let wtree_width = width_for((n - 1) as u64);
    let rbound_width = width_for((n * m) as u64);
    let all = copies(n, m);
    let nonroots: Vec<CopyId> = all.iter().copied().filter(|&(_, c)| c > 0).collect();

    for t in 0..n {
        for t2 in 0..n {
            cnf.alloc(VarTag::Edge { from: t, to: t2 });
        }
    }
    for &s in &all {
        for bit in 0..wtree_width {
            cnf.alloc(VarTag::WtreeBit { vertex: s, bit });
        }
    }
    for &s in &all {
        for &s2 in &nonroots {
            cnf.alloc(VarTag::BlueEdge { from: s, to: s2 });
        }
    }
    for &s in &all {
        for r in 0..n {
            cnf.alloc(VarTag::RedEdge {
                from: s,
                to_root: r,
            });
        }
    }
    for &s in &all {
        for t in 0..n {
            cnf.alloc(VarTag::Allowed {
                vertex: s,
                target: t,
            });
        }
    }
    for &s in &nonroots {
        cnf.alloc(VarTag::Used { vertex: s });
    }
    for slot in 0..m {
        for bit in 0..rbound_width {
            cnf.alloc(VarTag::RboundBit { slot, bit });
        }
    }
    let scc_layout = alloc_scc(&mut cnf, n);

    emit_bs(&mut cnf, a, sig, &bs_layout);
    let mut caches = SccCaches::default();
    emit_cs(
        &mut cnf,
        &bs_layout,
        &scc_layout,
        &mut caches,
        sig,
        n,
        m,
        wtree_width,
        rbound_width,
    );
    emit_scc(&mut cnf, &scc_layout, &mut caches);

    BocyEncoding {
        cnf,
        signals: sig.clone(),
        n,
        m,
        automaton_states: bs_layout.q_count,
        rejecting_count: bs_layout.k,
        annot_width: bs_layout.annot_width,
        wtree_width,
        rbound_width,
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_cs(
    cnf: &mut CnfInstance,
    _bs: &BsLayout,
    scc: &SccLayout,
    caches: &mut SccCaches,
    sig: &SignalSpace,
    n: usize,
    m: usize,
    wtree_width: u32,
    rbound_width: u32,
) {
    let valuations = sig.input_valuations() as u32;
    let all = copies(n, m);
    let nonroots: Vec<CopyId> = all.iter().copied().filter(|&(_, c)| c > 0).collect();

    // the guessed graph is exactly the machine's label-erased graph
    for t in 0..n {
        for t2 in 0..n {
            let e = cnf.var(&VarTag::Edge { from: t, to: t2 });
            let trans: Vec<Var> = (0..valuations)
                .map(|v| {
                    cnf.var(&VarTag::Trans {
                        from: t,
                        input: v,
                        to: t2,
                    })
                })
                .collect();
            for &tr in &trans {
                cnf.add_clause(&[neg(tr), pos(e)]);
            }
            let mut clause = vec![neg(e)];
            clause.extend(trans.iter().map(|&tr| pos(tr)));
            cnf.add_clause(&clause);
        }
    }

    // each root copy belongs to its own tree
    for r in 0..n {
        let bits = wtree_bits(cnf, wtree_width, (r, 0));
        assert_compare_if(
            cnf,
            &[],
            &var_bits(&bits),
            CmpRel::Eq,
            &crate::cnf::const_bits(r as u64, wtree_width),
        )
        .expect("tree id widths");
    }

    // red and blue edges stay within one tree
    for &s in &all {
        let s_bits = wtree_bits(cnf, wtree_width, s);
        for r in 0..n {
            let red = cnf.var(&VarTag::RedEdge {
                from: s,
                to_root: r,
            });
            for (i, &b) in s_bits.iter().enumerate() {
                let want = (r as u64) & (1 << (wtree_width - 1 - i as u32)) != 0;
                cnf.add_clause(&[neg(red), if want { pos(b) } else { neg(b) }]);
            }
        }
        for &s2 in &nonroots {
            let blue = cnf.var(&VarTag::BlueEdge { from: s, to: s2 });
            let s2_bits = wtree_bits(cnf, wtree_width, s2);
            for i in 0..s_bits.len() {
                cnf.add_clause(&[neg(blue), neg(s_bits[i]), pos(s2_bits[i])]);
                cnf.add_clause(&[neg(blue), pos(s_bits[i]), neg(s2_bits[i])]);
            }
        }
    }

    // a non-root copy is in use exactly when it has a blue parent, and it
    // has at most one; blue edges may only leave roots or used copies
    for &s2 in &nonroots {
        let used = cnf.var(&VarTag::Used { vertex: s2 });
        let parents: Vec<Var> = all
            .iter()
            .map(|&s| cnf.var(&VarTag::BlueEdge { from: s, to: s2 }))
            .collect();
        let mut clause = vec![neg(used)];
        clause.extend(parents.iter().map(|&p| pos(p)));
        cnf.add_clause(&clause);
        for &p in &parents {
            cnf.add_clause(&[neg(p), pos(used)]);
        }
        at_most_one_if(cnf, &[], &parents);
    }
    for &s in &nonroots {
        let used = cnf.var(&VarTag::Used { vertex: s });
        for &s2 in &nonroots {
            let blue = cnf.var(&VarTag::BlueEdge { from: s, to: s2 });
            cnf.add_clause(&[neg(blue), pos(used)]);
        }
    }

    // forest edges are backed by graph edges
    for &s in &all {
        let (t, _) = s;
        for r in 0..n {
            let red = cnf.var(&VarTag::RedEdge {
                from: s,
                to_root: r,
            });
            let e = cnf.var(&VarTag::Edge { from: t, to: r });
            cnf.add_clause(&[neg(red), pos(e)]);
        }
        for &s2 in &nonroots {
            let (t2, _) = s2;
            let blue = cnf.var(&VarTag::BlueEdge { from: s, to: s2 });
            let e = cnf.var(&VarTag::Edge { from: t, to: t2 });
            cnf.add_clause(&[neg(blue), pos(e)]);
        }
    }

    // reified "copy s sits in tree r"; root copies are statically known
    let mut weq: HashMap<(CopyId, usize), Lit> = HashMap::new();
    let mut tree_guard = |cnf: &mut CnfInstance, s: CopyId, r: usize| -> Option<Option<Lit>> {
        // None: statically false (skip row); Some(None): statically true
        if s.1 == 0 {
            return if s.0 == r { Some(None) } else { None };
        }
        let bits = wtree_bits(cnf, wtree_width, s);
        let lit = *weq
            .entry((s, r))
            .or_insert_with(|| reify_eq_const(cnf, &bits, r as u64));
        Some(Some(lit))
    };

    // every edge back to the root inside the root's component must be taken
    // as a red edge (completeness of the red list per tree)
    for r in 0..n {
        for &s in &all {
            let (t, c) = s;
            if t < r {
                continue; // not in this residual sub-graph
            }
            let Some(wguard) = tree_guard(cnf, s, r) else {
                continue;
            };
            let mut guard: Vec<Lit> = Vec::new();
            if c > 0 {
                guard.push(pos(cnf.var(&VarTag::Used { vertex: s })));
            }
            guard.push(pos(cnf.var(&VarTag::Edge { from: t, to: r })));
            if let Some(eq) = caches.eq_lit(cnf, scc, r, t, r) {
                guard.push(eq);
            }
            if let Some(w) = wguard {
                guard.push(w);
            }
            let red = cnf.var(&VarTag::RedEdge {
                from: s,
                to_root: r,
            });
            cnf.add_guarded(&guard, &[pos(red)]);
        }
    }

    // every edge to a vertex still allowed on the path must be taken as a
    // blue edge to some copy of that vertex
    for r in 0..n {
        for &s in &all {
            let (t, c) = s;
            if t < r {
                continue;
            }
            let Some(wguard) = tree_guard(cnf, s, r) else {
                continue;
            };
            for t2 in r..n {
                let mut guard: Vec<Lit> = Vec::new();
                if c > 0 {
                    guard.push(pos(cnf.var(&VarTag::Used { vertex: s })));
                }
                guard.push(pos(cnf.var(&VarTag::Edge { from: t, to: t2 })));
                if let Some(eq) = caches.eq_lit(cnf, scc, r, t, t2) {
                    guard.push(eq);
                }
                if let Some(w) = wguard {
                    guard.push(w);
                }
                guard.push(pos(cnf.var(&VarTag::Allowed {
                    vertex: s,
                    target: t2,
                })));
                let blues: Vec<Lit> = (1..m)
                    .map(|c2| {
                        pos(cnf.var(&VarTag::BlueEdge {
                            from: s,
                            to: (t2, c2),
                        }))
                    })
                    .collect();
                cnf.add_guarded(&guard, &blues);
            }
        }
    }

    // a root allows exactly the vertices above it in the fixed order
    for r in 0..n {
        for t in 0..n {
            let al = cnf.var(&VarTag::Allowed {
                vertex: (r, 0),
                target: t,
            });
            cnf.add_clause(&[if t <= r { neg(al) } else { pos(al) }]);
        }
    }

    // taking a blue edge consumes its target vertex: the child's allowed
    // set is the parent's minus the child's own label; blue edges may only
    // enter vertices the parent still allows
    for &s in &all {
        for &s2 in &nonroots {
            let (t2, _) = s2;
            let blue = cnf.var(&VarTag::BlueEdge { from: s, to: s2 });
            let parent_allows = cnf.var(&VarTag::Allowed {
                vertex: s,
                target: t2,
            });
            cnf.add_clause(&[neg(blue), pos(parent_allows)]);
            let child_self = cnf.var(&VarTag::Allowed {
                vertex: s2,
                target: t2,
            });
            cnf.add_clause(&[neg(blue), neg(child_self)]);
            for t3 in 0..n {
                if t3 == t2 {
                    continue;
                }
                let pa = cnf.var(&VarTag::Allowed {
                    vertex: s,
                    target: t3,
                });
                let ca = cnf.var(&VarTag::Allowed {
                    vertex: s2,
                    target: t3,
                });
                cnf.add_clause(&[neg(blue), neg(pa), pos(ca)]);
                cnf.add_clause(&[neg(blue), pos(pa), neg(ca)]);
            }
        }
    }

    // every red edge registers its vertex number in some slot of the
    // strictly ordered list, so at most m red edges exist overall
    let mut slot_eq: HashMap<(usize, u64), Lit> = HashMap::new();
    for &s in &all {
        let value = forest_number(s, m);
        for r in 0..n {
            let red = cnf.var(&VarTag::RedEdge {
                from: s,
                to_root: r,
            });
            let mut clause = vec![neg(red)];
            for slot in 0..m {
                let lit = *slot_eq.entry((slot, value)).or_insert_with(|| {
                    let bits = rbound_bits(cnf, rbound_width, slot);
                    let d = pos(cnf.fresh_aux());
                    for (i, &b) in bits.iter().enumerate() {
                        let want = value & (1 << (rbound_width - 1 - i as u32)) != 0;
                        cnf.add_clause(&[-d, if want { pos(b) } else { neg(b) }]);
                    }
                    d
                });
                clause.push(lit);
            }
            cnf.add_clause(&clause);
        }
    }
    for slot in 0..m.saturating_sub(1) {
        let a = rbound_bits(cnf, rbound_width, slot);
        let b = rbound_bits(cnf, rbound_width, slot + 1);
        assert_compare_if(cnf, &[], &var_bits(&a), CmpRel::Lt, &var_bits(&b))
            .expect("slot width");
    }
}

/// A decoded combined model: the machine, its label-erased graph, and the
/// validated witness forest.
pub struct BocyDecoded {
    pub machine: crate::machine::MealyMachine,
    pub graph: StateGraph,
    pub forest: WitnessForest,
}

/// Decodes the witness forest of a model: per tree, the copies reachable
/// from the root through blue edges, with their red edges. The forest is
/// validated against the decoded machine's graph; failure indicates an
/// encoder bug and is returned as an error.
pub fn decode_witness(
    enc: &BocyEncoding,
    model: &Model,
) -> Result<BocyDecoded, WitnessDecodeError> {
    let n = enc.n;
    let m = enc.m;
    let machine = machine_from_model(&enc.cnf, &enc.signals, n, model)
        .map_err(|e| WitnessDecodeError::Machine(e.to_string()))?;
    let graph = machine.abstract_graph();

    // guessed edge relation must match the machine graph exactly
    for t in 0..n {
        for t2 in 0..n {
            let e = model.value(enc.cnf.var(&VarTag::Edge { from: t, to: t2 }));
            if e != graph.has_edge(t, t2) {
                return Err(WitnessDecodeError::EdgeMismatch);
            }
        }
    }

    let mut trees = Vec::with_capacity(n);
    for r in 0..n {
        let mut tree = WitnessTree::bare(r);
        let mut vertex_of: HashMap<CopyId, usize> = HashMap::new();
        vertex_of.insert((r, 0), 0);
        let mut queue = vec![(r, 0)];
        while let Some(s) = queue.pop() {
            let sv = vertex_of[&s];
            for t2 in 0..n {
                for c2 in 1..m {
                    let s2 = (t2, c2);
                    if vertex_of.contains_key(&s2) {
                        continue;
                    }
                    if model.value(enc.cnf.var(&VarTag::BlueEdge { from: s, to: s2 })) {
                        let v2 = tree.labels.len();
                        tree.labels.push(t2);
                        tree.blue.push((sv, v2));
                        vertex_of.insert(s2, v2);
                        queue.push(s2);
                    }
                }
            }
        }
        // red edges from tree members back to this root
        let mut members: Vec<(CopyId, usize)> = vertex_of.into_iter().collect();
        members.sort_unstable();
        for (s, sv) in members {
            if model.value(enc.cnf.var(&VarTag::RedEdge {
                from: s,
                to_root: r,
            })) {
                tree.red.push(sv);
            }
        }
        trees.push(tree);
    }
    let forest = WitnessForest { trees };
    if forest.total_red() > m {
        return Err(WitnessDecodeError::TooManyRed {
            red: forest.total_red(),
            bound: m,
        });
    }
    validate_witness_forest(&forest, &graph, crate::cycles::DEFAULT_CYCLE_CAP)?;
    Ok(BocyDecoded {
        machine,
        graph,
        forest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ltl_to_uca;
    use crate::cycles::{count_cycles_scc, CycleCount, DEFAULT_CYCLE_CAP};
    use crate::encode::{decode_machine, encode_bs};
    use crate::graph::{component_of, tarjan_scc};
    use crate::ltl::parse_spec;
    use crate::solver::{SolveOutcome, SolverBackend, SplrBackend};
    use std::time::Duration;

    fn solve(cnf: &CnfInstance) -> SolveOutcome {
        SplrBackend.solve(cnf, Duration::from_secs(120))
    }

    #[test]
    fn one_state_one_cycle() {
        let spec = parse_spec("INPUTS:\nOUTPUTS: b\nSPEC: G b").unwrap();
        let uca = ltl_to_uca(&spec);
        let enc = encode_bocy(&uca, &spec.signals, 1, 1);
        let SolveOutcome::Sat(model) = solve(&enc.cnf) else {
            panic!("expected SAT at (1,1)");
        };
        let decoded = decode_witness(&enc, &model).unwrap();
        assert_eq!(decoded.forest.total_red(), 1);
        assert_eq!(
            count_cycles_scc(&decoded.graph, DEFAULT_CYCLE_CAP).count,
            CycleCount::Exact(1)
        );
        // the single tree is the root with one red self-closing edge
        assert_eq!(decoded.forest.trees[0].labels, vec![0]);
        assert_eq!(decoded.forest.trees[0].red, vec![0]);
    }

    #[test]
    fn iff_spec_needs_three_cycles_at_two_states() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a <-> X b)").unwrap();
        let uca = ltl_to_uca(&spec);
        // two states force the complete graph: three cycles
        let enc3 = encode_bocy(&uca, &spec.signals, 2, 3);
        let SolveOutcome::Sat(model) = solve(&enc3.cnf) else {
            panic!("expected SAT at (2,3)");
        };
        let decoded = decode_witness(&enc3, &model).unwrap();
        assert_eq!(
            count_cycles_scc(&decoded.graph, DEFAULT_CYCLE_CAP).count,
            CycleCount::Exact(3)
        );
        assert_eq!(decoded.forest.total_red(), 3);

        let enc2 = encode_bocy(&uca, &spec.signals, 2, 2);
        assert_eq!(solve(&enc2.cnf), SolveOutcome::Unsat);
    }

    #[test]
    fn decoded_scc_labels_match_tarjan() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a <-> X b)").unwrap();
        let uca = ltl_to_uca(&spec);
        let enc = encode_bocy(&uca, &spec.signals, 2, 3);
        let SolveOutcome::Sat(model) = solve(&enc.cnf) else {
            panic!("expected SAT");
        };
        let graph = decode_witness(&enc, &model).unwrap().graph;
        let width = crate::cnf::width_for((enc.n - 1) as u64);
        for k in 0..enc.n {
            let sub = graph.suffix_subgraph(k);
            let comps = tarjan_scc(&sub.adj);
            let comp_of = component_of(&comps, sub.n);
            for t in k..enc.n {
                for t2 in k..enc.n {
                    let read = |state: usize| -> u64 {
                        (0..width)
                            .map(|bit| {
                                model.value(enc.cnf.var(&VarTag::SccBit {
                                    subgraph: k,
                                    state,
                                    bit,
                                })) as u64
                            })
                            .fold(0, |acc, b| (acc << 1) | b)
                    };
                    assert_eq!(
                        read(t) == read(t2),
                        comp_of[t] == comp_of[t2],
                        "sub-graph {k}: {t} vs {t2}"
                    );
                }
            }
        }
    }

    #[test]
    fn variable_counts_match_closed_forms() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a -> X b)").unwrap();
        let uca = ltl_to_uca(&spec);
        let (n, m) = (3usize, 2usize);
        let enc = encode_bocy(&uca, &spec.signals, n, m);
        let q = enc.automaton_states;
        let v = spec.signals.input_valuations();
        let o = spec.signals.num_outputs();
        let w_ann = enc.annot_width as usize;
        let w_n = width_for((n - 1) as u64) as usize;
        let w_nm = width_for((n * m) as u64) as usize;
        let count = |pred: &dyn Fn(&VarTag) -> bool| enc.cnf.count_family(pred);

        assert_eq!(count(&|t| matches!(t, VarTag::Trans { .. })), n * v * n);
        assert_eq!(count(&|t| matches!(t, VarTag::Label { .. })), n * v * o);
        assert_eq!(count(&|t| matches!(t, VarTag::RgState { .. })), n * q);
        assert_eq!(count(&|t| matches!(t, VarTag::AnnotBit { .. })), n * q * w_ann);
        assert_eq!(count(&|t| matches!(t, VarTag::Edge { .. })), n * n);
        assert_eq!(count(&|t| matches!(t, VarTag::WtreeBit { .. })), n * m * w_n);
        assert_eq!(
            count(&|t| matches!(t, VarTag::BlueEdge { .. })),
            (n * m) * (n * (m - 1))
        );
        assert_eq!(count(&|t| matches!(t, VarTag::RedEdge { .. })), (n * m) * n);
        assert_eq!(count(&|t| matches!(t, VarTag::Allowed { .. })), (n * m) * n);
        assert_eq!(count(&|t| matches!(t, VarTag::Used { .. })), n * (m - 1));
        assert_eq!(count(&|t| matches!(t, VarTag::RboundBit { .. })), m * w_nm);
        let sum_sizes: usize = (0..n).map(|k| n - k).sum();
        let sum_squares: usize = (0..n).map(|k| (n - k) * (n - k)).sum();
        assert_eq!(count(&|t| matches!(t, VarTag::SccBit { .. })), sum_sizes * w_n);
        assert_eq!(count(&|t| matches!(t, VarTag::FwdEdge { .. })), sum_squares);
        assert_eq!(count(&|t| matches!(t, VarTag::BwdEdge { .. })), sum_squares);
        assert_eq!(count(&|t| matches!(t, VarTag::FrankBit { .. })), sum_sizes * w_n);
        assert_eq!(count(&|t| matches!(t, VarTag::BrankBit { .. })), sum_sizes * w_n);
    }

    #[test]
    fn cycle_bound_matches_plain_search_on_satisfiable_bounds() {
        // the cycle-bound instance is satisfiable exactly when the plain
        // instance is and a machine with few enough cycles exists
        let spec = parse_spec("INPUTS: a\nOUTPUTS: b\nSPEC: G (a -> X b)").unwrap();
        let uca = ltl_to_uca(&spec);
        let bs = encode_bs(&uca, &spec.signals, 1);
        let SolveOutcome::Sat(model) = solve(&bs.cnf) else {
            panic!("plain instance should be SAT at n=1");
        };
        let result = decode_machine(&bs, &uca, &model).unwrap();
        let count = count_cycles_scc(&result.machine.abstract_graph(), DEFAULT_CYCLE_CAP)
            .count
            .exact()
            .unwrap();
        assert_eq!(count, 1);

        let enc = encode_bocy(&uca, &spec.signals, 1, 1);
        let SolveOutcome::Sat(model) = solve(&enc.cnf) else {
            panic!("cycle-bound instance should be SAT at (1,1)");
        };
        let decoded = decode_witness(&enc, &model).unwrap();
        assert_eq!(decoded.forest.total_red(), 1);
        assert_eq!(
            count_cycles_scc(&decoded.graph, DEFAULT_CYCLE_CAP).count,
            CycleCount::Exact(1)
        );
    }
}
