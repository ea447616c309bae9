//! Universal co-Büchi automata, the LTL translation, and run-graph
//! acceptance checking.
//!
//! The translation builds the nondeterministic Büchi automaton for the
//! negated formula with the classic tableau construction, degeneralizes it
//! with a counter, and reinterprets the result as a universal automaton
//! whose rejecting set is the Büchi acceptance set: a word satisfies the
//! formula exactly when no run of the negation automaton accepts it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{find_rejecting_lasso, VertexLasso};
use crate::ltl::{LassoWord, Letter, LtlFormula, SpecificationFile};
use crate::machine::MealyMachine;

/// Conjunction of signal literals; a letter satisfies the guard when it
/// contains every `pos` signal and none of the `neg` ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guard {
    pub pos: u64,
    pub neg: u64,
}

impl Guard {
    pub const TOP: Guard = Guard { pos: 0, neg: 0 };

    pub fn satisfied_by(&self, l: Letter) -> bool {
        (l.0 & self.pos) == self.pos && (l.0 & self.neg) == 0
    }

    pub fn is_consistent(&self) -> bool {
        self.pos & self.neg == 0
    }

    /// Every letter over `universe` (a bitmask of signal ids) satisfying the
    /// guard, in ascending mask order.
    pub fn satisfying_letters(&self, universe: u64) -> Vec<Letter> {
        if !self.is_consistent() {
            return Vec::new();
        }
        let free = universe & !self.pos & !self.neg;
        let mut letters = Vec::new();
        // iterate all submasks of `free`, ascending
        let mut sub = 0u64;
        loop {
            letters.push(Letter(self.pos | sub));
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        letters.sort_unstable();
        letters
    }
}

#[derive(Clone, Debug)]
pub struct UniversalCoBuchiAutomaton {
    pub num_states: usize,
    pub initial: usize,
    /// Outgoing guarded transitions per state, deterministic order.
    pub transitions: Vec<Vec<(Guard, usize)>>,
    pub rejecting: Vec<bool>,
}

impl UniversalCoBuchiAutomaton {
    pub fn num_rejecting(&self) -> usize {
        self.rejecting.iter().filter(|&&r| r).count()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(|t| t.len()).sum()
    }
}

// ---------------------------------------------------------------------------
// tableau construction for the negation automaton
// ---------------------------------------------------------------------------

type FormulaSet = BTreeSet<LtlFormula>;

#[derive(Clone, Debug)]
struct TabNode {
    incoming: BTreeSet<usize>,
    from_init: bool,
    old: FormulaSet,
    next: FormulaSet,
}

struct Tableau {
    nodes: Vec<TabNode>,
    by_key: BTreeMap<(FormulaSet, FormulaSet), usize>,
}

impl Tableau {
    /// Expands one proto-node; `new` holds unprocessed obligations.
    fn expand(
        &mut self,
        mut new: FormulaSet,
        mut old: FormulaSet,
        mut next: FormulaSet,
        incoming: BTreeSet<usize>,
        from_init: bool,
    ) {
        use LtlFormula::*;
        loop {
            let Some(f) = new.iter().next().cloned() else {
                // fully processed: merge with an existing node or create one
                let key = (old.clone(), next.clone());
                if let Some(&id) = self.by_key.get(&key) {
                    self.nodes[id].incoming.extend(incoming.iter().copied());
                    self.nodes[id].from_init |= from_init;
                    return;
                }
                let id = self.nodes.len();
                self.nodes.push(TabNode {
                    incoming,
                    from_init,
                    old: old.clone(),
                    next: next.clone(),
                });
                self.by_key.insert(key, id);
                let succ_new = self.nodes[id].next.clone();
                let mut inc = BTreeSet::new();
                inc.insert(id);
                self.expand(succ_new, FormulaSet::new(), FormulaSet::new(), inc, false);
                return;
            };
            new.remove(&f);
            match &f {
                True => {
                    old.insert(f);
                }
                False => return, // contradiction, drop this node
                Atom(s) => {
                    if old.contains(&Not(Box::new(Atom(*s)))) {
                        return;
                    }
                    old.insert(f);
                }
                Not(inner) => {
                    let Atom(s) = **inner else {
                        unreachable!("tableau input must be in NNF");
                    };
                    if old.contains(&Atom(s)) {
                        return;
                    }
                    old.insert(f);
                }
                And(a, b) => {
                    for g in [a, b] {
                        if !old.contains(g) {
                            new.insert((**g).clone());
                        }
                    }
                    old.insert(f);
                }
                Or(a, b) => {
                    let mut old2 = old.clone();
                    old2.insert(f.clone());
                    let mut new2 = new.clone();
                    if !old.contains(b) {
                        new2.insert((**b).clone());
                    }
                    self.expand(new2, old2, next.clone(), incoming.clone(), from_init);
                    if !old.contains(a) {
                        new.insert((**a).clone());
                    }
                    old.insert(f);
                }
                Next(a) => {
                    next.insert((**a).clone());
                    old.insert(f);
                }
                Until(a, b) => {
                    // a U b = b || (a && X(a U b))
                    let mut old2 = old.clone();
                    old2.insert(f.clone());
                    let mut new2 = new.clone();
                    if !old.contains(b) {
                        new2.insert((**b).clone());
                    }
                    self.expand(new2, old2, next.clone(), incoming.clone(), from_init);
                    if !old.contains(a) {
                        new.insert((**a).clone());
                    }
                    next.insert(f.clone());
                    old.insert(f);
                }
                Release(a, b) => {
                    // a R b = (a && b) || (b && X(a R b))
                    let mut old2 = old.clone();
                    old2.insert(f.clone());
                    let mut new2 = new.clone();
                    for g in [a, b] {
                        if !old.contains(g) {
                            new2.insert((**g).clone());
                        }
                    }
                    self.expand(new2, old2, next.clone(), incoming.clone(), from_init);
                    if !old.contains(b) {
                        new.insert((**b).clone());
                    }
                    next.insert(f.clone());
                    old.insert(f);
                }
                Implies(..) | Iff(..) | Finally(_) | Globally(_) => {
                    unreachable!("tableau input must be in NNF")
                }
            }
        }
    }
}

fn node_guard(old: &FormulaSet) -> Guard {
    use LtlFormula::*;
    let mut g = Guard::TOP;
    for f in old {
        match f {
            Atom(s) => g.pos |= 1 << s,
            Not(inner) => {
                if let Atom(s) = **inner {
                    g.neg |= 1 << s;
                }
            }
            _ => {}
        }
    }
    g
}

/// Until sub-formulas of an NNF formula in first-occurrence order. Their
/// order fixes the acceptance-set indices of the degeneralization.
fn until_subformulas(f: &LtlFormula) -> Vec<LtlFormula> {
    use LtlFormula::*;
    let mut out = Vec::new();
    fn walk(f: &LtlFormula, out: &mut Vec<LtlFormula>) {
        match f {
            Until(a, b) => {
                if !out.contains(f) {
                    out.push(f.clone());
                }
                walk(a, out);
                walk(b, out);
            }
            Release(a, b) | And(a, b) | Or(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Not(a) | Next(a) => walk(a, out),
            _ => {}
        }
    }
    walk(f, &mut out);
    out
}

/// Translates a specification into an equivalent universal co-Büchi
/// automaton: the tableau automaton of the negated formula, degeneralized,
/// with the Büchi acceptance set reinterpreted as the rejecting set.
pub fn ltl_to_uca(spec: &SpecificationFile) -> UniversalCoBuchiAutomaton {
    let negated = LtlFormula::not(spec.formula.clone()).to_nnf();
    nnf_negation_to_uca(&negated)
}

/// Core of [`ltl_to_uca`], starting from the NNF of the *negated* formula.
pub fn nnf_negation_to_uca(negated: &LtlFormula) -> UniversalCoBuchiAutomaton {
    debug_assert!(negated.is_nnf());
    let mut tab = Tableau {
        nodes: Vec::new(),
        by_key: BTreeMap::new(),
    };
    let mut new = FormulaSet::new();
    new.insert(negated.clone());
    tab.expand(new, FormulaSet::new(), FormulaSet::new(), BTreeSet::new(), true);

    let untils = until_subformulas(negated);
    // acceptance sets of the generalized automaton, one per Until
    let accept_sets: Vec<Vec<bool>> = untils
        .iter()
        .map(|u| {
            let LtlFormula::Until(_, rhs) = u else {
                unreachable!()
            };
            tab.nodes
                .iter()
                .map(|nd| !nd.old.contains(u) || nd.old.contains(rhs))
                .collect()
        })
        .collect();
    // no Until: any infinite run is accepting
    let k = accept_sets.len().max(1);
    let in_set = |q: usize, i: usize| -> bool {
        if accept_sets.is_empty() {
            true
        } else {
            accept_sets[i][q]
        }
    };

    // degeneralize with the counter construction; product states are
    // discovered by BFS from a fresh initial state
    let num_tab = tab.nodes.len();
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut transitions: Vec<Vec<(Guard, usize)>> = vec![Vec::new()];
    let mut accepting = vec![false];

    let intern = |q: usize,
                      i: usize,
                      ids: &mut BTreeMap<(usize, usize), usize>,
                      order: &mut Vec<(usize, usize)>,
                      transitions: &mut Vec<Vec<(Guard, usize)>>,
                      accepting: &mut Vec<bool>,
                      queue: &mut VecDeque<(usize, usize)>|
     -> usize {
        *ids.entry((q, i)).or_insert_with(|| {
            let id = transitions.len();
            order.push((q, i));
            transitions.push(Vec::new());
            accepting.push(i == 0 && in_set(q, 0));
            queue.push_back((q, i));
            id
        })
    };

    // initial pseudo-state 0: edges into every root tableau node, counter 0
    for q in 0..num_tab {
        if tab.nodes[q].from_init {
            let id = intern(
                q,
                0,
                &mut ids,
                &mut order,
                &mut transitions,
                &mut accepting,
                &mut queue,
            );
            transitions[0].push((node_guard(&tab.nodes[q].old), id));
        }
    }

    while let Some((q, i)) = queue.pop_front() {
        let from = ids[&(q, i)];
        let j = if in_set(q, i) { (i + 1) % k } else { i };
        let succs: Vec<usize> = (0..num_tab)
            .filter(|&q2| tab.nodes[q2].incoming.contains(&q))
            .collect();
        for q2 in succs {
            let to = intern(
                q2,
                j,
                &mut ids,
                &mut order,
                &mut transitions,
                &mut accepting,
                &mut queue,
            );
            transitions[from].push((node_guard(&tab.nodes[q2].old), to));
        }
    }

    UniversalCoBuchiAutomaton {
        num_states: transitions.len(),
        initial: 0,
        transitions,
        rejecting: accepting,
    }
}

// ---------------------------------------------------------------------------
// word membership and run graphs
// ---------------------------------------------------------------------------

/// True iff every run of the automaton over the word visits rejecting states
/// only finitely often: no lasso of the finite product of automaton states
/// and word positions passes through a rejecting product vertex.
pub fn uca_accepts_word(a: &UniversalCoBuchiAutomaton, w: &LassoWord) -> bool {
    let positions = w.prefix_len() + w.cycle_len();
    let succ_pos = |p: usize| -> usize {
        if p + 1 < positions {
            p + 1
        } else {
            w.prefix_len()
        }
    };
    let idx = |q: usize, p: usize| q * positions + p;
    let n = a.num_states * positions;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut rejecting = vec![false; n];
    for q in 0..a.num_states {
        for p in 0..positions {
            rejecting[idx(q, p)] = a.rejecting[q];
            let letter = w.letter(p);
            for &(g, q2) in &a.transitions[q] {
                if g.satisfied_by(letter) {
                    adj[idx(q, p)].push(idx(q2, succ_pos(p)));
                }
            }
        }
    }
    find_rejecting_lasso(&adj, idx(a.initial, 0), &rejecting).is_none()
}

/// Product of a Mealy machine and a universal co-Büchi automaton, restricted
/// to the part reachable from the pair of initial states.
#[derive(Clone, Debug)]
pub struct RunGraph {
    /// Product vertices `(machine state, automaton state)` in BFS order.
    pub vertices: Vec<(usize, usize)>,
    pub index: BTreeMap<(usize, usize), usize>,
    pub edges: Vec<Vec<usize>>,
    /// For each edge, one input valuation that drives it.
    pub edge_inputs: Vec<Vec<u32>>,
    pub rejecting: Vec<bool>,
}

impl RunGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
}

pub fn build_run_graph(m: &MealyMachine, a: &UniversalCoBuchiAutomaton) -> RunGraph {
    let mut index = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut edge_inputs: Vec<Vec<u32>> = Vec::new();
    let mut rejecting = Vec::new();
    let mut queue = VecDeque::new();

    let root = (m.initial, a.initial);
    index.insert(root, 0);
    vertices.push(root);
    edges.push(Vec::new());
    edge_inputs.push(Vec::new());
    rejecting.push(a.rejecting[a.initial]);
    queue.push_back(root);

    while let Some((t, q)) = queue.pop_front() {
        let from = index[&(t, q)];
        for v in 0..m.signals.input_valuations() as u32 {
            let t2 = m.step(t, v);
            let letter = m.signals.input_letter(v).union(Letter(m.output(t, v)));
            for &(g, q2) in &a.transitions[q] {
                if !g.satisfied_by(letter) {
                    continue;
                }
                let key = (t2, q2);
                let to = *index.entry(key).or_insert_with(|| {
                    let id = vertices.len();
                    vertices.push(key);
                    edges.push(Vec::new());
                    edge_inputs.push(Vec::new());
                    rejecting.push(a.rejecting[q2]);
                    queue.push_back(key);
                    id
                });
                if !edges[from].contains(&to) {
                    edges[from].push(to);
                    edge_inputs[from].push(v);
                }
            }
        }
    }

    RunGraph {
        vertices,
        index,
        edges,
        edge_inputs,
        rejecting,
    }
}

/// A rejecting lasso of a run graph together with the word it reads.
#[derive(Clone, Debug)]
pub struct RejectingLasso {
    pub vertices: VertexLasso,
    pub word: LassoWord,
}

/// Accepting iff no cycle of the run graph contains a rejecting vertex.
/// On failure returns a concrete lasso witnessing the rejected behaviour.
pub fn run_graph_accepting(g: &RunGraph, m: &MealyMachine) -> Result<(), Box<RejectingLasso>> {
    match find_rejecting_lasso(&g.edges, 0, &g.rejecting) {
        None => Ok(()),
        Some(vl) => {
            let letter_for = |from: usize, to: usize| -> Letter {
                let slot = g.edges[from]
                    .iter()
                    .position(|&w| w == to)
                    .expect("lasso edge must exist in the run graph");
                let v = g.edge_inputs[from][slot];
                let (t, _) = g.vertices[from];
                m.signals.input_letter(v).union(Letter(m.output(t, v)))
            };
            let mut prefix = Vec::new();
            let full: Vec<usize> = vl.prefix.iter().chain(vl.cycle.iter()).copied().collect();
            for i in 0..vl.prefix.len() {
                prefix.push(letter_for(full[i], full[i + 1]));
            }
            let mut cycle = Vec::new();
            for i in 0..vl.cycle.len() {
                let from = vl.cycle[i];
                let to = if i + 1 < vl.cycle.len() {
                    vl.cycle[i + 1]
                } else {
                    vl.cycle[0]
                };
                cycle.push(letter_for(from, to));
            }
            let word = LassoWord::new(prefix, cycle).expect("rejecting cycle is non-empty");
            Err(Box::new(RejectingLasso {
                vertices: vl,
                word,
            }))
        }
    }
}

/// Convenience wrapper: machine accepted by the automaton.
pub fn machine_accepted(m: &MealyMachine, a: &UniversalCoBuchiAutomaton) -> bool {
    run_graph_accepting(&build_run_graph(m, a), m).is_ok()
}
