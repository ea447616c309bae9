//! Simple-cycle counting and enumeration, and the witness forests that
//! certify cycle counts.
//!
//! Two enumeration routes are kept side by side: the plain unfold-per-root
//! search and the variant that first restricts each unfolding to the root's
//! strongly connected component. A brute-force enumerator over vertex
//! sequences serves as the reference oracle in tests.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{component_of, tarjan_scc};
use crate::machine::StateGraph;

/// Default cap on the number of counted cycles.
pub const DEFAULT_CYCLE_CAP: u64 = 10_000_000;

/// A simple cycle, stored rotation-normalized: the vertex sequence starts at
/// the minimal vertex and consecutive entries (wrapping around) are edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    pub fn new(seq: Vec<usize>) -> Cycle {
        assert!(!seq.is_empty(), "cycle must be non-empty");
        let min_idx = seq
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let mut rotated = Vec::with_capacity(seq.len());
        rotated.extend_from_slice(&seq[min_idx..]);
        rotated.extend_from_slice(&seq[..min_idx]);
        Cycle(rotated)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Exact count, or an aborted count that exceeded the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleCount {
    Exact(u64),
    MoreThan(u64),
}

impl CycleCount {
    pub fn render(&self) -> String {
        match self {
            CycleCount::Exact(c) => c.to_string(),
            CycleCount::MoreThan(cap) => format!("> {cap}"),
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            CycleCount::Exact(c) => Some(*c),
            CycleCount::MoreThan(_) => None,
        }
    }
}

/// Result of a cycle search. `cycles` is the complete list only when the
/// count is exact; an aborted search drops the partial list.
#[derive(Clone, Debug)]
pub struct CycleSearch {
    pub count: CycleCount,
    pub cycles: Vec<Cycle>,
    /// Number of search-tree node expansions performed.
    pub steps: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("cycle cap of {0} exceeded during witness extraction")]
    CapExceeded(u64),
}

struct Unfold<'a> {
    g: &'a StateGraph,
    root: usize,
    /// vertex -> currently on the search path
    on_path: Vec<bool>,
    path: Vec<usize>,
    /// restrict expansion to these vertices (the root's SCC); `None` means
    /// every vertex of the residual graph is allowed
    scope: Option<&'a [bool]>,
    cycles: Vec<Cycle>,
    found: u64,
    cap: u64,
    steps: u64,
    overflow: bool,
}

impl Unfold<'_> {
    fn dfs(&mut self, v: usize) {
        self.steps += 1;
        let succs = self.g.adj[v].clone();
        for w in succs {
            if self.overflow {
                return;
            }
            if w < self.root {
                continue; // removed with earlier roots
            }
            if let Some(scope) = self.scope {
                if !scope[w] {
                    continue;
                }
            }
            if w == self.root {
                if self.found == self.cap {
                    self.overflow = true;
                    return;
                }
                self.found += 1;
                self.cycles.push(Cycle::new(self.path.clone()));
            } else if !self.on_path[w] {
                self.on_path[w] = true;
                self.path.push(w);
                self.dfs(w);
                self.path.pop();
                self.on_path[w] = false;
            }
        }
    }
}

fn search(g: &StateGraph, cap: u64, scc_restricted: bool) -> CycleSearch {
    let mut cycles = Vec::new();
    let mut found = 0u64;
    let mut steps = 0u64;
    for root in 0..g.n {
        let residual = g.suffix_subgraph(root);
        let scope_vec: Option<Vec<bool>> = if scc_restricted {
            let comps = tarjan_scc(&residual.adj);
            let comp_of = component_of(&comps, residual.n);
            let root_comp = comp_of[root];
            let comp = &comps[root_comp];
            if comp.len() == 1 && !residual.has_edge(root, root) {
                continue; // no cycle can pass through this root
            }
            let mut mask = vec![false; residual.n];
            for &v in comp {
                mask[v] = true;
            }
            Some(mask)
        } else {
            None
        };
        let mut unfold = Unfold {
            g: &residual,
            root,
            on_path: vec![false; residual.n],
            path: vec![root],
            scope: scope_vec.as_deref(),
            cycles: Vec::new(),
            found,
            cap,
            steps,
            overflow: false,
        };
        unfold.on_path[root] = true;
        unfold.dfs(root);
        steps = unfold.steps;
        found = unfold.found;
        if unfold.overflow {
            return CycleSearch {
                count: CycleCount::MoreThan(cap),
                cycles: Vec::new(),
                steps,
            };
        }
        cycles.extend(unfold.cycles);
    }
    CycleSearch {
        count: CycleCount::Exact(found),
        cycles,
        steps,
    }
}

/// Cycle search by per-root unfolding: pick each root in ascending vertex
/// order, unfold the residual graph into a tree forbidding repeats except
/// edges closing at the root, then drop the root and continue.
pub fn count_cycles_tiernan(g: &StateGraph, cap: u64) -> CycleSearch {
    search(g, cap, false)
}

/// Same output as [`count_cycles_tiernan`], but each per-root unfolding is
/// restricted to the root's strongly connected component of the residual
/// graph, which keeps the work between two detected cycles small.
pub fn count_cycles_scc(g: &StateGraph, cap: u64) -> CycleSearch {
    search(g, cap, true)
}

/// Reference enumeration: every sequence of distinct vertices that closes a
/// cycle, deduplicated up to rotation. Exponential; test-scale graphs only.
pub fn enumerate_cycles_bruteforce(g: &StateGraph) -> Vec<Cycle> {
    let mut out: BTreeSet<Cycle> = BTreeSet::new();
    // sequences starting at their minimal vertex, so each cycle appears once
    fn extend(
        g: &StateGraph,
        start: usize,
        v: usize,
        used: &mut Vec<bool>,
        seq: &mut Vec<usize>,
        out: &mut BTreeSet<Cycle>,
    ) {
        for &w in &g.adj[v] {
            if w == start {
                out.insert(Cycle::new(seq.clone()));
            } else if w > start && !used[w] {
                used[w] = true;
                seq.push(w);
                extend(g, start, w, used, seq, out);
                seq.pop();
                used[w] = false;
            }
        }
    }
    for start in 0..g.n {
        let mut used = vec![false; g.n];
        used[start] = true;
        let mut seq = vec![start];
        extend(g, start, start, &mut used, &mut seq, &mut out);
    }
    out.into_iter().collect()
}

/// Checks the outdegree bound on the cycle count: a graph with maximal
/// outdegree `d` has at most `(d+1)^n` cycles.
pub fn check_lemma1_bound(g: &StateGraph, cap: u64) -> bool {
    let base = (g.max_outdegree() + 1) as u128;
    let mut bound: u128 = 1;
    for _ in 0..g.n {
        bound = bound.saturating_mul(base);
    }
    match count_cycles_scc(g, cap).count {
        CycleCount::Exact(c) => (c as u128) <= bound,
        // an aborted count only refutes the bound if the cap alone exceeds it
        CycleCount::MoreThan(cap) => (cap as u128) < bound,
    }
}

// ---------------------------------------------------------------------------
// witness forests
// ---------------------------------------------------------------------------

/// One unfolding tree. Vertex 0 is the root and carries label `root`; blue
/// edges are tree edges, red edges close back at the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessTree {
    pub root: usize,
    /// Graph label per tree vertex; `labels[0] == root`.
    pub labels: Vec<usize>,
    /// Blue (tree) edges as `(parent, child)` vertex indices.
    pub blue: Vec<(usize, usize)>,
    /// Sources of red edges; the target is always vertex 0.
    pub red: Vec<usize>,
}

impl WitnessTree {
    pub fn bare(root: usize) -> WitnessTree {
        WitnessTree {
            root,
            labels: vec![root],
            blue: Vec::new(),
            red: Vec::new(),
        }
    }
}

/// One witness tree per graph vertex, in vertex order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessForest {
    pub trees: Vec<WitnessTree>,
}

impl WitnessForest {
    pub fn total_red(&self) -> usize {
        self.trees.iter().map(|t| t.red.len()).sum()
    }

    pub fn red_per_root(&self) -> Vec<usize> {
        self.trees.iter().map(|t| t.red.len()).collect()
    }

    pub fn total_vertices(&self) -> usize {
        self.trees.iter().map(|t| t.labels.len()).sum()
    }
}

/// Violated witness-forest condition, with the offending tree and details.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessViolation {
    #[error("tree {root}: vertex/edge indices out of range")]
    Malformed { root: usize },
    #[error("tree {root}: root label is {found}, expected the root vertex itself")]
    RootLabel { root: usize, found: usize },
    #[error("tree {root}: blue edge into the root")]
    BlueIntoRoot { root: usize },
    #[error("tree {root}: vertex {vertex} has no blue incoming edge")]
    MissingBlueParent { root: usize, vertex: usize },
    #[error("tree {root}: vertex {vertex} has more than one blue incoming edge")]
    MultipleBlueParents { root: usize, vertex: usize },
    #[error("tree {root}: blue edges do not form a tree rooted at the root")]
    NotATree { root: usize },
    #[error("tree {root}: edge ({from},{to}) has no backing graph edge {gf}->{gt}")]
    UnbackedEdge {
        root: usize,
        from: usize,
        to: usize,
        gf: usize,
        gt: usize,
    },
    #[error("tree {root}: vertex {vertex} misses a successor labeled {missing}")]
    Incomplete {
        root: usize,
        vertex: usize,
        missing: usize,
    },
    #[error("tree {root}: label {label} repeats on a root-to-leaf path")]
    RepeatedLabel { root: usize, label: usize },
    #[error("forest has {trees} trees for a graph with {vertices} vertices")]
    WrongShape { trees: usize, vertices: usize },
    #[error("witness admits {red} cycles but the graph has more ({count})")]
    BoundViolated { red: u64, count: u64 },
}

/// Successful validation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub red_per_root: Vec<usize>,
    pub total_red: usize,
    /// Cycle count of the graph, recomputed independently.
    pub cycle_count: CycleCount,
}

/// Checks every tree of the forest against the witness conditions and then
/// verifies the certified bound: the graph's cycle count (recomputed) must
/// not exceed the total number of red edges.
pub fn validate_witness_forest(
    forest: &WitnessForest,
    g: &StateGraph,
    cap: u64,
) -> Result<WitnessReport, WitnessViolation> {
    if forest.trees.len() != g.n {
        return Err(WitnessViolation::WrongShape {
            trees: forest.trees.len(),
            vertices: g.n,
        });
    }
    for (r, tree) in forest.trees.iter().enumerate() {
        if tree.root != r {
            return Err(WitnessViolation::RootLabel {
                root: r,
                found: tree.root,
            });
        }
        validate_tree(tree, g)?;
    }
    let count = count_cycles_scc(g, cap).count;
    let red = forest.total_red() as u64;
    if let CycleCount::Exact(c) = count {
        if c > red {
            return Err(WitnessViolation::BoundViolated { red, count: c });
        }
    } else {
        return Err(WitnessViolation::BoundViolated { red, count: cap });
    }
    Ok(WitnessReport {
        red_per_root: forest.red_per_root(),
        total_red: forest.total_red(),
        cycle_count: count,
    })
}

fn validate_tree(tree: &WitnessTree, g: &StateGraph) -> Result<(), WitnessViolation> {
    let r = tree.root;
    let nv = tree.labels.len();
    if nv == 0
        || tree
            .blue
            .iter()
            .any(|&(a, b)| a >= nv || b >= nv)
        || tree.red.iter().any(|&a| a >= nv)
        || tree.labels.iter().any(|&l| l >= g.n)
    {
        return Err(WitnessViolation::Malformed { root: r });
    }
    if tree.labels[0] != r {
        return Err(WitnessViolation::RootLabel {
            root: r,
            found: tree.labels[0],
        });
    }

    // no blue edge may enter the root
    if tree.blue.iter().any(|&(_, b)| b == 0) {
        return Err(WitnessViolation::BlueIntoRoot { root: r });
    }
    // each non-root has exactly one blue incoming edge
    let mut parent = vec![usize::MAX; nv];
    for &(a, b) in &tree.blue {
        if parent[b] != usize::MAX {
            return Err(WitnessViolation::MultipleBlueParents { root: r, vertex: b });
        }
        parent[b] = a;
    }
    for v in 1..nv {
        if parent[v] == usize::MAX {
            return Err(WitnessViolation::MissingBlueParent { root: r, vertex: v });
        }
    }
    // parent pointers must reach the root without cycles
    for v in 1..nv {
        let mut cur = v;
        let mut hops = 0;
        while cur != 0 {
            cur = parent[cur];
            hops += 1;
            if hops > nv {
                return Err(WitnessViolation::NotATree { root: r });
            }
        }
    }

    // every edge must be backed by a graph edge
    for &(a, b) in &tree.blue {
        if !g.has_edge(tree.labels[a], tree.labels[b]) {
            return Err(WitnessViolation::UnbackedEdge {
                root: r,
                from: a,
                to: b,
                gf: tree.labels[a],
                gt: tree.labels[b],
            });
        }
    }
    for &a in &tree.red {
        if !g.has_edge(tree.labels[a], r) {
            return Err(WitnessViolation::UnbackedEdge {
                root: r,
                from: a,
                to: 0,
                gf: tree.labels[a],
                gt: r,
            });
        }
    }

    // labels along any root-to-leaf blue path must be distinct
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(a, b) in &tree.blue {
        children[a].push(b);
    }
    let mut stack = vec![(0usize, {
        let mut s = BTreeSet::new();
        s.insert(tree.labels[0]);
        s
    })];
    let mut path_labels: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nv];
    while let Some((v, seen)) = stack.pop() {
        path_labels[v] = seen.clone();
        for &c in &children[v] {
            let lab = tree.labels[c];
            if seen.contains(&lab) {
                return Err(WitnessViolation::RepeatedLabel { root: r, label: lab });
            }
            let mut s2 = seen.clone();
            s2.insert(lab);
            stack.push((c, s2));
        }
    }

    // completeness relative to the unfolding discipline: inside the root's
    // component of the residual graph, a vertex must take every edge either
    // as a red edge (back to the root) or as a blue edge to any label not
    // yet on its path
    let residual = g.suffix_subgraph(r);
    let comps = tarjan_scc(&residual.adj);
    let comp_of = component_of(&comps, residual.n);
    let root_comp = comp_of[r];
    let mut red_sources: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nv];
    for &a in &tree.red {
        red_sources[a].insert(r);
    }
    for v in 0..nv {
        let lab = tree.labels[v];
        if lab < r || comp_of[lab] != root_comp {
            continue; // vertices outside the root's component carry no duty
        }
        let child_labels: BTreeSet<usize> = children[v].iter().map(|&c| tree.labels[c]).collect();
        for &succ in &residual.adj[lab] {
            if comp_of[succ] != root_comp {
                continue;
            }
            if succ == r {
                if !red_sources[v].contains(&r) {
                    return Err(WitnessViolation::Incomplete {
                        root: r,
                        vertex: v,
                        missing: r,
                    });
                }
            } else if !path_labels[v].contains(&succ) && !child_labels.contains(&succ) {
                return Err(WitnessViolation::Incomplete {
                    root: r,
                    vertex: v,
                    missing: succ,
                });
            }
        }
    }
    Ok(())
}

/// Builds the witness forest by unfolding the graph per root with the same
/// strategy as the cycle search: one tree per root over the root's component
/// of the residual graph, coloring edges red exactly when they close at the
/// root. Red totals equal the per-root cycle counts.
pub fn extract_witness_from_graph(
    g: &StateGraph,
    cap: u64,
) -> Result<WitnessForest, CycleError> {
    let mut trees = Vec::with_capacity(g.n);
    let mut total_red = 0u64;
    for root in 0..g.n {
        let residual = g.suffix_subgraph(root);
        let comps = tarjan_scc(&residual.adj);
        let comp_of = component_of(&comps, residual.n);
        let root_comp = comp_of[root];
        let in_scope: Vec<bool> = (0..residual.n).map(|v| comp_of[v] == root_comp).collect();
        if comps[root_comp].len() == 1 && !residual.has_edge(root, root) {
            trees.push(WitnessTree::bare(root));
            continue;
        }

        let mut tree = WitnessTree::bare(root);
        struct Ctx<'a> {
            residual: &'a StateGraph,
            in_scope: &'a [bool],
            root: usize,
            tree: &'a mut WitnessTree,
            on_path: Vec<bool>,
            red: u64,
            cap: u64,
        }
        fn unfold(ctx: &mut Ctx, v_tree: usize, v_lab: usize) -> Result<(), CycleError> {
            let succs = ctx.residual.adj[v_lab].clone();
            for w in succs {
                if !ctx.in_scope[w] {
                    continue;
                }
                if w == ctx.root {
                    if ctx.red == ctx.cap {
                        return Err(CycleError::CapExceeded(ctx.cap));
                    }
                    ctx.red += 1;
                    ctx.tree.red.push(v_tree);
                } else if !ctx.on_path[w] {
                    let child = ctx.tree.labels.len();
                    ctx.tree.labels.push(w);
                    ctx.tree.blue.push((v_tree, child));
                    ctx.on_path[w] = true;
                    unfold(ctx, child, w)?;
                    ctx.on_path[w] = false;
                }
            }
            Ok(())
        }
        let mut on_path = vec![false; residual.n];
        on_path[root] = true;
        let mut ctx = Ctx {
            residual: &residual,
            in_scope: &in_scope,
            root,
            tree: &mut tree,
            on_path,
            red: total_red,
            cap,
        };
        unfold(&mut ctx, 0, root)?;
        total_red = ctx.red;
        trees.push(tree);
    }
    Ok(WitnessForest { trees })
}
