//! Component labeling for every residual sub-graph.
//!
//! For each root index `k` the sub-graph contains the states with index at
//! least `k`. Each vertex guesses a component label; two spanning trees per
//! label class (one from the class root, one inverted back to it) prove
//! mutual reachability, and a total order over labels along graph edges
//! forces the guessed classes to be maximal. Together the labeling is
//! exactly the strongly-connected-component partition.

use std::collections::HashMap;

use crate::cnf::{
    assert_compare_if, exactly_one_if, neg, pos, reify_all_zero, reify_eq_const, reify_eq_vars,
    var_bits, width_for, CmpRel, CnfInstance, Lit, Var, VarTag,
};

pub(crate) struct SccLayout {
    pub n: usize,
    pub width: u32,
}

/// Reified-equality caches shared with the cycle-bound encoding, which
/// guards its completeness rows with the same component comparisons.
#[derive(Default)]
pub(crate) struct SccCaches {
    /// (sub-graph, t, t') with t < t' -> literal for label equality
    pub eqv: HashMap<(usize, usize, usize), Lit>,
}

impl SccCaches {
    /// Literal that is true iff `t` and `t2` carry the same component label
    /// in `subgraph`. `t == t2` yields no literal (trivially equal).
    pub fn eq_lit(
        &mut self,
        cnf: &mut CnfInstance,
        layout: &SccLayout,
        subgraph: usize,
        t: usize,
        t2: usize,
    ) -> Option<Lit> {
        if t == t2 {
            return None;
        }
        let key = (subgraph, t.min(t2), t.max(t2));
        Some(*self.eqv.entry(key).or_insert_with(|| {
            let a = scc_bits(cnf, layout, subgraph, key.1);
            let b = scc_bits(cnf, layout, subgraph, key.2);
            reify_eq_vars(cnf, &a, &b)
        }))
    }
}

pub(crate) fn scc_bits(
    cnf: &CnfInstance,
    layout: &SccLayout,
    subgraph: usize,
    state: usize,
) -> Vec<Var> {
    (0..layout.width)
        .map(|bit| {
            cnf.var(&VarTag::SccBit {
                subgraph,
                state,
                bit,
            })
        })
        .collect()
}

fn frank_bits(cnf: &CnfInstance, layout: &SccLayout, subgraph: usize, state: usize) -> Vec<Var> {
    (0..layout.width)
        .map(|bit| {
            cnf.var(&VarTag::FrankBit {
                subgraph,
                state,
                bit,
            })
        })
        .collect()
}

fn brank_bits(cnf: &CnfInstance, layout: &SccLayout, subgraph: usize, state: usize) -> Vec<Var> {
    (0..layout.width)
        .map(|bit| {
            cnf.var(&VarTag::BrankBit {
                subgraph,
                state,
                bit,
            })
        })
        .collect()
}

pub(crate) fn alloc_scc(cnf: &mut CnfInstance, n: usize) -> SccLayout {
    let width = width_for((n - 1) as u64);
    for k in 0..n {
        for t in k..n {
            for bit in 0..width {
                cnf.alloc(VarTag::SccBit {
                    subgraph: k,
                    state: t,
                    bit,
                });
            }
        }
        for t in k..n {
            for t2 in k..n {
                cnf.alloc(VarTag::FwdEdge {
                    subgraph: k,
                    from: t,
                    to: t2,
                });
            }
        }
        for t in k..n {
            for t2 in k..n {
                cnf.alloc(VarTag::BwdEdge {
                    subgraph: k,
                    from: t,
                    to: t2,
                });
            }
        }
        for t in k..n {
            for bit in 0..width {
                cnf.alloc(VarTag::FrankBit {
                    subgraph: k,
                    state: t,
                    bit,
                });
            }
        }
        for t in k..n {
            for bit in 0..width {
                cnf.alloc(VarTag::BrankBit {
                    subgraph: k,
                    state: t,
                    bit,
                });
            }
        }
    }
    SccLayout { n, width }
}

pub(crate) fn emit_scc(cnf: &mut CnfInstance, layout: &SccLayout, caches: &mut SccCaches) {
    let n = layout.n;
    for k in 0..n {
        let verts: Vec<usize> = (k..n).collect();

        // frank = 0 / brank = 0 flags per vertex
        let mut f0: HashMap<usize, Lit> = HashMap::new();
        let mut b0: HashMap<usize, Lit> = HashMap::new();
        for &t in &verts {
            let fb = frank_bits(cnf, layout, k, t);
            f0.insert(t, reify_all_zero(cnf, &fb));
            let bb = brank_bits(cnf, layout, k, t);
            b0.insert(t, reify_all_zero(cnf, &bb));
        }

        // labels are totally ordered along graph edges
        for &t in &verts {
            for &t2 in &verts {
                if t == t2 {
                    continue;
                }
                let e = cnf.var(&VarTag::Edge { from: t, to: t2 });
                let a = scc_bits(cnf, layout, k, t);
                let b = scc_bits(cnf, layout, k, t2);
                assert_compare_if(cnf, &[pos(e)], &var_bits(&a), CmpRel::Le, &var_bits(&b))
                    .expect("label width");
            }
        }

        // every used label value has a vertex with rank zero, and that
        // vertex is unique within the label class
        let value_count: u64 = 1u64 << layout.width;
        let mut eq_const: HashMap<(usize, u64), Lit> = HashMap::new();
        for &t in &verts {
            let bits = scc_bits(cnf, layout, k, t);
            for value in 0..value_count {
                eq_const.insert((t, value), reify_eq_const(cnf, &bits, value));
            }
        }
        for value in 0..value_count {
            // root existence: one "is root of this value" literal per vertex
            let mut roots = Vec::new();
            for &t in &verts {
                let g = pos(cnf.fresh_aux());
                cnf.add_clause(&[-g, eq_const[&(t, value)]]);
                cnf.add_clause(&[-g, f0[&t]]);
                roots.push(g);
            }
            for &t in &verts {
                let mut clause = vec![-eq_const[&(t, value)]];
                clause.extend(&roots);
                cnf.add_clause(&clause);
            }
        }
        for (i, &t) in verts.iter().enumerate() {
            for &t2 in &verts[i + 1..] {
                if let Some(eq) = caches.eq_lit(cnf, layout, k, t, t2) {
                    cnf.add_clause(&[-eq, -f0[&t], -f0[&t2]]);
                }
            }
        }

        // both rankings agree on the root
        for &t in &verts {
            cnf.add_clause(&[-f0[&t], b0[&t]]);
            cnf.add_clause(&[f0[&t], -b0[&t]]);
        }

        // roots have no incoming forward edge and no outgoing backward edge
        for &t2 in &verts {
            for &t in &verts {
                let fe = cnf.var(&VarTag::FwdEdge {
                    subgraph: k,
                    from: t,
                    to: t2,
                });
                cnf.add_clause(&[-f0[&t2], neg(fe)]);
                let be = cnf.var(&VarTag::BwdEdge {
                    subgraph: k,
                    from: t2,
                    to: t,
                });
                cnf.add_clause(&[-f0[&t2], neg(be)]);
            }
        }

        // non-roots: exactly one incoming forward edge, exactly one
        // outgoing backward edge
        for &t2 in &verts {
            let fwd: Vec<Var> = verts
                .iter()
                .map(|&t| {
                    cnf.var(&VarTag::FwdEdge {
                        subgraph: k,
                        from: t,
                        to: t2,
                    })
                })
                .collect();
            exactly_one_if(cnf, &[-f0[&t2]], &fwd).expect("non-empty");
            let bwd: Vec<Var> = verts
                .iter()
                .map(|&t| {
                    cnf.var(&VarTag::BwdEdge {
                        subgraph: k,
                        from: t2,
                        to: t,
                    })
                })
                .collect();
            exactly_one_if(cnf, &[-b0[&t2]], &bwd).expect("non-empty");
        }

        // rank monotonicity and edge backing with label equality
        for &t in &verts {
            for &t2 in &verts {
                let fe = cnf.var(&VarTag::FwdEdge {
                    subgraph: k,
                    from: t,
                    to: t2,
                });
                let fr = frank_bits(cnf, layout, k, t);
                let fr2 = frank_bits(cnf, layout, k, t2);
                assert_compare_if(cnf, &[pos(fe)], &var_bits(&fr), CmpRel::Lt, &var_bits(&fr2))
                    .expect("rank width");
                let be = cnf.var(&VarTag::BwdEdge {
                    subgraph: k,
                    from: t,
                    to: t2,
                });
                let br = brank_bits(cnf, layout, k, t);
                let br2 = brank_bits(cnf, layout, k, t2);
                assert_compare_if(cnf, &[pos(be)], &var_bits(&br), CmpRel::Gt, &var_bits(&br2))
                    .expect("rank width");

                let edge = cnf.var(&VarTag::Edge { from: t, to: t2 });
                cnf.add_clause(&[neg(fe), pos(edge)]);
                cnf.add_clause(&[neg(be), pos(edge)]);
                if let Some(eq) = caches.eq_lit(cnf, layout, k, t, t2) {
                    cnf.add_clause(&[neg(fe), eq]);
                    cnf.add_clause(&[neg(be), eq]);
                }
            }
        }
    }
}
