//! Small directed-graph helpers shared by the automata and cycle modules:
//! Tarjan SCC decomposition and the search for a lasso through a rejecting
//! vertex.

use std::collections::VecDeque;

/// Tarjan SCC on an adjacency list. Components are returned in reverse
/// topological order; vertices inside a component keep discovery order.
pub fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }

    // iterative DFS to stay safe on deep product graphs
    fn connect(v0: usize, st: &mut State) {
        let mut call: Vec<(usize, usize)> = vec![(v0, 0)];
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                st.idx[v] = Some(st.index);
                st.low[v] = st.index;
                st.index += 1;
                st.stack.push(v);
                st.on_stack[v] = true;
            }
            if *ei < st.adj[v].len() {
                let w = st.adj[v][*ei];
                *ei += 1;
                match st.idx[w] {
                    None => call.push((w, 0)),
                    Some(wi) => {
                        if st.on_stack[w] {
                            st.low[v] = st.low[v].min(wi);
                        }
                    }
                }
            } else {
                if st.low[v] == st.idx[v].unwrap() {
                    let mut comp = Vec::new();
                    loop {
                        let w = st.stack.pop().expect("tarjan stack underflow");
                        st.on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.reverse();
                    st.comps.push(comp);
                }
                call.pop();
                if let Some(&mut (p, _)) = call.last_mut() {
                    st.low[p] = st.low[p].min(st.low[v]);
                }
            }
        }
    }

    let n = adj.len();
    let mut st = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comps
}

/// Maps each vertex to the index of its component in `comps`.
pub fn component_of(comps: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut map = vec![usize::MAX; n];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            map[v] = ci;
        }
    }
    map
}

/// A concrete lasso through the vertex set: `prefix` leads from the start
/// vertex to `cycle[0]`, and `cycle` returns to its own first vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

fn bfs_path(adj: &[Vec<usize>], from: usize, to: usize, allowed: Option<&[bool]>) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    // `to == from` asks for a non-trivial closed walk, handled by the caller
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if let Some(mask) = allowed {
                if !mask[w] {
                    continue;
                }
            }
            if w == to {
                let mut path = vec![to];
                let mut cur = v;
                while cur != from {
                    path.push(cur);
                    cur = parent[cur];
                }
                path.push(from);
                path.reverse();
                return Some(path);
            }
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Searches for a reachable cycle through a rejecting vertex. Returns `None`
/// when every cycle reachable from `start` avoids rejecting vertices.
pub fn find_rejecting_lasso(
    adj: &[Vec<usize>],
    start: usize,
    rejecting: &[bool],
) -> Option<VertexLasso> {
    let n = adj.len();
    if n == 0 {
        return None;
    }

    // reachable set
    let mut reach = vec![false; n];
    let mut queue = VecDeque::new();
    reach[start] = true;
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !reach[w] {
                reach[w] = true;
                queue.push_back(w);
            }
        }
    }

    let comps = tarjan_scc(adj);
    let comp_of = component_of(&comps, n);

    for v in 0..n {
        if !reach[v] || !rejecting[v] {
            continue;
        }
        let comp = &comps[comp_of[v]];
        let cyclic = comp.len() > 1 || adj[v].contains(&v);
        if !cyclic {
            continue;
        }
        // restrict the cycle search to v's component
        let mut mask = vec![false; n];
        for &w in comp {
            mask[w] = true;
        }
        let cycle_path = if adj[v].contains(&v) && comp.len() == 1 {
            vec![v, v]
        } else {
            bfs_path(adj, v, v, Some(&mask)).expect("vertex in nontrivial SCC must close a cycle")
        };
        let mut prefix = bfs_path(adj, start, v, None).unwrap_or_else(|| vec![start]);
        if start == v {
            prefix = vec![start];
        }
        // prefix ends at v == cycle_path[0]; drop the duplicated endpoint
        let cycle = cycle_path[..cycle_path.len() - 1].to_vec();
        prefix.pop();
        return Some(VertexLasso { prefix, cycle });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_splits_components() {
        // 0 -> 1 -> 2 -> 0 is one SCC, 3 alone
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![]];
        let comps = tarjan_scc(&adj);
        assert_eq!(comps.len(), 2);
        let comp_of = component_of(&comps, 4);
        assert_eq!(comp_of[0], comp_of[1]);
        assert_eq!(comp_of[1], comp_of[2]);
        assert_ne!(comp_of[0], comp_of[3]);
    }

    #[test]
    fn rejecting_self_loop_found() {
        let adj = vec![vec![1], vec![1]];
        let rejecting = vec![false, true];
        let lasso = find_rejecting_lasso(&adj, 0, &rejecting).unwrap();
        assert_eq!(lasso.prefix, vec![0]);
        assert_eq!(lasso.cycle, vec![1]);
    }

    #[test]
    fn acyclic_rejecting_vertex_is_fine() {
        let adj = vec![vec![1], vec![2], vec![2]];
        let rejecting = vec![false, true, false];
        assert!(find_rejecting_lasso(&adj, 0, &rejecting).is_none());
    }

    #[test]
    fn unreachable_rejecting_cycle_is_fine() {
        let adj = vec![vec![0], vec![1]];
        let rejecting = vec![false, true];
        assert!(find_rejecting_lasso(&adj, 0, &rejecting).is_none());
    }
}
