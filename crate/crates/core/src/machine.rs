//! Mealy machines, their path semantics, and the label-erased state graph
//! on which cycles are counted.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ltl::{LassoWord, Letter, SignalSpace, SpecError};

/// A Mealy machine with total transition and output functions. Outputs
/// depend on the current state and the current input valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    pub signals: SignalSpace,
    pub num_states: usize,
    pub initial: usize,
    /// `delta[state][input valuation]` — successor state.
    delta: Vec<Vec<usize>>,
    /// `lambda[state][input valuation]` — emitted outputs as a letter mask.
    lambda: Vec<Vec<u64>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("machine must have at least one state")]
    NoStates,
    #[error("initial state {0} out of range")]
    BadInitial(usize),
    #[error("delta/lambda must be total over states x input valuations")]
    NotTotal,
    #[error("state {0} out of range in transition table")]
    BadTarget(usize),
    #[error("output mask uses non-output signals")]
    BadOutput,
    #[error("machine text format: {0}")]
    Format(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

impl MealyMachine {
    pub fn new(
        signals: SignalSpace,
        num_states: usize,
        initial: usize,
        delta: Vec<Vec<usize>>,
        lambda: Vec<Vec<u64>>,
    ) -> Result<Self, MachineError> {
        if num_states == 0 {
            return Err(MachineError::NoStates);
        }
        if initial >= num_states {
            return Err(MachineError::BadInitial(initial));
        }
        let valuations = signals.input_valuations();
        if delta.len() != num_states
            || lambda.len() != num_states
            || delta.iter().any(|row| row.len() != valuations)
            || lambda.iter().any(|row| row.len() != valuations)
        {
            return Err(MachineError::NotTotal);
        }
        if let Some(&t) = delta.iter().flatten().find(|&&t| t >= num_states) {
            return Err(MachineError::BadTarget(t));
        }
        let out_mask = signals.output_mask();
        if lambda.iter().flatten().any(|&o| o & !out_mask != 0) {
            return Err(MachineError::BadOutput);
        }
        Ok(MealyMachine {
            signals,
            num_states,
            initial,
            delta,
            lambda,
        })
    }

    pub fn step(&self, state: usize, valuation: u32) -> usize {
        self.delta[state][valuation as usize]
    }

    /// Output letter mask for `state` under `valuation`.
    pub fn output(&self, state: usize, valuation: u32) -> u64 {
        self.lambda[state][valuation as usize]
    }

    /// The label-erased graph: one edge `(t, t')` per pair with some input
    /// valuation leading from `t` to `t'`. Vertex order is state order,
    /// adjacency is sorted.
    pub fn abstract_graph(&self) -> StateGraph {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.num_states];
        for t in 0..self.num_states {
            let mut succs: Vec<usize> = self.delta[t].clone();
            succs.sort_unstable();
            succs.dedup();
            adj[t] = succs;
        }
        StateGraph {
            n: self.num_states,
            adj,
        }
    }

    /// Drives the machine with an input lasso and returns the unique induced
    /// word (inputs joined with emitted outputs), folded back into lasso
    /// shape once the machine/input configuration repeats.
    pub fn path_word(&self, input: &LassoWord) -> LassoWord {
        let period = input.prefix_len() + input.cycle_len();
        let mut seen: Vec<Vec<Option<usize>>> = vec![vec![None; period]; self.num_states];
        let mut letters: Vec<Letter> = Vec::new();
        let mut state = self.initial;
        let mut pos = 0usize;
        loop {
            let norm = input.normalize_pos(pos);
            if let Some(start) = seen[state][norm] {
                let prefix = letters[..start].to_vec();
                let cycle = letters[start..].to_vec();
                return LassoWord::new(prefix, cycle).expect("configuration cycle is non-empty");
            }
            seen[state][norm] = Some(letters.len());
            let v = self.signals.input_index(input.letter(pos));
            let letter = self
                .signals
                .input_letter(v)
                .union(Letter(self.output(state, v)));
            letters.push(letter);
            state = self.step(state, v);
            pos += 1;
        }
    }

    /// Text format, one line per `(state, input)` pair:
    /// `state {inputs} -> state / {outputs}`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let inputs: Vec<&str> = self
            .signals
            .inputs()
            .into_iter()
            .map(|i| self.signals.name(i))
            .collect();
        let outputs: Vec<&str> = self
            .signals
            .outputs()
            .into_iter()
            .map(|i| self.signals.name(i))
            .collect();
        writeln!(s, "inputs: {}", inputs.join(" ")).unwrap();
        writeln!(s, "outputs: {}", outputs.join(" ")).unwrap();
        writeln!(s, "states: {}", self.num_states).unwrap();
        writeln!(s, "initial: {}", self.initial).unwrap();
        for t in 0..self.num_states {
            for v in 0..self.signals.input_valuations() as u32 {
                writeln!(
                    s,
                    "{} {} -> {} / {}",
                    t,
                    self.signals.format_letter(self.signals.input_letter(v)),
                    self.step(t, v),
                    self.signals.format_letter(Letter(self.output(t, v))),
                )
                .unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, MachineError> {
        use crate::ltl::SignalKind;
        let mut signals = SignalSpace::new();
        let mut num_states = None;
        let mut initial = None;
        let mut body: Vec<&str> = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("inputs:") {
                for name in rest.split_whitespace() {
                    signals.declare(name, SignalKind::Input)?;
                }
            } else if let Some(rest) = line.strip_prefix("outputs:") {
                for name in rest.split_whitespace() {
                    signals.declare(name, SignalKind::Output)?;
                }
            } else if let Some(rest) = line.strip_prefix("states:") {
                num_states = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|e| MachineError::Format(format!("states: {e}")))?,
                );
            } else if let Some(rest) = line.strip_prefix("initial:") {
                initial = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|e| MachineError::Format(format!("initial: {e}")))?,
                );
            } else {
                body.push(line);
            }
        }
        let num_states = num_states.ok_or_else(|| MachineError::Format("missing states:".into()))?;
        let initial = initial.ok_or_else(|| MachineError::Format("missing initial:".into()))?;
        let valuations = signals.input_valuations();
        let mut delta = vec![vec![usize::MAX; valuations]; num_states.max(1)];
        let mut lambda = vec![vec![0u64; valuations]; num_states.max(1)];

        let parse_set = |s: &str| -> Result<Letter, MachineError> {
            let inner = s
                .strip_prefix('{')
                .and_then(|x| x.strip_suffix('}'))
                .ok_or_else(|| MachineError::Format(format!("expected {{...}}, got `{s}`")))?;
            let mut l = Letter::EMPTY;
            for name in inner.split_whitespace() {
                let id = signals
                    .id_of(name)
                    .ok_or_else(|| MachineError::Format(format!("unknown signal `{name}`")))?;
                l = l.with(id);
            }
            Ok(l)
        };

        for line in body {
            // state {in} -> state / {out}
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| MachineError::Format(format!("bad transition `{line}`")))?;
            let (target, out) = rhs
                .split_once('/')
                .ok_or_else(|| MachineError::Format(format!("bad transition `{line}`")))?;
            let mut lhs_parts = lhs.split_whitespace();
            let state: usize = lhs_parts
                .next()
                .ok_or_else(|| MachineError::Format(format!("bad transition `{line}`")))?
                .parse()
                .map_err(|e| MachineError::Format(format!("{e}")))?;
            let in_set = parse_set(lhs_parts.collect::<Vec<_>>().join(" ").trim())?;
            let target: usize = target
                .trim()
                .parse()
                .map_err(|e| MachineError::Format(format!("{e}")))?;
            let out_set = parse_set(out.trim())?;
            if state >= num_states {
                return Err(MachineError::Format(format!("state {state} out of range")));
            }
            let v = signals.input_index(in_set) as usize;
            delta[state][v] = target;
            lambda[state][v] = out_set.0;
        }
        if delta.iter().flatten().any(|&t| t == usize::MAX) {
            return Err(MachineError::NotTotal);
        }
        MealyMachine::new(signals, num_states, initial, delta, lambda)
    }

    /// DOT export. With `collapsed`, parallel edges between the same pair of
    /// states are merged into one multi-line label.
    pub fn to_dot(&self, collapsed: bool) -> String {
        let mut s = String::new();
        writeln!(s, "digraph mealy {{").unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        writeln!(s, "  __init [shape=point, style=invis];").unwrap();
        writeln!(s, "  __init -> s{};", self.initial).unwrap();
        for t in 0..self.num_states {
            writeln!(s, "  s{t} [shape=circle, label=\"{t}\"];").unwrap();
        }
        for t in 0..self.num_states {
            let mut labels: Vec<(usize, Vec<String>)> = Vec::new();
            for v in 0..self.signals.input_valuations() as u32 {
                let t2 = self.step(t, v);
                let label = format!(
                    "{}/{}",
                    self.signals.format_letter(self.signals.input_letter(v)),
                    self.signals.format_letter(Letter(self.output(t, v)))
                );
                if collapsed {
                    if let Some(entry) = labels.iter_mut().find(|(dst, _)| *dst == t2) {
                        entry.1.push(label);
                    } else {
                        labels.push((t2, vec![label]));
                    }
                } else {
                    labels.push((t2, vec![label]));
                }
            }
            for (t2, parts) in labels {
                writeln!(s, "  s{t} -> s{t2} [label=\"{}\"];", parts.join("\\n")).unwrap();
            }
        }
        writeln!(s, "}}").unwrap();
        s
    }
}

/// Directed graph over machine states with input labels erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateGraph {
    pub n: usize,
    /// Sorted, deduplicated adjacency per vertex.
    pub adj: Vec<Vec<usize>>,
}

impl StateGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> StateGraph {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        StateGraph { n, adj }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|r| r.len()).sum()
    }

    pub fn max_outdegree(&self) -> usize {
        self.adj.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Sub-graph induced on vertices `>= root`, keeping original vertex ids.
    pub fn suffix_subgraph(&self, root: usize) -> StateGraph {
        let mut adj = vec![Vec::new(); self.n];
        for v in root..self.n {
            adj[v] = self.adj[v].iter().copied().filter(|&w| w >= root).collect();
        }
        StateGraph { n: self.n, adj }
    }
}
