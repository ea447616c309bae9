//! CNF construction kit: tagged variable allocation, cardinality and
//! binary-number gadgets, and DIMACS serialization.
//!
//! Every variable of the synthesis encodings carries a structured tag so
//! models can be decoded by name. Gadget auxiliaries are tagged `Aux` and
//! excluded from the per-family accounting.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// 1-based variable id, DIMACS convention.
pub type Var = u32;
/// Signed literal: `v as i32` positive, `-(v as i32)` negative.
pub type Lit = i32;

pub fn pos(v: Var) -> Lit {
    v as Lit
}

pub fn neg(v: Var) -> Lit {
    -(v as Lit)
}

/// Element of the forest vertex set: (machine state, copy index).
pub type CopyId = (usize, usize);

/// Structured variable names. One constructor per variable family of the
/// three encodings, plus `Aux` for gadget-internal variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarTag {
    // state-bound encoding
    Trans { from: usize, input: u32, to: usize },
    Label { state: usize, input: u32, output: usize },
    RgState { state: usize, automaton: usize },
    AnnotBit { state: usize, automaton: usize, bit: u32 },
    // cycle-bound encoding
    Edge { from: usize, to: usize },
    BlueEdge { from: CopyId, to: CopyId },
    RedEdge { from: CopyId, to_root: usize },
    WtreeBit { vertex: CopyId, bit: u32 },
    Allowed { vertex: CopyId, target: usize },
    RboundBit { slot: usize, bit: u32 },
    Used { vertex: CopyId },
    // per-sub-graph component labeling
    SccBit { subgraph: usize, state: usize, bit: u32 },
    FwdEdge { subgraph: usize, from: usize, to: usize },
    BwdEdge { subgraph: usize, from: usize, to: usize },
    FrankBit { subgraph: usize, state: usize, bit: u32 },
    BrankBit { subgraph: usize, state: usize, bit: u32 },
    Aux(u64),
}

impl fmt::Display for VarTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("exactly-one over an empty variable set")]
    EmptyExactlyOne,
    #[error("comparison over zero-width operands")]
    ZeroWidth,
}

/// A CNF instance under construction: dense variable ids starting at 1, an
/// append-only clause list, and the tag↔id bijection.
#[derive(Clone, Debug, Default)]
pub struct CnfInstance {
    tags: Vec<VarTag>,
    index: HashMap<VarTag, Var>,
    clauses: Vec<Vec<Lit>>,
    aux_count: u64,
}

impl CnfInstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates a fresh variable for `tag`. Panics if the tag exists:
    /// encoders allocate each family exactly once.
    pub fn alloc(&mut self, tag: VarTag) -> Var {
        assert!(
            !self.index.contains_key(&tag),
            "variable {tag} allocated twice"
        );
        let id = (self.tags.len() + 1) as Var;
        self.index.insert(tag.clone(), id);
        self.tags.push(tag);
        id
    }

    pub fn fresh_aux(&mut self) -> Var {
        let tag = VarTag::Aux(self.aux_count);
        self.aux_count += 1;
        self.alloc(tag)
    }

    /// Id of an already-allocated tag.
    pub fn var(&self, tag: &VarTag) -> Var {
        *self
            .index
            .get(tag)
            .unwrap_or_else(|| panic!("variable {tag} was never allocated"))
    }

    pub fn lookup(&self, tag: &VarTag) -> Option<Var> {
        self.index.get(tag).copied()
    }

    pub fn tag_of(&self, v: Var) -> &VarTag {
        &self.tags[(v - 1) as usize]
    }

    pub fn num_vars(&self) -> usize {
        self.tags.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Number of non-auxiliary variables matching `pred`.
    pub fn count_family(&self, pred: impl Fn(&VarTag) -> bool) -> usize {
        self.tags.iter().filter(|t| pred(t)).count()
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        debug_assert!(lits
            .iter()
            .all(|&l| l != 0 && (l.unsigned_abs() as usize) <= self.tags.len()));
        self.clauses.push(lits.to_vec());
    }

    /// Clause `guard -> (l1 | l2 | ...)`: the guard literals are negated and
    /// prepended.
    pub fn add_guarded(&mut self, guard: &[Lit], lits: &[Lit]) {
        let mut clause: Vec<Lit> = guard.iter().map(|&g| -g).collect();
        clause.extend_from_slice(lits);
        self.add_clause(&clause);
    }

    /// DIMACS serialization: identical inputs yield identical bytes.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 + self.clauses.len() * 8);
        out.push_str(&format!(
            "p cnf {} {}\n",
            self.num_vars(),
            self.num_clauses()
        ));
        for clause in &self.clauses {
            for &lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A satisfying assignment. Index 0 is unused; every allocated variable has
/// a value (unconstrained variables default to false).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn from_true_vars(num_vars: usize, true_vars: impl IntoIterator<Item = Var>) -> Model {
        let mut values = vec![false; num_vars + 1];
        for v in true_vars {
            if (v as usize) < values.len() {
                values[v as usize] = true;
            }
        }
        Model { values }
    }

    /// From signed literals (DIMACS `v` lines, solver models).
    pub fn from_lits(num_vars: usize, lits: impl IntoIterator<Item = Lit>) -> Model {
        let mut values = vec![false; num_vars + 1];
        for l in lits {
            let v = l.unsigned_abs() as usize;
            if v != 0 && v < values.len() {
                values[v] = l > 0;
            }
        }
        Model { values }
    }

    pub fn value(&self, v: Var) -> bool {
        self.values[v as usize]
    }

    pub fn lit_true(&self, l: Lit) -> bool {
        let v = self.value(l.unsigned_abs());
        if l > 0 {
            v
        } else {
            !v
        }
    }

    pub fn satisfies(&self, cnf: &CnfInstance) -> bool {
        cnf.clauses()
            .iter()
            .all(|c| c.iter().any(|&l| self.lit_true(l)))
    }

    /// Value of a big-endian bit vector under the model.
    pub fn read_bits(&self, bits: &[Var]) -> u64 {
        bits.iter()
            .fold(0, |acc, &b| (acc << 1) | self.value(b) as u64)
    }
}

// ---------------------------------------------------------------------------
// cardinality gadgets
// ---------------------------------------------------------------------------

/// Emits clauses whose satisfying assignments restricted to `vars` are
/// exactly the one-hot assignments: pairwise for up to 6 variables,
/// a commander tree above that.
pub fn exactly_one(cnf: &mut CnfInstance, vars: &[Var]) -> Result<(), CnfError> {
    exactly_one_if(cnf, &[], vars)
}

/// `guard -> exactlyOne(vars)`.
pub fn exactly_one_if(cnf: &mut CnfInstance, guard: &[Lit], vars: &[Var]) -> Result<(), CnfError> {
    if vars.is_empty() {
        return Err(CnfError::EmptyExactlyOne);
    }
    at_least_one_if(cnf, guard, vars)?;
    at_most_one_if(cnf, guard, vars);
    Ok(())
}

pub fn at_least_one_if(
    cnf: &mut CnfInstance,
    guard: &[Lit],
    vars: &[Var],
) -> Result<(), CnfError> {
    if vars.is_empty() {
        return Err(CnfError::EmptyExactlyOne);
    }
    let lits: Vec<Lit> = vars.iter().map(|&v| pos(v)).collect();
    cnf.add_guarded(guard, &lits);
    Ok(())
}

/// `guard -> atMostOne(vars)`. Groups of more than 6 variables use the
/// commander construction with groups of three.
pub fn at_most_one_if(cnf: &mut CnfInstance, guard: &[Lit], vars: &[Var]) {
    if vars.len() <= 6 {
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                cnf.add_guarded(guard, &[neg(vars[i]), neg(vars[j])]);
            }
        }
        return;
    }
    // commander variables, one per group of three
    let mut commanders: Vec<Var> = Vec::new();
    for group in vars.chunks(3) {
        let c = cnf.fresh_aux();
        // group member -> commander (unconditional definition)
        for &v in group {
            cnf.add_clause(&[neg(v), pos(c)]);
        }
        // at most one inside the group
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                cnf.add_guarded(guard, &[neg(group[i]), neg(group[j])]);
            }
        }
        commanders.push(c);
    }
    at_most_one_if(cnf, guard, &commanders);
}

// ---------------------------------------------------------------------------
// binary comparison gadgets (unsigned, big-endian)
// ---------------------------------------------------------------------------

/// One operand bit: a variable or a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bit {
    V(Var),
    C(bool),
}

/// Big-endian constant of the given width.
pub fn const_bits(value: u64, width: u32) -> Vec<Bit> {
    (0..width)
        .rev()
        .map(|i| Bit::C(value & (1 << i) != 0))
        .collect()
}

pub fn var_bits(vars: &[Var]) -> Vec<Bit> {
    vars.iter().map(|&v| Bit::V(v)).collect()
}

/// Bits needed to represent every value in `0..=max`.
pub fn width_for(max: u64) -> u32 {
    64 - max.leading_zeros().min(64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpRel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

fn pad<'a>(a: &'a [Bit], b: &'a [Bit]) -> (Vec<Bit>, Vec<Bit>) {
    let w = a.len().max(b.len());
    let mut pa = vec![Bit::C(false); w - a.len()];
    pa.extend_from_slice(a);
    let mut pb = vec![Bit::C(false); w - b.len()];
    pb.extend_from_slice(b);
    (pa, pb)
}

// literal of a bit, or its constant value
fn bit_lit(b: Bit) -> Result<Lit, bool> {
    match b {
        Bit::V(v) => Ok(pos(v)),
        Bit::C(c) => Err(c),
    }
}

/// Adds a clause `guard -> (disjunction)`, where each disjunct is a `Bit`
/// literal; constant-true disjuncts satisfy the clause (nothing emitted),
/// constant-false disjuncts are dropped.
fn add_bit_clause(cnf: &mut CnfInstance, guard: &[Lit], disjuncts: &[(Bit, bool)]) {
    let mut lits = Vec::with_capacity(disjuncts.len());
    for &(b, wanted) in disjuncts {
        match bit_lit(b) {
            Ok(l) => lits.push(if wanted { l } else { -l }),
            Err(c) => {
                if c == wanted {
                    return; // clause satisfied by a constant
                }
            }
        }
    }
    cnf.add_guarded(guard, &lits);
}

/// Asserts `guard -> (a rel b)` over unsigned big-endian operands, padding
/// the shorter side with zeros.
pub fn assert_compare_if(
    cnf: &mut CnfInstance,
    guard: &[Lit],
    a: &[Bit],
    rel: CmpRel,
    b: &[Bit],
) -> Result<(), CnfError> {
    if a.is_empty() && b.is_empty() {
        // zero-width operands both denote 0
        match rel {
            CmpRel::Eq | CmpRel::Le | CmpRel::Ge => return Ok(()),
            CmpRel::Lt | CmpRel::Gt => {
                cnf.add_guarded(guard, &[]);
                return Ok(());
            }
        }
    }
    if a.is_empty() || b.is_empty() {
        let (pa, pb) = pad(a, b);
        return assert_compare_if(cnf, guard, &pa, rel, &pb);
    }
    let (a, b) = pad(a, b);
    match rel {
        CmpRel::Eq => {
            for i in 0..a.len() {
                // a_i -> b_i and b_i -> a_i
                add_bit_clause(cnf, guard, &[(a[i], false), (b[i], true)]);
                add_bit_clause(cnf, guard, &[(a[i], true), (b[i], false)]);
            }
            Ok(())
        }
        CmpRel::Ge => assert_compare_if(cnf, guard, &b, CmpRel::Le, &a),
        CmpRel::Gt => assert_compare_if(cnf, guard, &b, CmpRel::Lt, &a),
        CmpRel::Lt | CmpRel::Le => {
            let w = a.len();
            // e_i = "a and b agree on bits 0..i" (half-reified downward)
            let mut prefix_eq: Vec<Option<Lit>> = Vec::with_capacity(w + 1);
            prefix_eq.push(None); // e_0 = true
            for i in 0..w {
                let prev = prefix_eq[i];
                let e = cnf.fresh_aux();
                if let Some(p) = prev {
                    cnf.add_clause(&[neg(e), p]);
                }
                // e -> (a_i <-> b_i)
                match (bit_lit(a[i]), bit_lit(b[i])) {
                    (Ok(la), Ok(lb)) => {
                        cnf.add_clause(&[neg(e), -la, lb]);
                        cnf.add_clause(&[neg(e), la, -lb]);
                    }
                    (Ok(la), Err(c)) => {
                        cnf.add_clause(&[neg(e), if c { la } else { -la }]);
                    }
                    (Err(c), Ok(lb)) => {
                        cnf.add_clause(&[neg(e), if c { lb } else { -lb }]);
                    }
                    (Err(ca), Err(cb)) => {
                        if ca != cb {
                            cnf.add_clause(&[neg(e)]);
                        }
                    }
                }
                prefix_eq.push(Some(pos(e)));
            }
            // d_i = "prefix equal and a_i < b_i"; at least one must hold
            let mut top = Vec::new();
            for i in 0..w {
                let d = cnf.fresh_aux();
                if let Some(p) = prefix_eq[i] {
                    cnf.add_clause(&[neg(d), p]);
                }
                match bit_lit(a[i]) {
                    Ok(la) => cnf.add_clause(&[neg(d), -la]),
                    Err(true) => cnf.add_clause(&[neg(d)]),
                    Err(false) => {}
                }
                match bit_lit(b[i]) {
                    Ok(lb) => cnf.add_clause(&[neg(d), lb]),
                    Err(false) => cnf.add_clause(&[neg(d)]),
                    Err(true) => {}
                }
                top.push(pos(d));
            }
            if rel == CmpRel::Le {
                top.push(prefix_eq[w].expect("width >= 1"));
            }
            cnf.add_guarded(guard, &top);
            Ok(())
        }
    }
}

/// Fresh literal `e` with `e <-> (bits == value)`.
pub fn reify_eq_const(cnf: &mut CnfInstance, bits: &[Var], value: u64) -> Lit {
    let e = cnf.fresh_aux();
    let w = bits.len() as u32;
    let mut back = vec![pos(e)];
    for (i, &b) in bits.iter().enumerate() {
        let bit_set = w > 0 && value & (1 << (w - 1 - i as u32)) != 0;
        let l = if bit_set { pos(b) } else { neg(b) };
        cnf.add_clause(&[neg(e), l]);
        back.push(-l);
    }
    cnf.add_clause(&back);
    if (value >> w) != 0 {
        // value not representable in the width: e is false
        cnf.add_clause(&[neg(e)]);
    }
    pos(e)
}

/// Fresh literal `e` with `e <-> (a == b)` bitwise (equal widths).
pub fn reify_eq_vars(cnf: &mut CnfInstance, a: &[Var], b: &[Var]) -> Lit {
    assert_eq!(a.len(), b.len(), "operand widths must match");
    let e = cnf.fresh_aux();
    let mut back = vec![pos(e)];
    for i in 0..a.len() {
        cnf.add_clause(&[neg(e), neg(a[i]), pos(b[i])]);
        cnf.add_clause(&[neg(e), pos(a[i]), neg(b[i])]);
        // d_i half-reifies "bits differ" for the backward direction
        let d = cnf.fresh_aux();
        cnf.add_clause(&[neg(d), pos(a[i]), pos(b[i])]);
        cnf.add_clause(&[neg(d), neg(a[i]), neg(b[i])]);
        back.push(pos(d));
    }
    cnf.add_clause(&back);
    pos(e)
}

/// Fresh literal `z` with `z <-> (all bits are zero)`.
pub fn reify_all_zero(cnf: &mut CnfInstance, bits: &[Var]) -> Lit {
    reify_eq_const(cnf, bits, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustively checks which assignments of `vars` can be extended to a
    /// satisfying assignment of all clauses (auxiliaries are existential).
    fn satisfiable_projections(cnf: &CnfInstance, vars: &[Var]) -> Vec<u64> {
        let n = cnf.num_vars();
        assert!(n <= 22, "test instance too large for exhaustion");
        let mut seen = std::collections::BTreeSet::new();
        for assignment in 0u64..(1 << n) {
            let model = Model::from_true_vars(
                n,
                (1..=n as Var).filter(|&v| assignment & (1 << (v - 1)) != 0),
            );
            if model.satisfies(cnf) {
                let proj = vars
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &v)| acc | ((model.value(v) as u64) << i));
                seen.insert(proj);
            }
        }
        seen.into_iter().collect()
    }

    #[test]
    fn exactly_one_singleton_is_unit() {
        let mut cnf = CnfInstance::new();
        let x = cnf.fresh_aux();
        exactly_one(&mut cnf, &[x]).unwrap();
        assert_eq!(cnf.clauses(), &[vec![pos(x)]]);
    }

    #[test]
    fn exactly_one_two_vars() {
        let mut cnf = CnfInstance::new();
        let x = cnf.fresh_aux();
        let y = cnf.fresh_aux();
        exactly_one(&mut cnf, &[x, y]).unwrap();
        let both = Model::from_true_vars(2, [x, y]);
        assert!(!both.satisfies(&cnf));
        let one = Model::from_true_vars(2, [x]);
        assert!(one.satisfies(&cnf));
        let none = Model::from_true_vars(2, []);
        assert!(!none.satisfies(&cnf));
    }

    #[test]
    fn exactly_one_three_vars_has_three_models() {
        let mut cnf = CnfInstance::new();
        let vars: Vec<Var> = (0..3).map(|_| cnf.fresh_aux()).collect();
        exactly_one(&mut cnf, &vars).unwrap();
        let projections = satisfiable_projections(&cnf, &vars);
        assert_eq!(projections, vec![0b001, 0b010, 0b100]);
    }

    #[test]
    fn exactly_one_commander_path() {
        // 8 variables exercises the commander construction
        let mut cnf = CnfInstance::new();
        let vars: Vec<Var> = (0..8).map(|_| cnf.fresh_aux()).collect();
        exactly_one(&mut cnf, &vars).unwrap();
        let projections = satisfiable_projections(&cnf, &vars);
        let expected: Vec<u64> = (0..8).map(|i| 1 << i).collect();
        assert_eq!(projections, expected);
    }

    #[test]
    fn exactly_one_rejects_empty() {
        let mut cnf = CnfInstance::new();
        assert_eq!(exactly_one(&mut cnf, &[]), Err(CnfError::EmptyExactlyOne));
    }

    #[test]
    fn guarded_exactly_one_only_binds_under_guard() {
        let mut cnf = CnfInstance::new();
        let g = cnf.fresh_aux();
        let vars: Vec<Var> = (0..3).map(|_| cnf.fresh_aux()).collect();
        exactly_one_if(&mut cnf, &[pos(g)], &vars).unwrap();
        // guard false: anything goes
        let m = Model::from_true_vars(cnf.num_vars(), [vars[0], vars[1]]);
        assert!(m.satisfies(&cnf));
        // guard true: two true variables violate
        let m = Model::from_true_vars(cnf.num_vars(), [g, vars[0], vars[1]]);
        assert!(!m.satisfies(&cnf));
    }

    #[test]
    fn compare_two_bit_le_constant() {
        let mut cnf = CnfInstance::new();
        let a: Vec<Var> = (0..2).map(|_| cnf.fresh_aux()).collect();
        assert_compare_if(&mut cnf, &[], &var_bits(&a), CmpRel::Le, &const_bits(2, 2)).unwrap();
        let projections = satisfiable_projections(&cnf, &a);
        // projection bit i is a[i]; a[0] is the high bit
        let admissible: Vec<u64> = projections
            .iter()
            .map(|p| ((p & 1) << 1) | ((p >> 1) & 1))
            .collect();
        let mut sorted = admissible.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn compare_equal_is_tautology() {
        let mut cnf = CnfInstance::new();
        let a: Vec<Var> = (0..3).map(|_| cnf.fresh_aux()).collect();
        assert_compare_if(&mut cnf, &[], &var_bits(&a), CmpRel::Eq, &var_bits(&a)).unwrap();
        let projections = satisfiable_projections(&cnf, &a);
        assert_eq!(projections.len(), 8);
    }

    #[test]
    fn compare_one_bit_lt() {
        let mut cnf = CnfInstance::new();
        let a = cnf.fresh_aux();
        let b = cnf.fresh_aux();
        assert_compare_if(&mut cnf, &[], &var_bits(&[a]), CmpRel::Lt, &var_bits(&[b])).unwrap();
        let projections = satisfiable_projections(&cnf, &[a, b]);
        // only a=0, b=1 survives
        assert_eq!(projections, vec![0b10]);
    }

    #[test]
    fn compare_all_relations_exhaustive() {
        for rel in [CmpRel::Lt, CmpRel::Le, CmpRel::Eq, CmpRel::Ge, CmpRel::Gt] {
            for width in 1..=3u32 {
                let mut cnf = CnfInstance::new();
                let a: Vec<Var> = (0..width).map(|_| cnf.fresh_aux()).collect();
                let b: Vec<Var> = (0..width).map(|_| cnf.fresh_aux()).collect();
                assert_compare_if(&mut cnf, &[], &var_bits(&a), rel, &var_bits(&b)).unwrap();
                let all: Vec<Var> = a.iter().chain(b.iter()).copied().collect();
                let projections = satisfiable_projections(&cnf, &all);
                for va in 0u64..(1 << width) {
                    for vb in 0u64..(1 << width) {
                        let expected = match rel {
                            CmpRel::Lt => va < vb,
                            CmpRel::Le => va <= vb,
                            CmpRel::Eq => va == vb,
                            CmpRel::Ge => va >= vb,
                            CmpRel::Gt => va > vb,
                        };
                        // projection order: a bits little-endian first, then b
                        let mut proj = 0u64;
                        for i in 0..width {
                            if va & (1 << (width - 1 - i)) != 0 {
                                proj |= 1 << i;
                            }
                            if vb & (1 << (width - 1 - i)) != 0 {
                                proj |= 1 << (width + i);
                            }
                        }
                        assert_eq!(
                            projections.contains(&proj),
                            expected,
                            "width {width} rel {rel:?}: {va} vs {vb}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reified_equality_to_constant() {
        let mut cnf = CnfInstance::new();
        let bits: Vec<Var> = (0..2).map(|_| cnf.fresh_aux()).collect();
        let e = reify_eq_const(&mut cnf, &bits, 2);
        // force e true: bits must read 2
        cnf.add_clause(&[e]);
        let projections = satisfiable_projections(&cnf, &bits);
        assert_eq!(projections, vec![0b01]); // high bit set only
    }

    #[test]
    fn dimacs_format() {
        let mut cnf = CnfInstance::new();
        let v1 = cnf.fresh_aux();
        let v2 = cnf.fresh_aux();
        cnf.add_clause(&[pos(v1), neg(v2)]);
        assert_eq!(cnf.to_dimacs(), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn dimacs_is_deterministic() {
        let build = || {
            let mut cnf = CnfInstance::new();
            let vars: Vec<Var> = (0..9).map(|_| cnf.fresh_aux()).collect();
            exactly_one(&mut cnf, &vars).unwrap();
            assert_compare_if(
                &mut cnf,
                &[],
                &var_bits(&vars[..3]),
                CmpRel::Lt,
                &var_bits(&vars[3..6]),
            )
            .unwrap();
            cnf.to_dimacs()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn model_decode_by_tag() {
        let mut cnf = CnfInstance::new();
        let t = cnf.alloc(VarTag::Trans {
            from: 0,
            input: 1,
            to: 1,
        });
        let e = cnf.alloc(VarTag::Edge { from: 0, to: 1 });
        let m = Model::from_true_vars(2, [t]);
        assert!(m.value(cnf.var(&VarTag::Trans {
            from: 0,
            input: 1,
            to: 1
        })));
        assert!(!m.value(e));
    }
}
