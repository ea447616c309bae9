//! LTL abstract syntax, specification-file parsing, normalization and
//! lasso-word semantics.
//!
//! The satisfaction relation implemented by [`evaluate`] is the testing
//! oracle for everything downstream: automaton translation, synthesized
//! machines and counterexample lassos are all checked against it.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index into a [`SignalSpace`].
pub type SignalId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignalKind {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal {
    pub name: String,
    pub kind: SignalKind,
}

/// The declared input and output signals of a specification.
///
/// Signal ids are dense indices in declaration order; a letter of the
/// alphabet is a bitmask over those ids (see [`Letter`]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignalSpace {
    signals: Vec<Signal>,
}

/// One letter of the alphabet: the set of signals that hold, as a bitmask
/// indexed by [`SignalId`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u64);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn contains(self, s: SignalId) -> bool {
        self.0 & (1 << s) != 0
    }

    pub fn with(self, s: SignalId) -> Letter {
        Letter(self.0 | (1 << s))
    }

    pub fn union(self, other: Letter) -> Letter {
        Letter(self.0 | other.0)
    }
}

/// Names that can never be signal identifiers because the lexer treats them
/// as operators or constants.
const RESERVED: &[&str] = &["true", "false", "X", "F", "G", "U", "R"];

impl SignalSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, kind: SignalKind) -> Result<SignalId, SpecError> {
        if RESERVED.contains(&name) {
            return Err(SpecError::ReservedName(name.to_string()));
        }
        if self.signals.iter().any(|s| s.name == name) {
            return Err(SpecError::DuplicateSignal(name.to_string()));
        }
        if self.signals.len() >= 63 {
            return Err(SpecError::TooManySignals);
        }
        self.signals.push(Signal {
            name: name.to_string(),
            kind,
        });
        Ok(self.signals.len() - 1)
    }

    pub fn id_of(&self, name: &str) -> Option<SignalId> {
        self.signals.iter().position(|s| s.name == name)
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn name(&self, id: SignalId) -> &str {
        &self.signals[id].name
    }

    pub fn kind(&self, id: SignalId) -> SignalKind {
        self.signals[id].kind
    }

    pub fn inputs(&self) -> Vec<SignalId> {
        (0..self.len())
            .filter(|&i| self.signals[i].kind == SignalKind::Input)
            .collect()
    }

    pub fn outputs(&self) -> Vec<SignalId> {
        (0..self.len())
            .filter(|&i| self.signals[i].kind == SignalKind::Output)
            .collect()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs().len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs().len()
    }

    /// Number of input valuations, `2^|I|`.
    pub fn input_valuations(&self) -> usize {
        1usize << self.num_inputs()
    }

    /// Letter containing exactly the inputs selected by valuation index `v`.
    /// Bit `j` of `v` corresponds to the `j`-th declared input.
    pub fn input_letter(&self, v: u32) -> Letter {
        let mut l = Letter::EMPTY;
        for (j, id) in self.inputs().into_iter().enumerate() {
            if v & (1 << j) != 0 {
                l = l.with(id);
            }
        }
        l
    }

    /// Valuation index of the inputs contained in `letter`.
    pub fn input_index(&self, letter: Letter) -> u32 {
        let mut v = 0;
        for (j, id) in self.inputs().into_iter().enumerate() {
            if letter.contains(id) {
                v |= 1 << j;
            }
        }
        v
    }

    /// Mask with every input signal bit set.
    pub fn input_mask(&self) -> u64 {
        self.inputs().iter().fold(0, |m, &id| m | (1 << id))
    }

    pub fn output_mask(&self) -> u64 {
        self.outputs().iter().fold(0, |m, &id| m | (1 << id))
    }

    /// Renders a letter as `{a b}` / `{}` using declared names.
    pub fn format_letter(&self, l: Letter) -> String {
        let names: Vec<&str> = (0..self.len())
            .filter(|&i| l.contains(i))
            .map(|i| self.name(i))
            .collect();
        format!("{{{}}}", names.join(" "))
    }
}

/// LTL formula over declared signals. Derived operators are kept as their
/// own nodes; [`LtlFormula::size`] counts the formula as written.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LtlFormula {
    True,
    False,
    Atom(SignalId),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Iff(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Finally(Box<LtlFormula>),
    Globally(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Release(Box<LtlFormula>, Box<LtlFormula>),
}

use LtlFormula::*;

impl LtlFormula {
    pub fn atom(s: SignalId) -> Self {
        Atom(s)
    }
    pub fn not(f: Self) -> Self {
        Not(Box::new(f))
    }
    pub fn and(a: Self, b: Self) -> Self {
        And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Self, b: Self) -> Self {
        Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Self, b: Self) -> Self {
        Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Self, b: Self) -> Self {
        Iff(Box::new(a), Box::new(b))
    }
    pub fn next(f: Self) -> Self {
        Next(Box::new(f))
    }
    /// `i` nested applications of X.
    pub fn next_n(f: Self, i: usize) -> Self {
        (0..i).fold(f, |g, _| Self::next(g))
    }
    pub fn finally(f: Self) -> Self {
        Finally(Box::new(f))
    }
    pub fn globally(f: Self) -> Self {
        Globally(Box::new(f))
    }
    pub fn until(a: Self, b: Self) -> Self {
        Until(Box::new(a), Box::new(b))
    }
    pub fn release(a: Self, b: Self) -> Self {
        Release(Box::new(a), Box::new(b))
    }

    /// Number of distinct sub-formulas of the formula as written (before
    /// any desugaring).
    pub fn size(&self) -> usize {
        let mut seen: std::collections::BTreeSet<&LtlFormula> = std::collections::BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !seen.insert(f) {
                continue;
            }
            match f {
                True | False | Atom(_) => {}
                Not(g) | Next(g) | Finally(g) | Globally(g) => stack.push(g),
                And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b)
                | Release(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        seen.len()
    }

    /// All atoms appearing in the formula.
    pub fn atoms(&self) -> Vec<SignalId> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<SignalId>) {
        match self {
            True | False => {}
            Atom(s) => out.push(*s),
            Not(f) | Next(f) | Finally(f) | Globally(f) => f.collect_atoms(out),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Negation normal form over the core grammar
    /// (true/false/atoms/negated atoms/and/or/X/U/R). Release enters here as
    /// the dual of Until; derived operators are expanded.
    pub fn to_nnf(&self) -> LtlFormula {
        self.nnf(false)
    }

    fn nnf(&self, negated: bool) -> LtlFormula {
        match (self, negated) {
            (True, false) | (False, true) => True,
            (True, true) | (False, false) => False,
            (Atom(s), false) => Atom(*s),
            (Atom(s), true) => Self::not(Atom(*s)),
            (Not(f), neg) => f.nnf(!neg),
            (And(a, b), false) => Self::and(a.nnf(false), b.nnf(false)),
            (And(a, b), true) => Self::or(a.nnf(true), b.nnf(true)),
            (Or(a, b), false) => Self::or(a.nnf(false), b.nnf(false)),
            (Or(a, b), true) => Self::and(a.nnf(true), b.nnf(true)),
            (Implies(a, b), neg) => Self::or(Self::not((**a).clone()), (**b).clone()).nnf(neg),
            (Iff(a, b), neg) => Self::and(
                Self::implies((**a).clone(), (**b).clone()),
                Self::implies((**b).clone(), (**a).clone()),
            )
            .nnf(neg),
            (Next(f), neg) => Self::next(f.nnf(neg)),
            (Finally(f), false) => Self::until(True, f.nnf(false)),
            (Finally(f), true) => Self::release(False, f.nnf(true)),
            (Globally(f), false) => Self::release(False, f.nnf(false)),
            (Globally(f), true) => Self::until(True, f.nnf(true)),
            (Until(a, b), false) => Self::until(a.nnf(false), b.nnf(false)),
            (Until(a, b), true) => Self::release(a.nnf(true), b.nnf(true)),
            (Release(a, b), false) => Self::release(a.nnf(false), b.nnf(false)),
            (Release(a, b), true) => Self::until(a.nnf(true), b.nnf(true)),
        }
    }

    /// True if the formula is in the NNF core grammar.
    pub fn is_nnf(&self) -> bool {
        match self {
            True | False | Atom(_) => true,
            Not(f) => matches!(**f, Atom(_)),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => a.is_nnf() && b.is_nnf(),
            Next(f) => f.is_nnf(),
            Implies(..) | Iff(..) | Finally(_) | Globally(_) => false,
        }
    }

    pub fn display<'a>(&'a self, sig: &'a SignalSpace) -> FormulaDisplay<'a> {
        FormulaDisplay { f: self, sig }
    }
}

/// Operator precedence, higher binds tighter.
fn prec(f: &LtlFormula) -> u8 {
    match f {
        True | False | Atom(_) => 7,
        Not(_) | Next(_) | Finally(_) | Globally(_) => 6,
        Until(..) | Release(..) => 5,
        And(..) => 4,
        Or(..) => 3,
        Implies(..) => 2,
        Iff(..) => 1,
    }
}

pub struct FormulaDisplay<'a> {
    f: &'a LtlFormula,
    sig: &'a SignalSpace,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(w, self.f, self.sig)
    }
}

fn write_child(
    w: &mut fmt::Formatter<'_>,
    child: &LtlFormula,
    sig: &SignalSpace,
    needs_parens: bool,
) -> fmt::Result {
    if needs_parens {
        write!(w, "(")?;
        write_formula(w, child, sig)?;
        write!(w, ")")
    } else {
        write_formula(w, child, sig)
    }
}

fn write_formula(w: &mut fmt::Formatter<'_>, f: &LtlFormula, sig: &SignalSpace) -> fmt::Result {
    let p = prec(f);
    match f {
        True => write!(w, "true"),
        False => write!(w, "false"),
        Atom(s) => write!(w, "{}", sig.name(*s)),
        Not(g) => {
            write!(w, "!")?;
            write_child(w, g, sig, prec(g) < p)
        }
        Next(g) | Finally(g) | Globally(g) => {
            let op = match f {
                Next(_) => "X",
                Finally(_) => "F",
                _ => "G",
            };
            write!(w, "{op} ")?;
            write_child(w, g, sig, prec(g) < p)
        }
        Until(a, b) | Release(a, b) => {
            let op = if matches!(f, Until(..)) { "U" } else { "R" };
            // right-associative: the left child needs parens at equal precedence
            write_child(w, a, sig, prec(a) <= p)?;
            write!(w, " {op} ")?;
            write_child(w, b, sig, prec(b) < p)
        }
        And(a, b) | Or(a, b) => {
            let op = if matches!(f, And(..)) { "&&" } else { "||" };
            // left-associative
            write_child(w, a, sig, prec(a) < p)?;
            write!(w, " {op} ")?;
            write_child(w, b, sig, prec(b) <= p)
        }
        Implies(a, b) | Iff(a, b) => {
            let op = if matches!(f, Implies(..)) { "->" } else { "<->" };
            // right-associative
            write_child(w, a, sig, prec(a) <= p)?;
            write!(w, " {op} ")?;
            write_child(w, b, sig, prec(b) < p)
        }
    }
}

/// An ultimately periodic word: finite prefix followed by a repeated
/// non-empty loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self, SpecError> {
        if cycle.is_empty() {
            return Err(SpecError::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Letter at absolute position `pos`.
    pub fn letter(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.cycle[(pos - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Folds `pos` into `[0, prefix_len + cycle_len)`; the suffix from the
    /// folded position is the same infinite word.
    pub fn normalize_pos(&self, pos: usize) -> usize {
        let p = self.prefix.len();
        if pos < p {
            pos
        } else {
            p + (pos - p) % self.cycle.len()
        }
    }

    pub fn format(&self, sig: &SignalSpace) -> String {
        let pre: Vec<String> = self.prefix.iter().map(|&l| sig.format_letter(l)).collect();
        let cyc: Vec<String> = self.cycle.iter().map(|&l| sig.format_letter(l)).collect();
        format!("{} ({})^w", pre.join(" "), cyc.join(" "))
    }
}

/// Satisfaction of `f` on `w` at position `pos`.
///
/// Until and Release are decided by scanning positions up to
/// `prefix + 2*loop`: the suffix language is periodic beyond the prefix, so
/// the first witness (or first violation) always occurs inside that window.
pub fn evaluate(f: &LtlFormula, w: &LassoWord, pos: usize) -> bool {
    let mut memo = HashMap::new();
    eval(f, w, w.normalize_pos(pos), &mut memo)
}

type Memo = HashMap<(usize, usize), bool>;

fn eval(f: &LtlFormula, w: &LassoWord, pos: usize, memo: &mut Memo) -> bool {
    let pos = w.normalize_pos(pos);
    let key = (f as *const LtlFormula as usize, pos);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let horizon = w.prefix_len() + 2 * w.cycle_len();
    let v = match f {
        True => true,
        False => false,
        Atom(s) => w.letter(pos).contains(*s),
        Not(g) => !eval(g, w, pos, memo),
        And(a, b) => eval(a, w, pos, memo) && eval(b, w, pos, memo),
        Or(a, b) => eval(a, w, pos, memo) || eval(b, w, pos, memo),
        Implies(a, b) => !eval(a, w, pos, memo) || eval(b, w, pos, memo),
        Iff(a, b) => eval(a, w, pos, memo) == eval(b, w, pos, memo),
        Next(g) => eval(g, w, pos + 1, memo),
        Finally(g) => (pos..horizon).any(|m| eval(g, w, m, memo)),
        Globally(g) => (pos..horizon).all(|m| eval(g, w, m, memo)),
        Until(a, b) => {
            let mut result = false;
            for m in pos..horizon {
                if eval(b, w, m, memo) {
                    result = true;
                    break;
                }
                if !eval(a, w, m, memo) {
                    break;
                }
            }
            result
        }
        Release(a, b) => {
            let mut result = true;
            for m in pos..horizon {
                if !eval(b, w, m, memo) {
                    result = false;
                    break;
                }
                if eval(a, w, m, memo) {
                    break;
                }
            }
            result
        }
    };
    memo.insert(key, v);
    v
}

/// A parsed specification file: declared signals plus the LTL formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecificationFile {
    pub signals: SignalSpace,
    pub formula: LtlFormula,
}

impl SpecificationFile {
    /// Renders back to the line-oriented file format; `parse_spec` of the
    /// result is structurally equal to `self`.
    pub fn to_text(&self) -> String {
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
        format!(
            "INPUTS: {}\nOUTPUTS: {}\nSPEC: {}\n",
            inputs.join(" "),
            outputs.join(" "),
            self.formula.display(&self.signals)
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}, column {col}: unexpected character `{ch}`")]
    Lexical { line: usize, col: usize, ch: char },
    #[error("line {line}, column {col}: undeclared signal `{name}`")]
    UndeclaredSignal {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("signal `{0}` declared more than once")]
    DuplicateSignal(String),
    #[error("`{0}` is a reserved word and cannot name a signal")]
    ReservedName(String),
    #[error("at most 63 signals are supported")]
    TooManySignals,
    #[error("missing SPEC section")]
    MissingSpec,
    #[error("duplicate {0} section")]
    DuplicateSection(&'static str),
    #[error("lasso loop must be non-empty")]
    EmptyLoop,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    AndAnd,
    OrOr,
    Arrow,
    Iff,
    Next,
    Fin,
    Glob,
    Until,
    Release,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, start_line: usize) -> Result<Vec<Spanned>, SpecError> {
    let mut toks = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = start_line + li;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                ' ' | '\t' | '\r' => i += 1,
                '(' => {
                    toks.push(Spanned {
                        tok: Tok::LParen,
                        line,
                        col,
                    });
                    i += 1;
                }
                ')' => {
                    toks.push(Spanned {
                        tok: Tok::RParen,
                        line,
                        col,
                    });
                    i += 1;
                }
                '!' => {
                    toks.push(Spanned {
                        tok: Tok::Not,
                        line,
                        col,
                    });
                    i += 1;
                }
                '&' => {
                    if chars.get(i + 1) == Some(&'&') {
                        toks.push(Spanned {
                            tok: Tok::AndAnd,
                            line,
                            col,
                        });
                        i += 2;
                    } else {
                        return Err(SpecError::Lexical { line, col, ch: c });
                    }
                }
                '|' => {
                    if chars.get(i + 1) == Some(&'|') {
                        toks.push(Spanned {
                            tok: Tok::OrOr,
                            line,
                            col,
                        });
                        i += 2;
                    } else {
                        return Err(SpecError::Lexical { line, col, ch: c });
                    }
                }
                '-' => {
                    if chars.get(i + 1) == Some(&'>') {
                        toks.push(Spanned {
                            tok: Tok::Arrow,
                            line,
                            col,
                        });
                        i += 2;
                    } else {
                        return Err(SpecError::Lexical { line, col, ch: c });
                    }
                }
                '<' => {
                    if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                        toks.push(Spanned {
                            tok: Tok::Iff,
                            line,
                            col,
                        });
                        i += 3;
                    } else {
                        return Err(SpecError::Lexical { line, col, ch: c });
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i + 1;
                    while j < chars.len()
                        && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                    {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = match word.as_str() {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "X" => Tok::Next,
                        "F" => Tok::Fin,
                        "G" => Tok::Glob,
                        "U" => Tok::Until,
                        "R" => Tok::Release,
                        _ => Tok::Ident(word),
                    };
                    toks.push(Spanned { tok, line, col });
                    i = j;
                }
                other => return Err(SpecError::Lexical { line, col, ch: other }),
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a SignalSpace,
    end_line: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: &str) -> SpecError {
        match self.peek() {
            Some(s) => SpecError::Syntax {
                line: s.line,
                col: s.col,
                msg: msg.to_string(),
            },
            None => SpecError::Syntax {
                line: self.end_line,
                col: 1,
                msg: format!("{msg} (unexpected end of input)"),
            },
        }
    }

    // precedence: ! > X,F,G > U,R > && > || > -> > <->
    fn parse_iff(&mut self) -> Result<LtlFormula, SpecError> {
        let lhs = self.parse_implies()?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Iff)) {
            self.bump();
            let rhs = self.parse_iff()?;
            Ok(LtlFormula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_implies(&mut self) -> Result<LtlFormula, SpecError> {
        let lhs = self.parse_or()?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Arrow)) {
            self.bump();
            let rhs = self.parse_implies()?;
            Ok(LtlFormula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<LtlFormula, SpecError> {
        let mut lhs = self.parse_and()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::OrOr)) {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = LtlFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<LtlFormula, SpecError> {
        let mut lhs = self.parse_until()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::AndAnd)) {
            self.bump();
            let rhs = self.parse_until()?;
            lhs = LtlFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_until(&mut self) -> Result<LtlFormula, SpecError> {
        let lhs = self.parse_unary()?;
        match self.peek().map(|s| &s.tok) {
            Some(Tok::Until) => {
                self.bump();
                let rhs = self.parse_until()?;
                Ok(LtlFormula::until(lhs, rhs))
            }
            Some(Tok::Release) => {
                self.bump();
                let rhs = self.parse_until()?;
                Ok(LtlFormula::release(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn parse_unary(&mut self) -> Result<LtlFormula, SpecError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Not) => {
                self.bump();
                Ok(LtlFormula::not(self.parse_unary()?))
            }
            Some(Tok::Next) => {
                self.bump();
                Ok(LtlFormula::next(self.parse_unary()?))
            }
            Some(Tok::Fin) => {
                self.bump();
                Ok(LtlFormula::finally(self.parse_unary()?))
            }
            Some(Tok::Glob) => {
                self.bump();
                Ok(LtlFormula::globally(self.parse_unary()?))
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<LtlFormula, SpecError> {
        match self.peek().cloned() {
            Some(Spanned {
                tok: Tok::True, ..
            }) => {
                self.bump();
                Ok(True)
            }
            Some(Spanned {
                tok: Tok::False, ..
            }) => {
                self.bump();
                Ok(False)
            }
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                self.bump();
                match self.sig.id_of(&name) {
                    Some(id) => Ok(Atom(id)),
                    None => Err(SpecError::UndeclaredSignal { line, col, name }),
                }
            }
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => {
                self.bump();
                let f = self.parse_iff()?;
                match self.bump() {
                    Some(Spanned {
                        tok: Tok::RParen, ..
                    }) => Ok(f),
                    _ => Err(self.err_here("expected `)`")),
                }
            }
            _ => Err(self.err_here("expected a formula")),
        }
    }
}

/// Parses a formula in an already-declared signal space. `start_line` is the
/// 1-based line number of the first line of `text`, used in error positions.
pub fn parse_formula(
    text: &str,
    sig: &SignalSpace,
    start_line: usize,
) -> Result<LtlFormula, SpecError> {
    let toks = lex(text, start_line)?;
    let end_line = start_line + text.lines().count().saturating_sub(1);
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        end_line,
    };
    let f = p.parse_iff()?;
    if let Some(s) = p.peek() {
        return Err(SpecError::Syntax {
            line: s.line,
            col: s.col,
            msg: "trailing input after formula".to_string(),
        });
    }
    Ok(f)
}

/// Parses a specification file.
///
/// Format: `INPUTS:` and `OUTPUTS:` lines with whitespace-separated
/// identifiers, a `SPEC:` section whose expression may span the rest of the
/// file, and `#` comments.
pub fn parse_spec(text: &str) -> Result<SpecificationFile, SpecError> {
    let mut signals = SignalSpace::new();
    let mut seen_inputs = false;
    let mut seen_outputs = false;
    let mut spec_text: Option<(String, usize)> = None;

    let lines: Vec<&str> = text.lines().collect();
    let mut idx = 0;
    while idx < lines.len() {
        let line_no = idx + 1;
        let content = lines[idx].split('#').next().unwrap_or("").trim_end();
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            idx += 1;
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("INPUTS:") {
            if seen_inputs {
                return Err(SpecError::DuplicateSection("INPUTS"));
            }
            seen_inputs = true;
            for name in rest.split_whitespace() {
                signals.declare(name, SignalKind::Input)?;
            }
            idx += 1;
        } else if let Some(rest) = trimmed.strip_prefix("OUTPUTS:") {
            if seen_outputs {
                return Err(SpecError::DuplicateSection("OUTPUTS"));
            }
            seen_outputs = true;
            for name in rest.split_whitespace() {
                signals.declare(name, SignalKind::Output)?;
            }
            idx += 1;
        } else if let Some(rest) = trimmed.strip_prefix("SPEC:") {
            if spec_text.is_some() {
                return Err(SpecError::DuplicateSection("SPEC"));
            }
            // the formula may continue over the remaining lines
            let mut body = String::new();
            // preserve the column offset of the first fragment with padding
            let pad = lines[idx].len() - rest.len();
            body.push_str(&" ".repeat(pad));
            body.push_str(rest);
            for cont in &lines[idx + 1..] {
                body.push('\n');
                body.push_str(cont);
            }
            spec_text = Some((body, line_no));
            break;
        } else {
            return Err(SpecError::Syntax {
                line: line_no,
                col: 1,
                msg: "expected INPUTS:, OUTPUTS: or SPEC: section".to_string(),
            });
        }
    }

    let (body, start_line) = spec_text.ok_or(SpecError::MissingSpec)?;
    let formula = parse_formula(&body, &signals, start_line)?;
    Ok(SpecificationFile { signals, formula })
}
