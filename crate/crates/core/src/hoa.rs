//! Importer for a subset of the HOA omega-automaton exchange format:
//! version 1, a single start state, state-based Büchi acceptance, and
//! explicit transition labels as Boolean expressions over the declared
//! atomic propositions.
//!
//! The imported Büchi automaton is reinterpreted as a universal co-Büchi
//! automaton by taking the acceptance set as the rejecting set, mirroring
//! the last step of the LTL translation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automata::{Guard, UniversalCoBuchiAutomaton};
use crate::ltl::SignalSpace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HoaError {
    #[error("line {line}: malformed input: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unsupported HOA feature: {0}")]
    Unsupported(String),
    #[error("atomic proposition `{0}` is not a declared signal")]
    UnknownAp(String),
    #[error("missing {0} header")]
    MissingHeader(&'static str),
}

#[derive(Clone, Debug)]
enum LabelExpr {
    True,
    False,
    Ap(usize),
    Not(Box<LabelExpr>),
    And(Box<LabelExpr>, Box<LabelExpr>),
    Or(Box<LabelExpr>, Box<LabelExpr>),
}

impl LabelExpr {
    fn aps(&self, out: &mut Vec<usize>) {
        match self {
            LabelExpr::True | LabelExpr::False => {}
            LabelExpr::Ap(i) => out.push(*i),
            LabelExpr::Not(e) => e.aps(out),
            LabelExpr::And(a, b) | LabelExpr::Or(a, b) => {
                a.aps(out);
                b.aps(out);
            }
        }
    }

    fn eval(&self, assignment: &BTreeMap<usize, bool>) -> bool {
        match self {
            LabelExpr::True => true,
            LabelExpr::False => false,
            LabelExpr::Ap(i) => assignment[i],
            LabelExpr::Not(e) => !e.eval(assignment),
            LabelExpr::And(a, b) => a.eval(assignment) && b.eval(assignment),
            LabelExpr::Or(a, b) => a.eval(assignment) || b.eval(assignment),
        }
    }
}

struct LabelParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    text: &'a str,
}

impl LabelParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos] == ' ' {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> HoaError {
        HoaError::Malformed {
            line: self.line,
            msg: format!("{msg} in label `{}`", self.text),
        }
    }

    fn parse_or(&mut self) -> Result<LabelExpr, HoaError> {
        let mut lhs = self.parse_and()?;
        loop {
            self.skip_ws();
            if self.pos < self.chars.len() && self.chars[self.pos] == '|' {
                self.pos += 1;
                let rhs = self.parse_and()?;
                lhs = LabelExpr::Or(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_and(&mut self) -> Result<LabelExpr, HoaError> {
        let mut lhs = self.parse_unary()?;
        loop {
            self.skip_ws();
            if self.pos < self.chars.len() && self.chars[self.pos] == '&' {
                self.pos += 1;
                let rhs = self.parse_unary()?;
                lhs = LabelExpr::And(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<LabelExpr, HoaError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('!') => {
                self.pos += 1;
                Ok(LabelExpr::Not(Box::new(self.parse_unary()?)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_or()?;
                self.skip_ws();
                if self.chars.get(self.pos) == Some(&')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.err("expected `)`"))
                }
            }
            Some('t') => {
                self.pos += 1;
                Ok(LabelExpr::True)
            }
            Some('f') => {
                self.pos += 1;
                Ok(LabelExpr::False)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit())
                {
                    self.pos += 1;
                }
                let n: usize = self.chars[start..self.pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| self.err("bad AP index"))?;
                Ok(LabelExpr::Ap(n))
            }
            _ => Err(self.err("expected a label term")),
        }
    }
}

fn parse_label(text: &str, line: usize) -> Result<LabelExpr, HoaError> {
    let mut p = LabelParser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        text,
    };
    let e = p.parse_or()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Expands a label expression into guards (literal conjunctions) over the
/// signal ids behind the mentioned APs: one cube per satisfying assignment
/// of the mentioned propositions.
fn label_to_guards(expr: &LabelExpr, ap_signals: &[usize]) -> Vec<Guard> {
    let mut mentioned = Vec::new();
    expr.aps(&mut mentioned);
    mentioned.sort_unstable();
    mentioned.dedup();
    let mut guards = Vec::new();
    let count = mentioned.len();
    for bits in 0u64..(1 << count) {
        let assignment: BTreeMap<usize, bool> = mentioned
            .iter()
            .enumerate()
            .map(|(j, &ap)| (ap, bits & (1 << j) != 0))
            .collect();
        if expr.eval(&assignment) {
            let mut g = Guard::TOP;
            for (&ap, &val) in &assignment {
                let id = ap_signals[ap];
                if val {
                    g.pos |= 1 << id;
                } else {
                    g.neg |= 1 << id;
                }
            }
            guards.push(g);
        }
    }
    guards
}

/// Parses the supported HOA subset into a universal co-Büchi automaton over
/// the declared signals.
pub fn import_hoa(text: &str, signals: &SignalSpace) -> Result<UniversalCoBuchiAutomaton, HoaError> {
    let mut num_states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut ap_signals: Vec<usize> = Vec::new();
    let mut saw_hoa = false;
    let mut acceptance_ok = false;
    let mut lines = text.lines().enumerate().peekable();

    // header section
    for (idx, raw) in lines.by_ref() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "--BODY--" {
            break;
        }
        let (key, rest) = match line.split_once(':') {
            Some((k, r)) => (k.trim(), r.trim()),
            None => {
                return Err(HoaError::Malformed {
                    line: line_no,
                    msg: format!("expected `header: value`, got `{line}`"),
                })
            }
        };
        match key {
            "HOA" => {
                if rest != "v1" {
                    return Err(HoaError::Unsupported(format!("HOA version `{rest}`")));
                }
                saw_hoa = true;
            }
            "States" => {
                num_states = Some(rest.parse().map_err(|_| HoaError::Malformed {
                    line: line_no,
                    msg: format!("bad state count `{rest}`"),
                })?);
            }
            "Start" => {
                if start.is_some() {
                    return Err(HoaError::Unsupported(
                        "multiple start states".to_string(),
                    ));
                }
                if rest.contains('&') || rest.split_whitespace().count() != 1 {
                    return Err(HoaError::Unsupported(
                        "non-singleton start condition".to_string(),
                    ));
                }
                start = Some(rest.parse().map_err(|_| HoaError::Malformed {
                    line: line_no,
                    msg: format!("bad start state `{rest}`"),
                })?);
            }
            "AP" => {
                let mut parts = rest.split_whitespace();
                let declared: usize = parts
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or(HoaError::Malformed {
                        line: line_no,
                        msg: "missing AP count".to_string(),
                    })?;
                let names: Vec<String> = rest
                    .match_indices('"')
                    .collect::<Vec<_>>()
                    .chunks(2)
                    .filter_map(|pair| match pair {
                        [(a, _), (b, _)] => Some(rest[a + 1..*b].to_string()),
                        _ => None,
                    })
                    .collect();
                if names.len() != declared {
                    return Err(HoaError::Malformed {
                        line: line_no,
                        msg: format!("AP count {declared} but {} names", names.len()),
                    });
                }
                for name in names {
                    let id = signals
                        .id_of(&name)
                        .ok_or_else(|| HoaError::UnknownAp(name.clone()))?;
                    ap_signals.push(id);
                }
            }
            "Acceptance" => {
                let canon: String = rest.split_whitespace().collect::<Vec<_>>().join(" ");
                if canon == "1 Inf(0)" {
                    acceptance_ok = true;
                } else {
                    return Err(HoaError::Unsupported(format!(
                        "acceptance condition `{rest}` (only Büchi `1 Inf(0)` is supported)"
                    )));
                }
            }
            "acc-name" => {
                if rest != "Buchi" {
                    return Err(HoaError::Unsupported(format!("acc-name `{rest}`")));
                }
            }
            "Alias" => return Err(HoaError::Unsupported("aliases".to_string())),
            "name" | "tool" | "properties" => {}
            other => {
                return Err(HoaError::Unsupported(format!("header `{other}`")));
            }
        }
    }

    if !saw_hoa {
        return Err(HoaError::MissingHeader("HOA"));
    }
    let num_states = num_states.ok_or(HoaError::MissingHeader("States"))?;
    let start = start.ok_or(HoaError::MissingHeader("Start"))?;
    if !acceptance_ok {
        return Err(HoaError::MissingHeader("Acceptance"));
    }
    if start >= num_states {
        return Err(HoaError::Malformed {
            line: 0,
            msg: format!("start state {start} out of range"),
        });
    }

    // body section
    let mut transitions: Vec<Vec<(Guard, usize)>> = vec![Vec::new(); num_states];
    let mut rejecting = vec![false; num_states];
    let mut current: Option<usize> = None;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "--END--" {
            break;
        }
        if let Some(rest) = line.strip_prefix("State:") {
            let rest = rest.trim();
            if rest.starts_with('[') {
                return Err(HoaError::Unsupported("state labels".to_string()));
            }
            // `State: idx ["name"] [{acc sets}]`
            let (head, acc) = match rest.split_once('{') {
                Some((h, a)) => (h.trim(), Some(a.trim_end_matches('}').trim())),
                None => (rest, None),
            };
            let id: usize = head
                .split_whitespace()
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(HoaError::Malformed {
                    line: line_no,
                    msg: format!("bad state line `{line}`"),
                })?;
            if id >= num_states {
                return Err(HoaError::Malformed {
                    line: line_no,
                    msg: format!("state {id} out of range"),
                });
            }
            if let Some(acc) = acc {
                for set in acc.split_whitespace() {
                    if set == "0" {
                        rejecting[id] = true;
                    } else {
                        return Err(HoaError::Unsupported(format!(
                            "acceptance set {set}"
                        )));
                    }
                }
            }
            current = Some(id);
        } else if line.starts_with('[') {
            let from = current.ok_or(HoaError::Malformed {
                line: line_no,
                msg: "transition before any State:".to_string(),
            })?;
            let close = line.find(']').ok_or(HoaError::Malformed {
                line: line_no,
                msg: "unterminated label".to_string(),
            })?;
            let label = &line[1..close];
            let rest = line[close + 1..].trim();
            if rest.contains('{') {
                return Err(HoaError::Unsupported(
                    "transition-based acceptance".to_string(),
                ));
            }
            let target: usize = rest.parse().map_err(|_| HoaError::Malformed {
                line: line_no,
                msg: format!("bad transition target `{rest}`"),
            })?;
            if target >= num_states {
                return Err(HoaError::Malformed {
                    line: line_no,
                    msg: format!("target {target} out of range"),
                });
            }
            let expr = parse_label(label, line_no)?;
            for ap in {
                let mut v = Vec::new();
                expr.aps(&mut v);
                v
            } {
                if ap >= ap_signals.len() {
                    return Err(HoaError::Malformed {
                        line: line_no,
                        msg: format!("AP index {ap} out of range"),
                    });
                }
            }
            for guard in label_to_guards(&expr, &ap_signals) {
                transitions[from].push((guard, target));
            }
        } else {
            return Err(HoaError::Unsupported(format!(
                "implicit labels or unrecognized body line `{line}`"
            )));
        }
    }

    Ok(UniversalCoBuchiAutomaton {
        num_states,
        initial: start,
        transitions,
        rejecting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ltl_to_uca, uca_accepts_word};
    use crate::ltl::{parse_spec, LassoWord, Letter};

    /// A Büchi automaton for "eventually not a": the negation automaton of
    /// G a, as an LTL-to-automaton tool would emit it.
    const FINALLY_NOT_A: &str = r#"HOA: v1
name: "F !a"
States: 2
Start: 0
AP: 1 "a"
acc-name: Buchi
Acceptance: 1 Inf(0)
properties: trans-labels explicit-labels state-acc
--BODY--
State: 0
[t] 0
[!0] 1
State: 1 {0}
[t] 1
--END--
"#;

    #[test]
    fn imported_negation_automaton_matches_translation() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS:\nSPEC: G a").unwrap();
        let imported = import_hoa(FINALLY_NOT_A, &spec.signals).unwrap();
        let translated = ltl_to_uca(&spec);
        // sampling equivalence over 200 lasso words
        let mut state = 0xA5A5A5A5u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let plen = (next() % 4) as usize;
            let clen = 1 + (next() % 4) as usize;
            let letters = |len: usize, next: &mut dyn FnMut() -> u64| -> Vec<Letter> {
                (0..len).map(|_| Letter(next() & 1)).collect()
            };
            let w = LassoWord::new(letters(plen, &mut next), letters(clen, &mut next)).unwrap();
            assert_eq!(
                uca_accepts_word(&imported, &w),
                uca_accepts_word(&translated, &w),
                "disagreement on {}",
                w.format(&spec.signals)
            );
        }
    }

    #[test]
    fn universal_accept_all_rejects_everything_after_dualization() {
        // a one-state Büchi automaton accepting every word
        let text = r#"HOA: v1
States: 1
Start: 0
AP: 1 "a"
Acceptance: 1 Inf(0)
--BODY--
State: 0 {0}
[t] 0
--END--
"#;
        let spec = parse_spec("INPUTS: a\nOUTPUTS:\nSPEC: true").unwrap();
        let uca = import_hoa(text, &spec.signals).unwrap();
        let a = spec.signals.id_of("a").unwrap();
        for w in [
            LassoWord::new(vec![], vec![Letter::EMPTY]).unwrap(),
            LassoWord::new(vec![], vec![Letter::EMPTY.with(a)]).unwrap(),
        ] {
            assert!(!uca_accepts_word(&uca, &w));
        }
    }

    #[test]
    fn malformed_header_is_diagnosed() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS:\nSPEC: true").unwrap();
        let err = import_hoa("HOA v1\nStates: 1\n", &spec.signals).unwrap_err();
        assert!(matches!(err, HoaError::Malformed { line: 1, .. }));
    }

    #[test]
    fn unsupported_features_are_named() {
        let spec = parse_spec("INPUTS: a\nOUTPUTS:\nSPEC: true").unwrap();
        let generalized = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 2 Inf(0)&Inf(1)\n--BODY--\nState: 0\n--END--\n";
        match import_hoa(generalized, &spec.signals) {
            Err(HoaError::Unsupported(msg)) => assert!(msg.contains("acceptance")),
            other => panic!("{other:?}"),
        }
        let unknown_ap = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"zz\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n--END--\n";
        assert_eq!(
            import_hoa(unknown_ap, &spec.signals).unwrap_err(),
            HoaError::UnknownAp("zz".to_string())
        );
    }

    #[test]
    fn boolean_labels_expand_to_cubes() {
        let spec = parse_spec("INPUTS: a b\nOUTPUTS:\nSPEC: true").unwrap();
        let text = r#"HOA: v1
States: 1
Start: 0
AP: 2 "a" "b"
Acceptance: 1 Inf(0)
--BODY--
State: 0 {0}
[0 & !1 | 1 & !0] 0
--END--
"#;
        let uca = import_hoa(text, &spec.signals).unwrap();
        let a = spec.signals.id_of("a").unwrap();
        let b = spec.signals.id_of("b").unwrap();
        // exactly the xor letters satisfy some guard
        let sat = |l: Letter| uca.transitions[0].iter().any(|(g, _)| g.satisfied_by(l));
        assert!(!sat(Letter::EMPTY));
        assert!(sat(Letter::EMPTY.with(a)));
        assert!(sat(Letter::EMPTY.with(b)));
        assert!(!sat(Letter::EMPTY.with(a).with(b)));
    }
}
