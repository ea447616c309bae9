//! Built-in specification families: the cycle-doubling gadget, the
//! request-response monitor family, and the state/cycle trade-off family.

use crate::ltl::{LtlFormula, SignalKind, SignalSpace, SpecificationFile};

/// Conjoins the base specification with `G (a <-> X b)` over a fresh input
/// `a` and a fresh output `b` (suffixed `a_1`, `b_1`, ... when taken).
/// Every implementation must remember the last `a` for one step, which at
/// least doubles the cycles contributed by any cycle of the base machine.
pub fn gen_blowup_gadget(base: &SpecificationFile) -> SpecificationFile {
    let mut signals = base.signals.clone();
    let (a_name, b_name) = fresh_pair(&signals);
    let a = signals
        .declare(&a_name, SignalKind::Input)
        .expect("fresh name");
    let b = signals
        .declare(&b_name, SignalKind::Output)
        .expect("fresh name");
    let gadget = LtlFormula::globally(LtlFormula::iff(
        LtlFormula::atom(a),
        LtlFormula::next(LtlFormula::atom(b)),
    ));
    SpecificationFile {
        signals,
        formula: LtlFormula::and(base.formula.clone(), gadget),
    }
}

fn fresh_pair(signals: &SignalSpace) -> (String, String) {
    if signals.id_of("a").is_none() && signals.id_of("b").is_none() {
        return ("a".to_string(), "b".to_string());
    }
    for i in 1.. {
        let a = format!("a_{i}");
        let b = format!("b_{i}");
        if signals.id_of(&a).is_none() && signals.id_of(&b).is_none() {
            return (a, b);
        }
    }
    unreachable!()
}

/// Request-response monitor family of linear size: the output `s` must be
/// raised infinitely often exactly as long as the monitored implication
/// between the two request blocks holds.
///
/// Synthesis on this family is intractable beyond trivial parameters (the
/// implementations explode doubly exponentially); the generator exists for
/// formula-construction coverage and as fuzz input.
pub fn gen_monitor_family(n: usize) -> SpecificationFile {
    assert!(n >= 1);
    let mut signals = SignalSpace::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut d = Vec::new();
    for (list, prefix) in [(&mut a, "a"), (&mut b, "b"), (&mut c, "c"), (&mut d, "d")] {
        for i in 1..=n {
            list.push(
                signals
                    .declare(&format!("{prefix}{i}"), SignalKind::Input)
                    .expect("fresh"),
            );
        }
    }
    let s = signals.declare("s", SignalKind::Output).expect("fresh");

    let block = |xs: &[usize], ys: &[usize]| -> LtlFormula {
        let mut conjuncts = xs.iter().zip(ys).map(|(&x, &y)| {
            LtlFormula::implies(
                LtlFormula::atom(x),
                LtlFormula::finally(LtlFormula::atom(y)),
            )
        });
        let first = conjuncts.next().expect("n >= 1");
        conjuncts.fold(first, LtlFormula::and)
    };
    let premise = block(&a, &b);
    let conclusion = block(&c, &d);
    let formula = LtlFormula::iff(
        LtlFormula::globally(LtlFormula::implies(
            LtlFormula::finally(premise),
            LtlFormula::finally(conclusion),
        )),
        LtlFormula::globally(LtlFormula::finally(LtlFormula::atom(s))),
    );
    SpecificationFile { signals, formula }
}

/// State/cycle trade-off family over one input `a` and outputs `b`, `c`:
/// a fixed-horizon pattern that forces `k` bits of input memory. At the
/// minimal state count every implementation has `2^k` cycles; one extra
/// state brings the cycle count down to one.
pub fn gen_tradeoff_family(k: usize) -> SpecificationFile {
    assert!(k >= 1);
    let mut signals = SignalSpace::new();
    let a = signals.declare("a", SignalKind::Input).expect("fresh");
    let b = signals.declare("b", SignalKind::Output).expect("fresh");
    let c = signals.declare("c", SignalKind::Output).expect("fresh");

    let not_b_and_c = || {
        LtlFormula::and(
            LtlFormula::not(LtlFormula::atom(b)),
            LtlFormula::atom(c),
        )
    };
    let step_pattern = || {
        // !c && X !c && (a <-> X b)
        LtlFormula::and(
            LtlFormula::and(
                LtlFormula::not(LtlFormula::atom(c)),
                LtlFormula::next(LtlFormula::not(LtlFormula::atom(c))),
            ),
            LtlFormula::iff(LtlFormula::atom(a), LtlFormula::next(LtlFormula::atom(b))),
        )
    };

    let mut formula = LtlFormula::and(
        not_b_and_c(),
        LtlFormula::next_n(not_b_and_c(), k + 2),
    );
    for i in 1..=k {
        formula = LtlFormula::and(formula, LtlFormula::next_n(step_pattern(), i));
    }
    SpecificationFile { signals, formula }
}

/// Families exposed on the command line: `gadget` applies the doubling
/// gadget `param` times to a one-output base, `monitor` and `tradeoff` are
/// the two parametric families.
pub fn family(name: &str, param: usize) -> Option<SpecificationFile> {
    match name {
        "gadget" => {
            let mut spec = crate::ltl::parse_spec("OUTPUTS: c\nSPEC: G c").ok()?;
            for _ in 0..param.max(1) {
                spec = gen_blowup_gadget(&spec);
            }
            Some(spec)
        }
        "monitor" => (param >= 1).then(|| gen_monitor_family(param)),
        "tradeoff" => (param >= 1).then(|| gen_tradeoff_family(param)),
        _ => None,
    }
}

pub const FAMILY_NAMES: &[&str] = &["gadget", "monitor", "tradeoff"];
