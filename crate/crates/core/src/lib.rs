//! Bounded-state and bounded-cycle reactive synthesis from LTL.
//!
//! Given an LTL specification and bounds on the number of states and simple
//! cycles of the implementation, the crate encodes the synthesis problem
//! into SAT, decodes satisfying models into Mealy machines, and verifies
//! every produced machine independently with a run-graph model check and a
//! cycle recount.

pub mod automata;
pub mod bench;
pub mod cnf;
pub mod cycles;
pub mod encode;
pub mod graph;
pub mod hoa;
pub mod ltl;
pub mod machine;
pub mod search;
pub mod solver;
