//! Least fixpoints of monotone boolean equation systems, and symbolic
//! closed forms for them.
//!
//! A [`System`] `x_i = f_i(x)` over the booleans has a least solution
//! reachable by Kleene iteration from `0⃗` in at most `n` steps. Besides
//! computing that value ([`kleene_lfp`]), the crate builds expressions for
//! it without evaluating anything: the expanded form `F^n(⊥)` and the pruned
//! form, where an application of `f_i` nested inside another application of
//! `f_i` is replaced by `⊥`. Both are hash-consed [`TermDag`]s that can be
//! evaluated, measured, printed, or encoded to CNF for a SAT solver.

pub mod closed_form;
pub mod emit;
pub mod error;
pub mod gen;
pub mod index_set;
pub mod semantics;
pub mod system;
pub mod text;
pub mod verify;

#[cfg(test)]
mod strategies;

pub use closed_form::{
    build_expanded, build_pruned, dag_stats, eval_dag, smaller_form, verify_theorem, DagStats, Form, TermDag, TermId,
    TermNode, TheoremReport,
};
pub use error::{EmitError, GenError, ParseError, ParseErrorKind, ShapeError, SystemError};
pub use index_set::IndexSet;
pub use semantics::{
    dualize, eval_formula, greatest_fixpoint, kleene_lfp, masked_kleene, step, support, tuple_le, Fixpoint,
};
pub use system::{MonotoneFormula, ParamAssignment, ParamId, Polarity, System, Valuation, VarId};
pub use text::{parse_bes, print_bes};
