use num_bigint::BigUint;

use crate::closed_form::{dag_stats, TermDag, TermId, TermNode};
use crate::error::EmitError;
use crate::system::System;

/// Unshared node count above which [`to_sexpr`] refuses to print.
pub const DEFAULT_SEXPR_LIMIT: u64 = 1_000_000;

/// Root tuple as `(t_1 t_2 ..)`, each term in prefix form with all sharing
/// undone: `(f bot (g bot bot))`.
pub fn to_sexpr(dag: &TermDag, sys: &System) -> Result<String, EmitError> {
    to_sexpr_with_limit(dag, sys, DEFAULT_SEXPR_LIMIT)
}

pub fn to_sexpr_with_limit(dag: &TermDag, sys: &System, limit: u64) -> Result<String, EmitError> {
    let tree_size = dag_stats(dag).tree_size;
    if tree_size > BigUint::from(limit) {
        return Err(EmitError::TooLarge {
            tree_size: tree_size.to_string(),
            limit,
        });
    }
    let mut out = String::from("(");
    for (k, r) in dag.roots().iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write_term(dag, sys, *r, &mut out);
    }
    out.push(')');
    Ok(out)
}

/// One term in prefix form. No size guard.
pub fn term_sexpr(dag: &TermDag, sys: &System, id: TermId) -> String {
    let mut out = String::new();
    write_term(dag, sys, id, &mut out);
    out
}

fn write_term(dag: &TermDag, sys: &System, id: TermId, out: &mut String) {
    match dag.node(id) {
        TermNode::Bottom => out.push_str("bot"),
        TermNode::Top => out.push_str("top"),
        TermNode::Apply { func, args } => {
            out.push('(');
            out.push_str(sys.var_name(*func));
            for (_, t) in args {
                out.push(' ');
                write_term(dag, sys, *t, out);
            }
            out.push(')');
        }
    }
}
