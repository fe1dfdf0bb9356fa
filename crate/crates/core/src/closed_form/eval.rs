use crate::error::ShapeError;
use crate::system::{ParamAssignment, System, Valuation};

use super::dag::{TermDag, TermId, TermNode};

/// Checks that `dag` fits `sys`: one root per variable and every Apply
/// node's argument keys equal to its function's support.
pub fn check_dag(dag: &TermDag, sys: &System) -> Result<(), ShapeError> {
    if dag.roots().len() != sys.len() {
        return Err(ShapeError::DagMismatch(format!(
            "{} roots for a system of {} equations",
            dag.roots().len(),
            sys.len()
        )));
    }
    for id in dag.ids() {
        if let TermNode::Apply { func, args } = dag.node(id) {
            if func.0 >= sys.len() {
                return Err(ShapeError::DagMismatch(format!(
                    "node {} applies equation #{}",
                    id.index(),
                    func.0
                )));
            }
            if !args.iter().map(|(v, _)| *v).eq(sys.support(*func).iter()) {
                return Err(ShapeError::DagMismatch(format!(
                    "node {} passes arguments that differ from the support of `{}`",
                    id.index(),
                    sys.var_name(*func)
                )));
            }
        }
    }
    Ok(())
}

/// Value of every node, indexed by id. `⊥` is 0, `⊤` is 1, and variables
/// outside an application's support are read as 0.
pub fn eval_nodes(dag: &TermDag, sys: &System, p: &ParamAssignment) -> Result<Vec<bool>, ShapeError> {
    check_dag(dag, sys)?;
    sys.check_params(p)?;
    let mut values: Vec<bool> = Vec::with_capacity(dag.len());
    for id in dag.ids() {
        let v = match dag.node(id) {
            TermNode::Bottom => false,
            TermNode::Top => true,
            TermNode::Apply { func, args } => sys.formula(*func).eval_with(
                &|var| {
                    args.binary_search_by_key(&var, |(k, _)| *k)
                        .is_ok_and(|at| values[args[at].1.index()])
                },
                p.bits(),
            ),
        };
        values.push(v);
    }
    Ok(values)
}

/// Values of the root tuple.
pub fn eval_dag(dag: &TermDag, sys: &System, p: &ParamAssignment) -> Result<Valuation, ShapeError> {
    let values = eval_nodes(dag, sys, p)?;
    Ok(Valuation(dag.roots().iter().map(|r| values[r.index()]).collect()))
}

/// Value of a single node.
pub fn eval_term(dag: &TermDag, sys: &System, p: &ParamAssignment, id: TermId) -> Result<bool, ShapeError> {
    Ok(eval_nodes(dag, sys, p)?[id.index()])
}
