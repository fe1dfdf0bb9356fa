use std::fmt;

use num_bigint::BigUint;

use super::dag::{TermDag, TermNode};

/// Size measures of the reachable part of a dag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagStats {
    pub apply_count: usize,
    /// Argument references out of reachable Apply nodes.
    pub edge_count: usize,
    /// Longest root-to-leaf path, in edges.
    pub dag_depth: usize,
    /// Node count of the root tuple with all sharing undone (summed over
    /// roots).
    pub tree_size: BigUint,
}

impl DagStats {
    /// Total of nodes and edges, the measure used to pick the smaller form.
    pub fn weight(&self) -> usize {
        self.apply_count + self.edge_count
    }
}

impl fmt::Display for DagStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "apply_count={} edge_count={} dag_depth={} tree_size={}",
            self.apply_count, self.edge_count, self.dag_depth, self.tree_size
        )
    }
}

pub fn dag_stats(dag: &TermDag) -> DagStats {
    let live = dag.reachable_mask();
    let mut depth = vec![0usize; dag.len()];
    let mut size: Vec<BigUint> = vec![BigUint::default(); dag.len()];
    let (mut apply_count, mut edge_count) = (0, 0);
    for id in dag.ids() {
        let k = id.index();
        if !live[k] {
            continue;
        }
        match dag.node(id) {
            TermNode::Bottom | TermNode::Top => size[k] = BigUint::from(1u32),
            TermNode::Apply { args, .. } => {
                apply_count += 1;
                edge_count += args.len();
                depth[k] = args.iter().map(|(_, t)| depth[t.index()] + 1).max().unwrap_or(0);
                let mut total = BigUint::from(1u32);
                for (_, t) in args {
                    total += &size[t.index()];
                }
                size[k] = total;
            }
        }
    }
    DagStats {
        apply_count,
        edge_count,
        dag_depth: dag.roots().iter().map(|r| depth[r.index()]).max().unwrap_or(0),
        tree_size: dag.roots().iter().map(|r| &size[r.index()]).sum(),
    }
}
