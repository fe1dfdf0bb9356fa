use std::collections::HashMap;

use crate::system::VarId;

/// Index of a node in a [`TermDag`]. Ids are stable: the node table only
/// grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub(crate) u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A node of a closed-form expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Bottom,
    Top,
    /// `f_func` applied to one argument per variable in its support, sorted
    /// by variable.
    Apply {
        func: VarId,
        args: Vec<(VarId, TermId)>,
    },
}

/// Hash-consed expression graph with one root per state variable.
///
/// Structurally equal nodes share one id, and every argument points to an
/// earlier entry, so the table order is a topological order.
#[derive(Clone, Debug, Default)]
pub struct TermDag {
    nodes: Vec<TermNode>,
    cons: HashMap<TermNode, TermId>,
    roots: Vec<TermId>,
}

impl PartialEq for TermDag {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.roots == other.roots
    }
}

impl Eq for TermDag {}

impl TermDag {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: TermNode) -> TermId {
        if let Some(&id) = self.cons.get(&node) {
            return id;
        }
        let id = TermId(u32::try_from(self.nodes.len()).expect("term dag exceeds u32::MAX nodes"));
        self.nodes.push(node.clone());
        self.cons.insert(node, id);
        id
    }

    pub fn bottom(&mut self) -> TermId {
        self.intern(TermNode::Bottom)
    }

    pub fn top(&mut self) -> TermId {
        self.intern(TermNode::Top)
    }

    /// Interns `f_func(args)`.
    ///
    /// Panics if `args` is not strictly sorted by variable or refers to a
    /// node not yet in the table.
    pub fn apply(&mut self, func: VarId, args: Vec<(VarId, TermId)>) -> TermId {
        assert!(
            args.windows(2).all(|w| w[0].0 < w[1].0),
            "apply args must be sorted and distinct"
        );
        assert!(
            args.iter().all(|(_, t)| t.index() < self.nodes.len()),
            "apply args must refer to existing nodes"
        );
        self.intern(TermNode::Apply { func, args })
    }

    pub fn set_roots(&mut self, roots: Vec<TermId>) {
        assert!(roots.iter().all(|t| t.index() < self.nodes.len()), "root out of range");
        self.roots = roots;
    }

    pub fn roots(&self) -> &[TermId] {
        &self.roots
    }

    pub fn node(&self, id: TermId) -> &TermNode {
        &self.nodes[id.index()]
    }

    /// Number of nodes in the table, reachable or not.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lookup(&self, node: &TermNode) -> Option<TermId> {
        self.cons.get(node).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = TermId> {
        (0..self.nodes.len() as u32).map(TermId)
    }

    /// Flags for nodes reachable from the roots, indexed by id.
    pub fn reachable_mask(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        for r in &self.roots {
            live[r.index()] = true;
        }
        for k in (0..self.nodes.len()).rev() {
            if !live[k] {
                continue;
            }
            if let TermNode::Apply { args, .. } = &self.nodes[k] {
                for (_, t) in args {
                    live[t.index()] = true;
                }
            }
        }
        live
    }

    /// Reachable ids in ascending (topological) order.
    pub fn reachable(&self) -> Vec<TermId> {
        self.reachable_mask()
            .into_iter()
            .enumerate()
            .filter_map(|(k, live)| live.then_some(TermId(k as u32)))
            .collect()
    }

    /// Copy of the reachable part with `Bottom` and `Top` exchanged.
    ///
    /// A closed form built from the dual system turns into a closed form of
    /// the primal greatest fixpoint this way.
    pub fn swap_leaves(&self) -> TermDag {
        let mut out = TermDag::new();
        let mut map: Vec<Option<TermId>> = vec![None; self.nodes.len()];
        for id in self.reachable() {
            let new = match self.node(id) {
                TermNode::Bottom => out.top(),
                TermNode::Top => out.bottom(),
                TermNode::Apply { func, args } => {
                    let args = args
                        .iter()
                        .map(|(v, t)| (*v, map[t.index()].expect("topological")))
                        .collect();
                    out.apply(*func, args)
                }
            };
            map[id.index()] = Some(new);
        }
        out.roots = self
            .roots
            .iter()
            .map(|r| map[r.index()].expect("root reachable"))
            .collect();
        out
    }

    /// Nodes referencing each node (including root-tuple references), over
    /// the reachable part.
    pub fn use_counts(&self) -> Vec<usize> {
        let live = self.reachable_mask();
        let mut uses = vec![0; self.nodes.len()];
        for r in &self.roots {
            uses[r.index()] += 1;
        }
        for (k, node) in self.nodes.iter().enumerate() {
            if let (true, TermNode::Apply { args, .. }) = (live[k], node) {
                for (_, t) in args {
                    uses[t.index()] += 1;
                }
            }
        }
        uses
    }
}
