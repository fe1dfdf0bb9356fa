use std::collections::HashMap;

use crate::index_set::IndexSet;
use crate::system::{System, VarId};

use super::dag::{TermDag, TermId};

/// Symbolic `F^k(⊥)`: level 0 is `⊥` everywhere, level `l` applies each
/// `f_i` to the level `l-1` terms of its support. At most `k·n` Apply
/// nodes.
pub fn build_expanded(sys: &System, k: usize) -> TermDag {
    let mut dag = TermDag::new();
    let bottom = dag.bottom();
    let mut level = vec![bottom; sys.len()];
    for _ in 0..k {
        level = sys
            .vars()
            .map(|i| {
                let args = sys.support(i).iter().map(|j| (j, level[j.0])).collect();
                dag.apply(i, args)
            })
            .collect();
    }
    dag.set_roots(level);
    dag
}

/// How [`PrunedBuilder`] keys its memo table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoKey {
    /// `(S ∩ cone_of_influence(i), i)`: only indices that can still be
    /// consulted below `g_{S,i}` distinguish entries.
    ConeOfInfluence,
    /// The raw `(S, i)`. Reference behaviour for testing the canonical key.
    Full,
}

/// Incremental builder for the pruned family
/// `g_{S,i} = ⊥` if `i ∈ S`, else `f_i(g_{S∪{i},j} for j ∈ support(f_i))`.
///
/// Terms for any `(S, i)` can be requested; they all land in one dag.
pub struct PrunedBuilder<'a> {
    sys: &'a System,
    dag: TermDag,
    bottom: TermId,
    memo: HashMap<(IndexSet, VarId), TermId>,
    cones: Vec<IndexSet>,
    key: MemoKey,
}

impl<'a> PrunedBuilder<'a> {
    pub fn new(sys: &'a System) -> Self {
        Self::with_key(sys, MemoKey::ConeOfInfluence)
    }

    pub fn with_key(sys: &'a System, key: MemoKey) -> Self {
        let mut dag = TermDag::new();
        let bottom = dag.bottom();
        let cones = match key {
            MemoKey::ConeOfInfluence => sys.vars().map(|v| sys.cone_of_influence(v)).collect(),
            MemoKey::Full => Vec::new(),
        };
        PrunedBuilder {
            sys,
            dag,
            bottom,
            memo: HashMap::new(),
            cones,
            key,
        }
    }

    /// The term `g_{S,i}`.
    pub fn term(&mut self, s: &IndexSet, i: VarId) -> TermId {
        if s.contains(i) {
            return self.bottom;
        }
        let key_set = match self.key {
            MemoKey::ConeOfInfluence => s.intersection(&self.cones[i.0]),
            MemoKey::Full => s.clone(),
        };
        if let Some(&id) = self.memo.get(&(key_set.clone(), i)) {
            return id;
        }
        let t = key_set.with(i);
        let args = self.sys.support(i).iter().map(|j| (j, self.term(&t, j))).collect();
        let id = self.dag.apply(i, args);
        self.memo.insert((key_set, i), id);
        id
    }

    /// Number of memo entries so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn dag(&self) -> &TermDag {
        &self.dag
    }

    /// Finishes with `roots` as the root tuple.
    pub fn finish(mut self, roots: Vec<TermId>) -> TermDag {
        self.dag.set_roots(roots);
        self.dag
    }
}

/// Symbolic `(g_{∅,1}, .., g_{∅,n})`.
pub fn build_pruned(sys: &System) -> TermDag {
    build_pruned_with(sys, MemoKey::ConeOfInfluence)
}

pub fn build_pruned_with(sys: &System, key: MemoKey) -> TermDag {
    let mut builder = PrunedBuilder::with_key(sys, key);
    let empty = IndexSet::new();
    let roots = sys.vars().map(|i| builder.term(&empty, i)).collect();
    builder.finish(roots)
}
