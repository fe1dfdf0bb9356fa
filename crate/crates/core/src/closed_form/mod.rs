//! Symbolic closed forms of the least fixpoint.
//!
//! Two constructions are provided, both as hash-consed [`TermDag`]s whose
//! Apply nodes stay uninterpreted until [`eval_dag`] is called:
//!
//! - the expanded form `F^k(⊥)`, one layer of applications per iteration;
//! - the pruned form `g_{∅,i}`, where an application of `f_i` occurring
//!   inside another application of `f_i` collapses to `⊥`.
//!
//! Applications only carry the arguments in their function's support, which
//! is what keeps the pruned form small for sparse dependency graphs.

mod build;
mod dag;
mod eval;
mod stats;

pub use build::{build_expanded, build_pruned, build_pruned_with, MemoKey, PrunedBuilder};
pub use dag::{TermDag, TermId, TermNode};
pub use eval::{check_dag, eval_dag, eval_nodes, eval_term};
pub use stats::{dag_stats, DagStats};

use crate::error::ShapeError;
use crate::semantics::{kleene_lfp, Fixpoint};
use crate::system::{ParamAssignment, System, Valuation, VarId};
use crate::text::print_bes;

/// Outcome of comparing the pruned form, the expanded form and Kleene
/// iteration on one parameter assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoremReport {
    Holds {
        kleene: Fixpoint,
        pruned: Valuation,
        expanded: Valuation,
    },
    Violated(TheoremCounterexample),
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        matches!(self, TheoremReport::Holds { .. })
    }
}

/// Everything needed to replay a disagreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremCounterexample {
    pub system_text: String,
    pub params: ParamAssignment,
    pub coordinate: VarId,
    pub kleene: Valuation,
    pub pruned: Valuation,
    pub expanded: Valuation,
}

/// Builds both closed forms once and checks them against Kleene iteration
/// for any number of parameter assignments.
pub struct TheoremChecker<'a> {
    sys: &'a System,
    pub pruned: TermDag,
    pub expanded: TermDag,
}

impl<'a> TheoremChecker<'a> {
    pub fn new(sys: &'a System) -> Self {
        TheoremChecker {
            sys,
            pruned: build_pruned(sys),
            expanded: build_expanded(sys, sys.len()),
        }
    }

    pub fn check(&self, p: &ParamAssignment) -> Result<TheoremReport, ShapeError> {
        let kleene = kleene_lfp(self.sys, p)?;
        let pruned = eval_dag(&self.pruned, self.sys, p)?;
        let expanded = eval_dag(&self.expanded, self.sys, p)?;
        let differs = (0..self.sys.len())
            .find(|&i| pruned.bits()[i] != kleene.value.bits()[i] || expanded.bits()[i] != kleene.value.bits()[i]);
        Ok(match differs {
            None => TheoremReport::Holds {
                kleene,
                pruned,
                expanded,
            },
            Some(i) => TheoremReport::Violated(TheoremCounterexample {
                system_text: print_bes(self.sys),
                params: p.clone(),
                coordinate: VarId(i),
                kleene: kleene.value,
                pruned,
                expanded,
            }),
        })
    }
}

/// Evaluates the pruned and expanded (`k = n`) forms and compares both with
/// [`kleene_lfp`].
pub fn verify_theorem(sys: &System, p: &ParamAssignment) -> Result<TheoremReport, ShapeError> {
    sys.check_params(p)?;
    TheoremChecker::new(sys).check(p)
}

/// Which closed form to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Pruned,
    Expanded,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Pruned => "pruned",
            Form::Expanded => "expanded",
        }
    }

    /// The pruned form, or the expanded form with `depth` layers
    /// (default `n`).
    pub fn build(self, sys: &System, depth: Option<usize>) -> TermDag {
        match self {
            Form::Pruned => build_pruned(sys),
            Form::Expanded => build_expanded(sys, depth.unwrap_or(sys.len())),
        }
    }
}

impl std::str::FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pruned" => Ok(Form::Pruned),
            "expanded" => Ok(Form::Expanded),
            _ => Err(format!("unknown form `{s}`, expected pruned or expanded")),
        }
    }
}

/// The form with the smaller [`DagStats::weight`]; pruned on a tie.
pub fn smaller_form(pruned: &DagStats, expanded: &DagStats) -> Form {
    if expanded.weight() < pruned.weight() {
        Form::Expanded
    } else {
        Form::Pruned
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::IndexSet;
    use crate::semantics::tuple_le;
    use crate::strategies::arb_system;
    use crate::system::MonotoneFormula as F;
    use crate::text::parse_bes;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn sys(text: &str) -> System {
        parse_bes(text).unwrap()
    }

    fn none() -> ParamAssignment {
        ParamAssignment::none()
    }

    /// Unshared tree, rebuilt by recursion over the dag.
    #[derive(Debug, PartialEq)]
    enum Tree {
        Bot,
        Top,
        App(VarId, Vec<(VarId, Tree)>),
    }

    fn unshare(dag: &TermDag, id: TermId) -> Tree {
        match dag.node(id) {
            TermNode::Bottom => Tree::Bot,
            TermNode::Top => Tree::Top,
            TermNode::Apply { func, args } => {
                Tree::App(*func, args.iter().map(|(v, t)| (*v, unshare(dag, *t))).collect())
            }
        }
    }

    fn eval_tree(t: &Tree, s: &System, p: &ParamAssignment) -> bool {
        match t {
            Tree::Bot => false,
            Tree::Top => true,
            Tree::App(f, args) => {
                let vals: Vec<(VarId, bool)> = args.iter().map(|(v, a)| (*v, eval_tree(a, s, p))).collect();
                s.formula(*f).eval_with(
                    &|v| vals.iter().find(|(k, _)| *k == v).is_some_and(|(_, b)| *b),
                    p.bits(),
                )
            }
        }
    }

    fn tree_nodes(t: &Tree) -> u64 {
        match t {
            Tree::App(_, args) => 1 + args.iter().map(|(_, a)| tree_nodes(a)).sum::<u64>(),
            _ => 1,
        }
    }

    /// `g_{S,i}` straight from its definition, with no memoization.
    fn pruned_tree(s: &System, set: &IndexSet, i: VarId) -> Tree {
        if set.contains(i) {
            return Tree::Bot;
        }
        let t = set.with(i);
        Tree::App(i, s.support(i).iter().map(|j| (j, pruned_tree(s, &t, j))).collect())
    }

    fn chain(n: usize) -> System {
        crate::gen::gen_family(&crate::gen::FamilySpec::chain(n)).unwrap()
    }

    fn complete(n: usize) -> System {
        crate::gen::gen_family(&crate::gen::FamilySpec::complete(n)).unwrap()
    }

    #[test]
    fn expanded_single_unrolling() {
        let s = sys("x = x;");
        let dag = build_expanded(&s, 1);
        let root = dag.roots()[0];
        assert_eq!(unshare(&dag, root), Tree::App(VarId(0), vec![(VarId(0), Tree::Bot)]));
        let zero = build_expanded(&s, 0);
        assert_eq!(zero.node(zero.roots()[0]), &TermNode::Bottom);
    }

    #[test]
    fn expanded_generic_three_has_nine_applications() {
        let dag = build_expanded(&complete(3), 3);
        assert_eq!(dag_stats(&dag).apply_count, 9);
        assert_eq!(dag_stats(&dag).edge_count, 27);
    }

    #[test]
    fn expanded_chain_four() {
        let dag = build_expanded(&chain(4), 4);
        let stats = dag_stats(&dag);
        assert_eq!((stats.apply_count, stats.edge_count), (16, 32));
        // recount by walking from the roots
        let mut seen = std::collections::HashSet::new();
        let mut edges = 0;
        let mut stack = dag.roots().to_vec();
        while let Some(id) = stack.pop() {
            if let TermNode::Apply { args, .. } = dag.node(id) {
                if seen.insert(id) {
                    edges += args.len();
                    stack.extend(args.iter().map(|(_, t)| *t));
                }
            }
        }
        assert_eq!((seen.len(), edges), (16, 32));
    }

    #[test]
    fn pruned_generic_two() {
        let s = complete(2);
        let dag = build_pruned(&s);
        let (a, b) = (VarId(0), VarId(1));
        let bot2 = |f| Tree::App(f, vec![(a, Tree::Bot), (b, Tree::Bot)]);
        assert_eq!(
            unshare(&dag, dag.roots()[0]),
            Tree::App(a, vec![(a, Tree::Bot), (b, bot2(b))])
        );
        assert_eq!(
            unshare(&dag, dag.roots()[1]),
            Tree::App(b, vec![(a, bot2(a)), (b, Tree::Bot)])
        );
    }

    #[test]
    fn pruned_eval_examples() {
        let s = sys("a = 1; b = a & c; c = b | a;");
        assert_eq!(
            eval_dag(&build_pruned(&s), &s, &none()).unwrap(),
            Valuation(vec![true; 3])
        );
        let s = sys("x = y | 1; y = x & y;");
        assert_eq!(
            eval_dag(&build_pruned(&s), &s, &none()).unwrap(),
            Valuation(vec![true, false])
        );
        let s = sys("x = x; y = y;");
        assert_eq!(
            eval_dag(&build_expanded(&s, 0), &s, &none()).unwrap(),
            Valuation(vec![false; 2])
        );
    }

    #[test]
    fn eval_rejects_mismatched_dag() {
        let s2 = sys("x = y; y = x;");
        let s1 = sys("x = x;");
        assert!(matches!(
            eval_dag(&build_pruned(&s2), &s1, &none()),
            Err(ShapeError::DagMismatch(_))
        ));
        let other = sys("x = x & y; y = x;");
        assert!(matches!(
            eval_dag(&build_pruned(&s2), &other, &none()),
            Err(ShapeError::DagMismatch(_))
        ));
    }

    #[test]
    fn stats_examples() {
        let dag = build_expanded(&sys("x = x; y = y;"), 0);
        let st = dag_stats(&dag);
        assert_eq!((st.apply_count, st.edge_count, st.dag_depth), (0, 0, 0));
        assert_eq!(st.tree_size, BigUint::from(2u32));

        let st = dag_stats(&build_pruned(&chain(4)));
        assert_eq!(st.apply_count, 8);
        assert_eq!(st.dag_depth, 2);
    }

    #[test]
    fn complete_family_pruned_count_matches_enumeration() {
        for n in 1..=10 {
            // pairs (S, i) with i ∉ S, all reachable from (∅, j) for a
            // complete dependency graph
            let enumerated = (0..1u64 << n)
                .map(|mask| (0..n).filter(|i| mask >> i & 1 == 0).count())
                .sum::<usize>();
            assert_eq!(enumerated, n << (n - 1));
            assert_eq!(
                dag_stats(&build_pruned(&complete(n))).apply_count,
                enumerated,
                "n = {n}"
            );
        }
    }

    #[test]
    fn verify_theorem_examples() {
        let report = verify_theorem(&sys("x = x;"), &none()).unwrap();
        assert!(matches!(report, TheoremReport::Holds { ref pruned, .. } if *pruned == Valuation(vec![false])));
        let report = verify_theorem(&sys("a = 1; b = a & c; c = b | a;"), &none()).unwrap();
        let TheoremReport::Holds {
            kleene,
            pruned,
            expanded,
        } = report
        else {
            panic!("theorem violated");
        };
        assert_eq!(kleene.value, Valuation(vec![true; 3]));
        assert_eq!(pruned, kleene.value);
        assert_eq!(expanded, kleene.value);
        assert!(verify_theorem(&sys("x = ?p;"), &none()).is_err());
    }

    #[test]
    fn verify_theorem_generic_two_instantiations() {
        let choices = [
            F::and(F::var(0), F::var(1)),
            F::or(F::var(0), F::var(1)),
            F::Const(false),
            F::Const(true),
        ];
        for f in &choices {
            for g in &choices {
                let s = System::with_default_names(0, vec![f.clone(), g.clone()]).unwrap();
                assert!(verify_theorem(&s, &none()).unwrap().holds());
            }
        }
    }

    #[test]
    fn gfp_closed_form_by_leaf_swap() {
        let s = sys("a = a & ?p; b = a | b; c = c & b;");
        let dual = crate::semantics::dualize(&s);
        let dag = build_pruned(&dual).swap_leaves();
        for p in ParamAssignment::enumerate(1) {
            assert_eq!(
                eval_dag(&dag, &s, &p).unwrap(),
                crate::semantics::greatest_fixpoint(&s, &p).unwrap().value
            );
        }
    }

    proptest! {
        #[test]
        fn theorem_holds((s, p) in arb_system(6, 3)) {
            let report = verify_theorem(&s, &p).unwrap();
            prop_assert!(report.holds(), "{:?}", report);
        }

        #[test]
        fn pruned_below_expanded((s, p) in arb_system(6, 3)) {
            let pr = eval_dag(&build_pruned(&s), &s, &p).unwrap();
            let ex = eval_dag(&build_expanded(&s, s.len()), &s, &p).unwrap();
            prop_assert!(tuple_le(&pr, &ex).unwrap());
        }

        #[test]
        fn sharing_is_semantically_transparent((s, p) in arb_system(4, 2)) {
            for dag in [build_pruned(&s), build_expanded(&s, s.len())] {
                let values = eval_nodes(&dag, &s, &p).unwrap();
                let mut size = 0u64;
                for r in dag.roots() {
                    let tree = unshare(&dag, *r);
                    prop_assert_eq!(eval_tree(&tree, &s, &p), values[r.index()]);
                    size += tree_nodes(&tree);
                }
                prop_assert_eq!(dag_stats(&dag).tree_size, BigUint::from(size));
            }
        }

        #[test]
        fn structurally_equal_subterms_share_ids((s, _p) in arb_system(5, 2)) {
            let dag = build_pruned(&s);
            let trees: Vec<Tree> = dag.ids().map(|id| unshare(&dag, id)).collect();
            for a in 0..trees.len() {
                for b in a + 1..trees.len() {
                    prop_assert_ne!(&trees[a], &trees[b]);
                }
            }
        }

        #[test]
        fn pruned_matches_definition((s, _p) in arb_system(4, 1)) {
            let dag = build_pruned(&s);
            for i in s.vars() {
                prop_assert_eq!(unshare(&dag, dag.roots()[i.0]), pruned_tree(&s, &IndexSet::new(), i));
            }
        }

        #[test]
        fn canonical_memo_key_is_sound((s, p) in arb_system(4, 2)) {
            let canonical = build_pruned(&s);
            let reference = build_pruned_with(&s, MemoKey::Full);
            prop_assert_eq!(eval_dag(&canonical, &s, &p).unwrap(), eval_dag(&reference, &s, &p).unwrap());
            for i in 0..s.len() {
                prop_assert_eq!(
                    unshare(&canonical, canonical.roots()[i]),
                    unshare(&reference, reference.roots()[i])
                );
            }
        }

        #[test]
        fn expanded_size_bound((s, _p) in arb_system(6, 2), k in 0usize..8) {
            let st = dag_stats(&build_expanded(&s, k));
            prop_assert!(st.apply_count <= k * s.len());
        }

        #[test]
        fn stats_invariants((s, _p) in arb_system(6, 2)) {
            for dag in [build_pruned(&s), build_expanded(&s, s.len())] {
                let st = dag_stats(&dag);
                prop_assert!(st.apply_count <= st.edge_count + dag.roots().len());
                prop_assert!(st.tree_size >= BigUint::from(st.apply_count));
            }
        }
    }
}
