//! Executable checks that the closed forms equal the least fixpoint, and of
//! the intermediate facts that argument rests on.
//!
//! Each [`Suite`] is a property that must hold for every system and
//! parameter assignment. Properties quantified over index sets `S` are
//! checked for every subset when `n ≤ 10` and for a seeded sample
//! otherwise. A failing check yields a [`Violation`] that can be written
//! out as a replayable BES file.
//!
//! Notation: `h_S` is one Kleene step with the coordinates in `S` held at
//! 0, `h_{S,i}` is its `i`-th coordinate, and `g_{S,i}` is the pruned term
//! for `x_i` inside applications of the functions in `S`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::{
    build_pruned_with, dag_stats, eval_nodes, MemoKey, PrunedBuilder, TermDag, TermId, TermNode, TheoremChecker,
    TheoremReport,
};
use crate::gen::{gen_random_instance, RandomBounds};
use crate::index_set::{all_subsets, IndexSet};
use crate::semantics::{kleene_lfp, masked_step_bits, step_bits};
use crate::system::{MonotoneFormula, ParamAssignment, System, VarId};
use crate::text::print_bes;

const EXHAUSTIVE_SUBSETS_MAX_N: usize = 10;
const SAMPLED_SUBSETS: usize = 64;
const TREE_ORACLE_LIMIT: u64 = 100_000;
/// Parameter counts above this are sampled instead of enumerated.
const EXHAUSTIVE_PARAMS_MAX: usize = 10;
const SAMPLED_PARAMS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    /// pruned = Kleene = expanded
    Equivalence,
    /// pruned ≤ expanded
    PrunedBelowExpanded,
    /// `g_{S,i}(0⃗) ≤ f_i(F^{n-|S|-1}(0⃗))` for `S ⊊ [0,n)`
    PrunedBelowIterate,
    /// `f_i(H^m(0⃗)) = 0` implies `f_i(H^p(0⃗)) = 0` for `p ≤ m`, `H = h_S`
    ZeroPersists,
    /// `f_i(h_S^m(0⃗)) = 0` implies `h_S^p(0⃗) = h_{S∪{i}}^p(0⃗)` for `p ≤ m`
    MaskExtension,
    /// `h_{S,i}(h_S^m(0⃗)) ≤ g_{S,i}(0⃗)` for `m ≤ n-|S|`
    IterateBelowPruned,
    /// Replacing `x_i` by 0 inside `f_i` keeps the least fixpoint
    Bekic,
    /// Canonical memo keys build the same terms as full `(S, i)` keys
    MemoKey,
    /// No duplicate nodes; evaluation agrees with the unshared tree
    HashConsing,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Equivalence,
        Suite::PrunedBelowExpanded,
        Suite::PrunedBelowIterate,
        Suite::ZeroPersists,
        Suite::MaskExtension,
        Suite::IterateBelowPruned,
        Suite::Bekic,
        Suite::MemoKey,
        Suite::HashConsing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Equivalence => "equivalence",
            Suite::PrunedBelowExpanded => "pruned-le-expanded",
            Suite::PrunedBelowIterate => "pruned-le-iterate",
            Suite::ZeroPersists => "zero-persists",
            Suite::MaskExtension => "mask-extension",
            Suite::IterateBelowPruned => "iterate-le-pruned",
            Suite::Bekic => "bekic",
            Suite::MemoKey => "memo-key",
            Suite::HashConsing => "hash-consing",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed check, with enough context to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub suite: Suite,
    pub system: System,
    pub params: ParamAssignment,
    pub detail: String,
}

impl Violation {
    /// The system in BES syntax, preceded by comments naming the suite,
    /// the parameter assignment and what went wrong.
    pub fn to_bes(&self) -> String {
        let params: Vec<String> = self
            .system
            .param_names()
            .iter()
            .zip(self.params.bits())
            .map(|(n, b)| format!("{n}={}", u8::from(*b)))
            .collect();
        let mut out = format!("# counterexample for suite {}\n", self.suite);
        if !params.is_empty() {
            out.push_str(&format!("# params: {}\n", params.join(",")));
        }
        for line in self.detail.lines() {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str(&print_bes(&self.system));
        out
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.suite, self.detail)
    }
}

fn fmt_bits(bits: &[bool]) -> String {
    crate::system::Valuation(bits.to_vec()).to_string()
}

fn fmt_set(sys: &System, s: &IndexSet) -> String {
    let names: Vec<&str> = s.iter().map(|v| sys.var_name(v)).collect();
    format!("{{{}}}", names.join(","))
}

/// Precomputed data shared by all suites for one system.
pub struct SystemChecks<'a> {
    sys: &'a System,
    subsets: Vec<IndexSet>,
    theorem: TheoremChecker<'a>,
    /// Dag holding `g_{S,i}` for every sampled `S` and every `i`.
    family: TermDag,
    family_ids: HashMap<(IndexSet, VarId), TermId>,
    reference: TermDag,
    bekic: Vec<System>,
}

impl<'a> SystemChecks<'a> {
    pub fn new(sys: &'a System) -> Self {
        Self::with_seed(sys, 0)
    }

    /// `seed` only matters when `S` has to be sampled (`n > 10`).
    pub fn with_seed(sys: &'a System, seed: u64) -> Self {
        let n = sys.len();
        let subsets: Vec<IndexSet> = if n <= EXHAUSTIVE_SUBSETS_MAX_N {
            all_subsets(n).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sample = vec![IndexSet::new()];
            for _ in 0..SAMPLED_SUBSETS {
                let density: f64 = rng.gen();
                sample.push(sys.vars().filter(|_| rng.gen_bool(density)).collect());
            }
            sample.push(IndexSet::full(n));
            sample
        };
        let mut builder = PrunedBuilder::new(sys);
        let mut family_ids = HashMap::new();
        for s in &subsets {
            for i in sys.vars() {
                family_ids.insert((s.clone(), i), builder.term(s, i));
            }
        }
        let roots = sys.vars().map(|i| family_ids[&(IndexSet::new(), i)]).collect();
        let family = builder.finish(roots);
        let bekic = sys
            .vars()
            .map(|i| {
                let f = sys.formula(i).substitute(i, &MonotoneFormula::Const(false));
                sys.with_formula(i, f).expect("substitution keeps the system valid")
            })
            .collect();
        SystemChecks {
            sys,
            subsets,
            theorem: TheoremChecker::new(sys),
            family,
            family_ids,
            reference: build_pruned_with(sys, MemoKey::Full),
            bekic,
        }
    }

    fn violation(&self, suite: Suite, p: &ParamAssignment, detail: String) -> Box<Violation> {
        Box::new(Violation {
            suite,
            system: self.sys.clone(),
            params: p.clone(),
            detail,
        })
    }

    /// `h_S^m(0⃗)` for `m = 0..=len`.
    fn masked_iterates(&self, s: &IndexSet, len: usize, p: &ParamAssignment) -> Vec<Vec<bool>> {
        let mut out = vec![vec![false; self.sys.len()]];
        for _ in 0..len {
            let next = masked_step_bits(self.sys, s, out.last().expect("nonempty"), p.bits());
            out.push(next);
        }
        out
    }

    fn f(&self, i: VarId, x: &[bool], p: &ParamAssignment) -> bool {
        self.sys.formula(i).eval_with(&|v| x[v.0], p.bits())
    }

    pub fn check(&self, suite: Suite, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        match suite {
            Suite::Equivalence => self.equivalence(p),
            Suite::PrunedBelowExpanded => self.pruned_below_expanded(p),
            Suite::PrunedBelowIterate => self.pruned_below_iterate(p),
            Suite::ZeroPersists => self.zero_persists(p),
            Suite::MaskExtension => self.mask_extension(p),
            Suite::IterateBelowPruned => self.iterate_below_pruned(p),
            Suite::Bekic => self.bekic(p),
            Suite::MemoKey => self.memo_key(p),
            Suite::HashConsing => self.hash_consing(p),
        }
    }

    fn equivalence(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        match self.theorem.check(p).expect("assignment sized by caller") {
            TheoremReport::Holds { .. } => Ok(()),
            TheoremReport::Violated(cx) => Err(self.violation(
                Suite::Equivalence,
                p,
                format!(
                    "coordinate {}: kleene {} pruned {} expanded {}",
                    self.sys.var_name(cx.coordinate),
                    cx.kleene,
                    cx.pruned,
                    cx.expanded
                ),
            )),
        }
    }

    fn pruned_below_expanded(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let pr = crate::closed_form::eval_dag(&self.theorem.pruned, self.sys, p).expect("built from sys");
        let ex = crate::closed_form::eval_dag(&self.theorem.expanded, self.sys, p).expect("built from sys");
        if crate::semantics::tuple_le(&pr, &ex).expect("same arity") {
            Ok(())
        } else {
            Err(self.violation(
                Suite::PrunedBelowExpanded,
                p,
                format!("pruned {pr} is not below expanded {ex}"),
            ))
        }
    }

    fn pruned_below_iterate(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let n = self.sys.len();
        let g = eval_nodes(&self.family, self.sys, p).expect("built from sys");
        let mut kleene = vec![vec![false; n]];
        for _ in 0..n {
            let next = step_bits(self.sys, kleene.last().expect("nonempty"), p.bits());
            kleene.push(next);
        }
        for s in self.subsets.iter().filter(|s| s.len() < n) {
            let x = &kleene[n - s.len() - 1];
            for i in self.sys.vars() {
                let lhs = g[self.family_ids[&(s.clone(), i)].index()];
                if lhs && !self.f(i, x, p) {
                    return Err(self.violation(
                        Suite::PrunedBelowIterate,
                        p,
                        format!(
                            "S = {}, i = {}: g(0) = 1 but f_i(F^{}(0)) = 0",
                            fmt_set(self.sys, s),
                            self.sys.var_name(i),
                            n - s.len() - 1
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    fn zero_persists(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let n = self.sys.len();
        for s in &self.subsets {
            let iterates = self.masked_iterates(s, n + 1, p);
            for i in self.sys.vars() {
                let vals: Vec<bool> = iterates.iter().map(|x| self.f(i, x, p)).collect();
                for m in 0..vals.len() {
                    if !vals[m] {
                        if let Some(q) = (0..m).find(|&q| vals[q]) {
                            return Err(self.violation(
                                Suite::ZeroPersists,
                                p,
                                format!(
                                    "H = h_{}, i = {}: f_i(H^{m}(0)) = 0 but f_i(H^{q}(0)) = 1",
                                    fmt_set(self.sys, s),
                                    self.sys.var_name(i)
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn mask_extension(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let n = self.sys.len();
        for s in &self.subsets {
            let iterates = self.masked_iterates(s, n + 1, p);
            for i in self.sys.vars().filter(|i| !s.contains(*i)) {
                let t = s.with(i);
                let widened = self.masked_iterates(&t, n + 1, p);
                for m in 0..iterates.len() {
                    if self.f(i, &iterates[m], p) {
                        continue;
                    }
                    if let Some(q) = (0..=m).find(|&q| iterates[q] != widened[q]) {
                        return Err(self.violation(
                            Suite::MaskExtension,
                            p,
                            format!(
                                "S = {}, i = {}, m = {m}: h_S^{q}(0) = {} but h_T^{q}(0) = {}",
                                fmt_set(self.sys, s),
                                self.sys.var_name(i),
                                fmt_bits(&iterates[q]),
                                fmt_bits(&widened[q])
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn iterate_below_pruned(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let n = self.sys.len();
        let g = eval_nodes(&self.family, self.sys, p).expect("built from sys");
        for s in &self.subsets {
            let iterates = self.masked_iterates(s, n - s.len(), p);
            for i in self.sys.vars() {
                let rhs = g[self.family_ids[&(s.clone(), i)].index()];
                for (m, x) in iterates.iter().enumerate() {
                    let lhs = !s.contains(i) && self.f(i, x, p);
                    if lhs && !rhs {
                        return Err(self.violation(
                            Suite::IterateBelowPruned,
                            p,
                            format!(
                                "S = {}, i = {}, m = {m}: h_(S,i)(h_S^m(0)) = 1 but g_(S,i)(0) = 0",
                                fmt_set(self.sys, s),
                                self.sys.var_name(i)
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn bekic(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let lfp = kleene_lfp(self.sys, p).expect("assignment sized by caller").value;
        for (i, replaced) in self.bekic.iter().enumerate() {
            let other = kleene_lfp(replaced, p).expect("same parameters").value;
            if other != lfp {
                return Err(self.violation(
                    Suite::Bekic,
                    p,
                    format!(
                        "replacing {0} by 0 inside f_{0} changes the least fixpoint from {lfp} to {other}",
                        self.sys.var_names()[i]
                    ),
                ));
            }
        }
        Ok(())
    }

    fn memo_key(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        let canonical = &self.theorem.pruned;
        let a = crate::closed_form::eval_dag(canonical, self.sys, p).expect("built from sys");
        let b = crate::closed_form::eval_dag(&self.reference, self.sys, p).expect("built from sys");
        let mut memo = HashMap::new();
        let same_shape = canonical
            .roots()
            .iter()
            .zip(self.reference.roots())
            .all(|(x, y)| same_term(canonical, *x, &self.reference, *y, &mut memo));
        if a == b && same_shape {
            Ok(())
        } else {
            Err(self.violation(
                Suite::MemoKey,
                p,
                format!("canonical key gives {a}, full key gives {b}, same shape: {same_shape}"),
            ))
        }
    }

    fn hash_consing(&self, p: &ParamAssignment) -> Result<(), Box<Violation>> {
        for (label, dag) in [("pruned", &self.theorem.pruned), ("expanded", &self.theorem.expanded)] {
            let distinct: std::collections::HashSet<&TermNode> = dag.ids().map(|id| dag.node(id)).collect();
            if distinct.len() != dag.len() {
                return Err(self.violation(Suite::HashConsing, p, format!("{label} dag holds duplicate nodes")));
            }
            if dag_stats(dag).tree_size > BigUint::from(TREE_ORACLE_LIMIT) {
                continue;
            }
            let values = eval_nodes(dag, self.sys, p).expect("built from sys");
            for r in dag.roots() {
                if tree_eval(dag, *r, self.sys, p) != values[r.index()] {
                    return Err(self.violation(
                        Suite::HashConsing,
                        p,
                        format!("{label} dag node {} disagrees with its unshared tree", r.index()),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn same_term(a: &TermDag, x: TermId, b: &TermDag, y: TermId, memo: &mut HashMap<(TermId, TermId), bool>) -> bool {
    if let Some(&r) = memo.get(&(x, y)) {
        return r;
    }
    let r = match (a.node(x), b.node(y)) {
        (TermNode::Bottom, TermNode::Bottom) | (TermNode::Top, TermNode::Top) => true,
        (TermNode::Apply { func: f, args: xs }, TermNode::Apply { func: g, args: ys }) => {
            f == g
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|((u, s), (v, t))| u == v && same_term(a, *s, b, *t, memo))
        }
        _ => false,
    };
    memo.insert((x, y), r);
    r
}

/// Evaluation by plain recursion over the unshared tree.
fn tree_eval(dag: &TermDag, id: TermId, sys: &System, p: &ParamAssignment) -> bool {
    match dag.node(id) {
        TermNode::Bottom => false,
        TermNode::Top => true,
        TermNode::Apply { func, args } => {
            let vals: Vec<(VarId, bool)> = args.iter().map(|(v, t)| (*v, tree_eval(dag, *t, sys, p))).collect();
            sys.formula(*func)
                .eval_with(&|v| vals.iter().any(|(k, b)| *k == v && *b), p.bits())
        }
    }
}

/// Parameter assignments checked for `sys`: all of them for up to 10
/// parameters, otherwise a seeded sample.
pub fn param_assignments(sys: &System, seed: u64) -> Vec<ParamAssignment> {
    let count = sys.param_count();
    if count <= EXHAUSTIVE_PARAMS_MAX {
        return ParamAssignment::enumerate(count).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLED_PARAMS)
        .map(|_| ParamAssignment((0..count).map(|_| rng.gen()).collect()))
        .collect()
}

/// Result of one suite on one system.
pub type SuiteOutcome = (Suite, Result<(), Box<Violation>>);

/// Runs `suites` on `sys` for every assignment from [`param_assignments`].
/// Returns the first failure per suite.
pub fn check_system(sys: &System, suites: &[Suite], seed: u64) -> Vec<SuiteOutcome> {
    let checks = SystemChecks::with_seed(sys, seed);
    let assignments = param_assignments(sys, seed);
    suites
        .iter()
        .map(|&suite| {
            let outcome = assignments.iter().try_for_each(|p| checks.check(suite, p));
            (suite, outcome)
        })
        .collect()
}

/// Pass/fail counts of one suite over a batch of systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteTally {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    /// Failure from the lowest-numbered failing system.
    pub first_failure: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub tallies: Vec<SuiteTally>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Violation> {
        self.tallies.iter().filter_map(|t| t.first_failure.as_ref())
    }

    fn from_outcomes(suites: &[Suite], outcomes: Vec<Vec<SuiteOutcome>>) -> Self {
        let mut tallies: Vec<SuiteTally> = suites
            .iter()
            .map(|&suite| SuiteTally {
                suite,
                passed: 0,
                failed: 0,
                first_failure: None,
            })
            .collect();
        for per_system in outcomes {
            for (k, (_, outcome)) in per_system.into_iter().enumerate() {
                let tally = &mut tallies[k];
                match outcome {
                    Ok(()) => tally.passed += 1,
                    Err(v) => {
                        tally.failed += 1;
                        tally.first_failure.get_or_insert(*v);
                    }
                }
            }
        }
        VerifyReport { tallies }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tallies {
            let total = t.passed + t.failed;
            let status = if t.failed == 0 { "pass" } else { "FAIL" };
            writeln!(f, "{:<19} {}/{} {status}", t.suite.name(), t.passed, total)?;
        }
        Ok(())
    }
}

/// Checks `suites` on each system, in parallel. Counts are per system.
pub fn verify_systems(systems: &[System], suites: &[Suite], seed: u64) -> VerifyReport {
    let outcomes = systems.par_iter().map(|sys| check_system(sys, suites, seed)).collect();
    VerifyReport::from_outcomes(suites, outcomes)
}

/// `trials` seeded random systems within `bounds`, each checked against
/// `suites`.
pub fn verify_random(seed: u64, trials: u64, bounds: RandomBounds, suites: &[Suite]) -> VerifyReport {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let sys = gen_random_instance(seed, trial, bounds);
            check_system(&sys, suites, seed ^ trial)
        })
        .collect();
    VerifyReport::from_outcomes(suites, outcomes)
}
