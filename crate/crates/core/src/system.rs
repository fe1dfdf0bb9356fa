//! Equation systems and their building blocks.
//!
//! A [`System`] is an ordered list of `n` negation-free formulas, one per
//! state variable. Free parameters may appear with either polarity; state
//! variables never appear under a negation, which makes every formula
//! monotone in the state by construction.

use std::collections::HashSet;
use std::fmt;

use crate::error::SystemError;
use crate::index_set::IndexSet;

/// Index of a state variable (and of the equation defining it).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// Index of a free parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negated,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negated,
            Polarity::Negated => Polarity::Positive,
        }
    }
}

/// Negation-free boolean formula over state variables, extended with
/// parameter literals of either polarity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonotoneFormula {
    Const(bool),
    Var(VarId),
    Param(ParamId, Polarity),
    And(Box<MonotoneFormula>, Box<MonotoneFormula>),
    Or(Box<MonotoneFormula>, Box<MonotoneFormula>),
}

impl MonotoneFormula {
    pub fn var(i: usize) -> Self {
        MonotoneFormula::Var(VarId(i))
    }

    pub fn param(i: usize) -> Self {
        MonotoneFormula::Param(ParamId(i), Polarity::Positive)
    }

    pub fn not_param(i: usize) -> Self {
        MonotoneFormula::Param(ParamId(i), Polarity::Negated)
    }

    pub fn and(lhs: MonotoneFormula, rhs: MonotoneFormula) -> Self {
        MonotoneFormula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: MonotoneFormula, rhs: MonotoneFormula) -> Self {
        MonotoneFormula::Or(Box::new(lhs), Box::new(rhs))
    }

    /// Folds `items` with `∧`. An empty list gives `1`.
    pub fn and_all(items: impl IntoIterator<Item = MonotoneFormula>) -> Self {
        items
            .into_iter()
            .reduce(MonotoneFormula::and)
            .unwrap_or(MonotoneFormula::Const(true))
    }

    /// Folds `items` with `∨`. An empty list gives `0`.
    pub fn or_all(items: impl IntoIterator<Item = MonotoneFormula>) -> Self {
        items
            .into_iter()
            .reduce(MonotoneFormula::or)
            .unwrap_or(MonotoneFormula::Const(false))
    }

    /// Evaluates with state bits supplied by `state` and parameter bits by
    /// `params`. Ids are assumed to be in range.
    pub fn eval_with(&self, state: &impl Fn(VarId) -> bool, params: &[bool]) -> bool {
        match self {
            MonotoneFormula::Const(b) => *b,
            MonotoneFormula::Var(v) => state(*v),
            MonotoneFormula::Param(p, Polarity::Positive) => params[p.0],
            MonotoneFormula::Param(p, Polarity::Negated) => !params[p.0],
            MonotoneFormula::And(l, r) => l.eval_with(state, params) && r.eval_with(state, params),
            MonotoneFormula::Or(l, r) => l.eval_with(state, params) || r.eval_with(state, params),
        }
    }

    /// State variables occurring syntactically in the formula.
    pub fn support(&self) -> IndexSet {
        let mut out = IndexSet::new();
        self.visit(&mut |f| {
            if let MonotoneFormula::Var(v) = f {
                out.insert(*v);
            }
        });
        out
    }

    /// Height of the syntax tree; leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            MonotoneFormula::And(l, r) | MonotoneFormula::Or(l, r) => 1 + l.depth().max(r.depth()),
            _ => 1,
        }
    }

    /// De Morgan dual: swaps `∧`/`∨` and `0`/`1` and flips parameter
    /// polarity. State variables are unchanged.
    pub fn dual(&self) -> MonotoneFormula {
        match self {
            MonotoneFormula::Const(b) => MonotoneFormula::Const(!b),
            MonotoneFormula::Var(v) => MonotoneFormula::Var(*v),
            MonotoneFormula::Param(p, pol) => MonotoneFormula::Param(*p, pol.flip()),
            MonotoneFormula::And(l, r) => MonotoneFormula::or(l.dual(), r.dual()),
            MonotoneFormula::Or(l, r) => MonotoneFormula::and(l.dual(), r.dual()),
        }
    }

    /// Replaces every occurrence of state variable `v` by `with`.
    pub fn substitute(&self, v: VarId, with: &MonotoneFormula) -> MonotoneFormula {
        match self {
            MonotoneFormula::Var(w) if *w == v => with.clone(),
            MonotoneFormula::And(l, r) => MonotoneFormula::and(l.substitute(v, with), r.substitute(v, with)),
            MonotoneFormula::Or(l, r) => MonotoneFormula::or(l.substitute(v, with), r.substitute(v, with)),
            other => other.clone(),
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a MonotoneFormula)) {
        f(self);
        if let MonotoneFormula::And(l, r) | MonotoneFormula::Or(l, r) = self {
            l.visit(f);
            r.visit(f);
        }
    }
}

/// An `n`-tuple of booleans.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(pub Vec<bool>);

impl Valuation {
    pub fn bottom(n: usize) -> Self {
        Valuation(vec![false; n])
    }

    pub fn top(n: usize) -> Self {
        Valuation(vec![true; n])
    }

    /// The `n` low bits of `mask`, bit `i` giving coordinate `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Valuation((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: VarId) -> bool {
        self.0[v.0]
    }

    pub fn complement(&self) -> Valuation {
        Valuation(self.0.iter().map(|b| !b).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", u8::from(*b))?;
        }
        write!(f, ")")
    }
}

/// Values of the free parameters, one bit per declared parameter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamAssignment(pub Vec<bool>);

impl ParamAssignment {
    pub fn none() -> Self {
        ParamAssignment(Vec::new())
    }

    pub fn from_mask(count: usize, mask: u64) -> Self {
        ParamAssignment((0..count).map(|i| mask >> i & 1 == 1).collect())
    }

    /// Every assignment of `count` parameters, in mask order.
    pub fn enumerate(count: usize) -> impl Iterator<Item = ParamAssignment> {
        assert!(count < 64, "parameter enumeration needs fewer than 64 parameters");
        (0..1u64 << count).map(move |m| ParamAssignment::from_mask(count, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

/// A system of `n ≥ 1` monotone boolean equations `x_i = f_i(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    formulas: Vec<MonotoneFormula>,
    var_names: Vec<String>,
    param_names: Vec<String>,
    supports: Vec<IndexSet>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl System {
    pub fn new(
        var_names: Vec<String>,
        param_names: Vec<String>,
        formulas: Vec<MonotoneFormula>,
    ) -> Result<System, SystemError> {
        if formulas.is_empty() {
            return Err(SystemError::Empty);
        }
        if formulas.len() != var_names.len() {
            return Err(SystemError::ArityMismatch {
                formulas: formulas.len(),
                names: var_names.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in var_names.iter().chain(&param_names) {
            if !is_identifier(name) {
                return Err(SystemError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(SystemError::DuplicateName(name.clone()));
            }
        }
        let n = formulas.len();
        let count = param_names.len();
        for (equation, f) in formulas.iter().enumerate() {
            let mut bad = None;
            f.visit(&mut |node| match node {
                MonotoneFormula::Var(v) if v.0 >= n => {
                    bad.get_or_insert(SystemError::VarOutOfRange {
                        equation,
                        index: v.0,
                        n,
                    });
                }
                MonotoneFormula::Param(p, _) if p.0 >= count => {
                    bad.get_or_insert(SystemError::ParamOutOfRange {
                        equation,
                        index: p.0,
                        count,
                    });
                }
                _ => {}
            });
            if let Some(err) = bad {
                return Err(err);
            }
        }
        let supports = formulas.iter().map(MonotoneFormula::support).collect();
        let sys = System {
            formulas,
            var_names,
            param_names,
            supports,
        };
        debug_assert!(
            sys.len() > 4 || sys.param_count() > 4 || crate::semantics::check_monotone_brute_force(&sys).is_ok(),
            "syntactically monotone system failed the semantic monotonicity check"
        );
        Ok(sys)
    }

    /// Builds a system with default names `x1..xn` and `p1..pP`.
    pub fn with_default_names(param_count: usize, formulas: Vec<MonotoneFormula>) -> Result<System, SystemError> {
        let vars = (1..=formulas.len()).map(|i| format!("x{i}")).collect();
        let params = (1..=param_count).map(|i| format!("p{i}")).collect();
        System::new(vars, params, formulas)
    }

    /// Arity `n`.
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    /// Always false; systems have at least one equation.
    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn param_count(&self) -> usize {
        self.param_names.len()
    }

    pub fn formula(&self, v: VarId) -> &MonotoneFormula {
        &self.formulas[v.0]
    }

    pub fn formulas(&self) -> &[MonotoneFormula] {
        &self.formulas
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.var_names[v.0]
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn param_name(&self, p: ParamId) -> &str {
        &self.param_names[p.0]
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.var_names.iter().position(|n| n == name).map(VarId)
    }

    pub fn param_id(&self, name: &str) -> Option<ParamId> {
        self.param_names.iter().position(|n| n == name).map(ParamId)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.len()).map(VarId)
    }

    /// Support of `f_i`, cached at construction.
    pub fn support(&self, v: VarId) -> &IndexSet {
        &self.supports[v.0]
    }

    /// Variables transitively reachable from `support(f_i)` through the
    /// dependency graph (`j → k` when `k ∈ support(f_j)`).
    pub fn cone_of_influence(&self, v: VarId) -> IndexSet {
        let mut seen = IndexSet::new();
        let mut stack: Vec<VarId> = self.support(v).iter().collect();
        while let Some(j) = stack.pop() {
            if seen.insert(j) {
                stack.extend(self.support(j).iter().filter(|k| !seen.contains(*k)));
            }
        }
        seen
    }

    /// Same names, `formulas[v]` replaced.
    pub fn with_formula(&self, v: VarId, formula: MonotoneFormula) -> Result<System, SystemError> {
        let mut formulas = self.formulas.clone();
        formulas[v.0] = formula;
        System::new(self.var_names.clone(), self.param_names.clone(), formulas)
    }

    /// Renumbers parameters by order of first occurrence (equation order,
    /// pre-order within a formula) and drops unused ones. The result prints
    /// and re-parses to a structurally identical system.
    pub fn canonicalize_params(&self) -> System {
        let mut order: Vec<ParamId> = Vec::new();
        for f in &self.formulas {
            f.visit(&mut |node| {
                if let MonotoneFormula::Param(p, _) = node {
                    if !order.contains(p) {
                        order.push(*p);
                    }
                }
            });
        }
        fn renumber(f: &MonotoneFormula, order: &[ParamId]) -> MonotoneFormula {
            match f {
                MonotoneFormula::Param(p, pol) => {
                    let k = order.iter().position(|q| q == p).expect("collected above");
                    MonotoneFormula::Param(ParamId(k), *pol)
                }
                MonotoneFormula::And(l, r) => MonotoneFormula::and(renumber(l, order), renumber(r, order)),
                MonotoneFormula::Or(l, r) => MonotoneFormula::or(renumber(l, order), renumber(r, order)),
                other => other.clone(),
            }
        }
        let formulas = self.formulas.iter().map(|f| renumber(f, &order)).collect();
        let params = order.iter().map(|p| self.param_names[p.0].clone()).collect();
        System::new(self.var_names.clone(), params, formulas).expect("renaming preserves validity")
    }

    /// Checks the lengths of a parameter assignment against this system.
    pub fn check_params(&self, p: &ParamAssignment) -> Result<(), crate::ShapeError> {
        if p.len() != self.param_count() {
            return Err(crate::ShapeError::Length {
                what: "parameter bits",
                expected: self.param_count(),
                found: p.len(),
            });
        }
        Ok(())
    }
}
