use crate::closed_form::{check_dag, TermDag, TermId, TermNode};
use crate::error::EmitError;
use crate::system::{MonotoneFormula, ParamId, Polarity, System, VarId};

/// What a CNF variable stands for. Gate auxiliaries have no label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnfLabel {
    Param(ParamId),
    Node(TermId),
    /// Constant-true helper for formulas containing `0` or `1`.
    True,
}

/// Clauses over variables `1..=num_vars` with DIMACS signed literals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    pub node_map: Vec<(u32, CnfLabel)>,
}

impl CnfFormula {
    fn fresh(&mut self) -> i32 {
        self.num_vars += 1;
        i32::try_from(self.num_vars).expect("CNF variable count exceeds i32::MAX")
    }

    fn label(&mut self, label: CnfLabel) -> i32 {
        let v = self.fresh();
        self.node_map.push((v as u32, label));
        v
    }
}

struct Encoder<'a> {
    cnf: CnfFormula,
    sys: &'a System,
    node_lit: Vec<i32>,
    truth: Option<i32>,
}

impl Encoder<'_> {
    fn truth(&mut self) -> i32 {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.cnf.label(CnfLabel::True);
        self.cnf.clauses.push(vec![t]);
        self.truth = Some(t);
        t
    }

    /// Literal equivalent to `f` with state variable `v` bound to the CNF
    /// literal of the matching argument node.
    fn formula(&mut self, f: &MonotoneFormula, args: &[(VarId, TermId)]) -> i32 {
        match f {
            MonotoneFormula::Const(true) => self.truth(),
            MonotoneFormula::Const(false) => -self.truth(),
            MonotoneFormula::Var(v) => {
                let at = args
                    .binary_search_by_key(v, |(k, _)| *k)
                    .expect("state variable outside the application's support");
                self.node_lit[args[at].1.index()]
            }
            MonotoneFormula::Param(p, Polarity::Positive) => p.0 as i32 + 1,
            MonotoneFormula::Param(p, Polarity::Negated) => -(p.0 as i32 + 1),
            MonotoneFormula::And(l, r) => {
                let (l, r) = (self.formula(l, args), self.formula(r, args));
                let g = self.cnf.fresh();
                self.cnf.clauses.extend([vec![-g, l], vec![-g, r], vec![g, -l, -r]]);
                g
            }
            MonotoneFormula::Or(l, r) => {
                let (l, r) = (self.formula(l, args), self.formula(r, args));
                let g = self.cnf.fresh();
                self.cnf.clauses.extend([vec![g, -l], vec![g, -r], vec![-g, l, r]]);
                g
            }
        }
    }
}

/// Tseitin encoding of the dag with a unit clause asserting that the root
/// of `query.0` has value `query.1`.
///
/// Variables `1..=P` are the parameters. Each reachable node then gets one
/// variable, constrained equal to its function's formula over the argument
/// nodes. The result is satisfiable iff some parameter assignment gives the
/// queried root the requested value.
pub fn to_cnf(dag: &TermDag, sys: &System, query: (VarId, bool)) -> Result<CnfFormula, EmitError> {
    check_dag(dag, sys)?;
    if query.0 .0 >= sys.len() {
        return Err(EmitError::QueryOutOfRange {
            index: query.0 .0,
            n: sys.len(),
        });
    }
    let mut enc = Encoder {
        cnf: CnfFormula::default(),
        sys,
        node_lit: vec![0; dag.len()],
        truth: None,
    };
    for k in 0..sys.param_count() {
        enc.cnf.label(CnfLabel::Param(ParamId(k)));
    }
    for id in dag.reachable() {
        let v = enc.cnf.label(CnfLabel::Node(id));
        match dag.node(id) {
            TermNode::Bottom => enc.cnf.clauses.push(vec![-v]),
            TermNode::Top => enc.cnf.clauses.push(vec![v]),
            TermNode::Apply { func, args } => {
                let lit = enc.formula(enc.sys.formula(*func), args);
                enc.cnf.clauses.extend([vec![-v, lit], vec![v, -lit]]);
            }
        }
        enc.node_lit[id.index()] = v;
    }
    let root = enc.node_lit[dag.roots()[query.0 .0].index()];
    enc.cnf.clauses.push(vec![if query.1 { root } else { -root }]);
    Ok(enc.cnf)
}
