//! Reading terms back from s-expressions, and checking them against the
//! recursive definition of the pruned form.

use besfix::{IndexSet, System, TermDag, TermId, TermNode, VarId};

fn tokens(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn parse_at(sys: &System, dag: &mut TermDag, toks: &[String], pos: &mut usize) -> Result<TermId, String> {
    let tok = toks.get(*pos).ok_or("unexpected end of term")?.clone();
    *pos += 1;
    match tok.as_str() {
        "bot" => Ok(dag.bottom()),
        "top" => Ok(dag.top()),
        "(" => {
            let name = toks.get(*pos).ok_or("missing function name")?;
            *pos += 1;
            let func = sys.var_id(name).ok_or_else(|| format!("unknown function `{name}`"))?;
            let mut children = Vec::new();
            while toks.get(*pos).map(String::as_str) != Some(")") {
                children.push(parse_at(sys, dag, toks, pos)?);
            }
            *pos += 1;
            let support: Vec<VarId> = sys.support(func).iter().collect();
            if support.len() != children.len() {
                return Err(format!(
                    "`{name}` takes {} arguments, got {}",
                    support.len(),
                    children.len()
                ));
            }
            Ok(dag.apply(func, support.into_iter().zip(children).collect()))
        }
        other => Err(format!("unexpected token `{other}`")),
    }
}

/// A dag holding the single term `text`, with that term as every root.
pub fn parse_term(sys: &System, text: &str) -> Result<(TermDag, TermId), String> {
    let toks = tokens(text);
    let mut dag = TermDag::new();
    let mut pos = 0;
    let id = parse_at(sys, &mut dag, &toks, &mut pos)?;
    if pos != toks.len() {
        return Err("trailing input".into());
    }
    dag.set_roots(vec![id; sys.len()]);
    Ok((dag, id))
}

/// First place where the term under `id` departs from the pruned shape:
/// an argument for `x_j` inside applications of `enclosing` must be `⊥`
/// exactly when `j` is enclosing, and an application of `f_j` otherwise.
pub fn pruned_shape_violation(sys: &System, dag: &TermDag, id: TermId, enclosing: &IndexSet) -> Option<String> {
    let TermNode::Apply { func, args } = dag.node(id) else {
        return Some("expected an application".into());
    };
    let inner = enclosing.with(*func);
    for (v, t) in args {
        let name = sys.var_name(*v);
        match dag.node(*t) {
            TermNode::Bottom if inner.contains(*v) => {}
            TermNode::Bottom => {
                return Some(format!(
                    "argument {name} of {} is bot outside any {name}",
                    sys.var_name(*func)
                ))
            }
            TermNode::Apply { func: g, .. } if *g == *v && !inner.contains(*v) => {
                if let Some(msg) = pruned_shape_violation(sys, dag, *t, &inner) {
                    return Some(msg);
                }
            }
            _ => return Some(format!("argument {name} of {} has the wrong head", sys.var_name(*func))),
        }
    }
    None
}
