use std::fmt::Write as _;

use crate::closed_form::TermId;
use crate::error::DimacsError;
use crate::system::ParamId;

use super::cnf::{CnfFormula, CnfLabel};

/// DIMACS CNF text. `node_map` entries become `c map <var> ...` comments
/// ahead of the `p cnf` header.
pub fn write_dimacs(cnf: &CnfFormula) -> String {
    let mut out = String::new();
    for (v, label) in &cnf.node_map {
        let _ = match label {
            CnfLabel::Param(p) => writeln!(out, "c map {v} param {}", p.0),
            CnfLabel::Node(t) => writeln!(out, "c map {v} node {}", t.index()),
            CnfLabel::True => writeln!(out, "c map {v} true"),
        };
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len());
    for clause in &cnf.clauses {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> DimacsError {
    DimacsError {
        line,
        message: message.into(),
    }
}

fn parse_map(line: usize, words: &[&str]) -> Result<(u32, CnfLabel), DimacsError> {
    let num = |s: &str| s.parse::<u32>().map_err(|_| err(line, format!("bad number `{s}`")));
    match words {
        [v, "param", p] => Ok((num(v)?, CnfLabel::Param(ParamId(num(p)? as usize)))),
        [v, "node", t] => Ok((num(v)?, CnfLabel::Node(TermId(num(t)?)))),
        [v, "true"] => Ok((num(v)?, CnfLabel::True)),
        _ => Err(err(line, "malformed `c map` comment")),
    }
}

/// Reads DIMACS CNF. `c map` comments are restored into `node_map`; other
/// comments are skipped.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut cnf = CnfFormula::default();
    let mut header: Option<(u32, usize)> = None;
    let mut current: Vec<i32> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        if words[0] == "c" {
            if words.get(1) == Some(&"map") {
                cnf.node_map.push(parse_map(line, &words[2..])?);
            }
            continue;
        }
        if words[0] == "p" {
            if header.is_some() {
                return Err(err(line, "duplicate `p` header"));
            }
            let [_, "cnf", vars, clauses] = words[..] else {
                return Err(err(line, "expected `p cnf <vars> <clauses>`"));
            };
            let vars = vars.parse().map_err(|_| err(line, "bad variable count"))?;
            let clauses = clauses.parse().map_err(|_| err(line, "bad clause count"))?;
            header = Some((vars, clauses));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(line, "clause before `p cnf` header"));
        };
        for w in words {
            let lit: i32 = w.parse().map_err(|_| err(line, format!("bad literal `{w}`")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(err(line, "empty clause"));
                }
                cnf.clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() > vars {
                    return Err(err(line, format!("literal {lit} exceeds {vars} variables")));
                }
                current.push(lit);
            }
        }
    }
    let Some((vars, clauses)) = header else {
        return Err(err(0, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(err(0, "last clause is not terminated by 0"));
    }
    if cnf.clauses.len() != clauses {
        return Err(err(
            0,
            format!("header announces {clauses} clauses, found {}", cnf.clauses.len()),
        ));
    }
    cnf.num_vars = vars;
    Ok(cnf)
}
