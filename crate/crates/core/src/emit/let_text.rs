use std::fmt::Write as _;

use crate::closed_form::{TermDag, TermId, TermNode};
use crate::system::System;

/// Which Apply nodes get a `let` binder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LetStyle {
    /// Nodes referenced more than once (root tuple included); the rest are
    /// written inline.
    #[default]
    Shared,
    /// Every reachable Apply node, giving one binding per application.
    All,
}

/// `let` text with [`LetStyle::Shared`] binders.
pub fn to_let_text(dag: &TermDag, sys: &System) -> String {
    to_let_text_with(dag, sys, LetStyle::Shared)
}

/// Bindings `t0, t1, ..` in topological order, one per line, followed by
/// the root tuple. `⊥` prints as `bot` and `⊤` as `top`.
pub fn to_let_text_with(dag: &TermDag, sys: &System, style: LetStyle) -> String {
    let live = dag.reachable_mask();
    let uses = dag.use_counts();
    let mut binder: Vec<Option<usize>> = vec![None; dag.len()];
    let mut next = 0;
    for id in dag.ids() {
        let k = id.index();
        let bind = live[k] && matches!(dag.node(id), TermNode::Apply { .. }) && (style == LetStyle::All || uses[k] > 1);
        if bind {
            binder[k] = Some(next);
            next += 1;
        }
    }

    let mut out = String::new();
    for id in dag.ids() {
        if let Some(b) = binder[id.index()] {
            let _ = writeln!(out, "let t{b} = {} in", render_application(dag, sys, &binder, id));
        }
    }
    out.push('(');
    for (k, r) in dag.roots().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push_str(&render(dag, sys, &binder, *r));
    }
    out.push_str(")\n");
    out
}

fn render(dag: &TermDag, sys: &System, binder: &[Option<usize>], id: TermId) -> String {
    match (dag.node(id), binder[id.index()]) {
        (TermNode::Bottom, _) => "bot".into(),
        (TermNode::Top, _) => "top".into(),
        (_, Some(b)) => format!("t{b}"),
        (TermNode::Apply { .. }, None) => render_application(dag, sys, binder, id),
    }
}

/// `f(a,b)` when every argument is atomic, `f(a, g(..))` otherwise.
fn render_application(dag: &TermDag, sys: &System, binder: &[Option<usize>], id: TermId) -> String {
    let TermNode::Apply { func, args } = dag.node(id) else {
        unreachable!("only applications are rendered this way");
    };
    let atomic = args
        .iter()
        .all(|(_, t)| binder[t.index()].is_some() || !matches!(dag.node(*t), TermNode::Apply { .. }));
    let sep = if atomic { "," } else { ", " };
    let parts: Vec<String> = args.iter().map(|(_, t)| render(dag, sys, binder, *t)).collect();
    format!("{}({})", sys.var_name(*func), parts.join(sep))
}
