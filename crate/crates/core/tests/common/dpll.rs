//! Small DPLL solver, only used as an oracle for the CNF encoder.

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Unset,
    True,
    False,
}

fn lit_val(assign: &[Val], lit: i32) -> Val {
    match (assign[lit.unsigned_abs() as usize], lit > 0) {
        (Val::Unset, _) => Val::Unset,
        (Val::True, true) | (Val::False, false) => Val::True,
        _ => Val::False,
    }
}

fn set(assign: &mut [Val], trail: &mut Vec<usize>, lit: i32) {
    let v = lit.unsigned_abs() as usize;
    assign[v] = if lit > 0 { Val::True } else { Val::False };
    trail.push(v);
}

/// Unit propagation to a fixpoint. `false` on conflict.
fn propagate(clauses: &[Vec<i32>], assign: &mut [Val], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unset = None;
            let mut unset_count = 0;
            let mut satisfied = false;
            for &l in c {
                match lit_val(assign, l) {
                    Val::True => {
                        satisfied = true;
                        break;
                    }
                    Val::Unset => {
                        unset_count += 1;
                        unset = Some(l);
                    }
                    Val::False => {}
                }
            }
            if satisfied {
                continue;
            }
            match (unset_count, unset) {
                (0, _) => return false,
                (1, Some(l)) => {
                    set(assign, trail, l);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(clauses: &[Vec<i32>], assign: &mut Vec<Val>) -> bool {
    let mut trail = Vec::new();
    if !propagate(clauses, assign, &mut trail) {
        undo(assign, &trail);
        return false;
    }
    let Some(v) = (1..assign.len()).find(|&v| assign[v] == Val::Unset) else {
        return true;
    };
    for lit in [v as i32, -(v as i32)] {
        let mut branch = Vec::new();
        set(assign, &mut branch, lit);
        if search(clauses, assign) {
            return true;
        }
        undo(assign, &branch);
    }
    undo(assign, &trail);
    false
}

fn undo(assign: &mut [Val], trail: &[usize]) {
    for &v in trail {
        assign[v] = Val::Unset;
    }
}

pub fn satisfiable(num_vars: u32, clauses: &[Vec<i32>]) -> bool {
    let mut assign = vec![Val::Unset; num_vars as usize + 1];
    search(clauses, &mut assign)
}
