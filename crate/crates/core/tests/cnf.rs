mod common;

use besfix::emit::{parse_dimacs, to_cnf, write_dimacs, CnfLabel};
use besfix::gen::{gen_random_instance, RandomBounds};
use besfix::{build_expanded, build_pruned, kleene_lfp, parse_bes, ParamAssignment, VarId};

use common::dpll::satisfiable;

#[test]
fn dpll_small_instances() {
    assert!(satisfiable(0, &[]));
    assert!(!satisfiable(1, &[vec![1], vec![-1]]));
    assert!(satisfiable(2, &[vec![1, 2], vec![-1], vec![2]]));
    // three pigeons, two holes
    let p = |i: i32, h: i32| i * 2 + h + 1;
    let mut cs: Vec<Vec<i32>> = (0..3).map(|i| vec![p(i, 0), p(i, 1)]).collect();
    for h in 0..2 {
        for i in 0..3 {
            for j in i + 1..3 {
                cs.push(vec![-p(i, h), -p(j, h)]);
            }
        }
    }
    assert!(!satisfiable(6, &cs));
}

#[test]
fn constant_system() {
    let sys = parse_bes("x = 1;").unwrap();
    let dag = build_pruned(&sys);
    let yes = to_cnf(&dag, &sys, (VarId(0), true)).unwrap();
    let no = to_cnf(&dag, &sys, (VarId(0), false)).unwrap();
    assert!(satisfiable(yes.num_vars, &yes.clauses));
    assert!(!satisfiable(no.num_vars, &no.clauses));
}

#[test]
fn parameters_are_existential() {
    // a holds iff p does, b iff p fails
    let sys = parse_bes("a = ?p & (a | 1); b = !?p;").unwrap();
    let dag = build_pruned(&sys);
    for (v, bit) in [(0, true), (0, false), (1, true), (1, false)] {
        let cnf = to_cnf(&dag, &sys, (VarId(v), bit)).unwrap();
        assert!(satisfiable(cnf.num_vars, &cnf.clauses));
    }
    let sys = parse_bes("a = ?p & !?p | a;").unwrap();
    let dag = build_pruned(&sys);
    let cnf = to_cnf(&dag, &sys, (VarId(0), true)).unwrap();
    assert!(!satisfiable(cnf.num_vars, &cnf.clauses));
}

#[test]
fn expanded_form_encodes_the_same_question() {
    let bounds = RandomBounds {
        max_n: 5,
        max_params: 4,
        max_depth: 3,
    };
    for t in 0..200 {
        let sys = gen_random_instance(77, t, bounds);
        let dag = build_expanded(&sys, sys.len());
        let lfps: Vec<_> = ParamAssignment::enumerate(sys.param_count())
            .map(|p| kleene_lfp(&sys, &p).unwrap().value)
            .collect();
        for i in sys.vars() {
            let cnf = to_cnf(&dag, &sys, (i, true)).unwrap();
            assert_eq!(
                satisfiable(cnf.num_vars, &cnf.clauses),
                lfps.iter().any(|v| v.get(i)),
                "trial {t}"
            );
        }
    }
}

#[test]
fn map_comments_survive_a_round_trip() {
    let sys = parse_bes("a = b & ?p | 0; b = a | !?q;").unwrap();
    let dag = build_pruned(&sys);
    let cnf = to_cnf(&dag, &sys, (VarId(1), false)).unwrap();
    assert!(cnf.node_map.iter().any(|(_, l)| *l == CnfLabel::True));
    let text = write_dimacs(&cnf);
    assert!(text.starts_with("c map 1 param 0\nc map 2 param 1\n"));
    assert_eq!(parse_dimacs(&text).unwrap(), cnf);
}
