//! Concrete semantics: evaluation, the componentwise order, and Kleene
//! iteration. Everything else in the crate is checked against these.

use crate::error::ShapeError;
use crate::index_set::IndexSet;
use crate::system::{MonotoneFormula, ParamAssignment, System, Valuation, VarId};

/// A fixpoint together with the number of steps that reached it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixpoint {
    pub value: Valuation,
    /// Least `K` with `F^K(⊥) = F^{K+1}(⊥)`.
    pub depth: usize,
}

fn check_ids(f: &MonotoneFormula, n: usize, count: usize) -> Result<(), ShapeError> {
    let mut err = None;
    f.visit(&mut |node| match node {
        MonotoneFormula::Var(v) if v.0 >= n => {
            err.get_or_insert(ShapeError::VarOutOfRange { index: v.0, len: n });
        }
        MonotoneFormula::Param(p, _) if p.0 >= count => {
            err.get_or_insert(ShapeError::ParamOutOfRange { index: p.0, len: count });
        }
        _ => {}
    });
    err.map_or(Ok(()), Err)
}

fn check_valuation(sys: &System, x: &Valuation) -> Result<(), ShapeError> {
    if x.len() != sys.len() {
        return Err(ShapeError::Length {
            what: "state bits",
            expected: sys.len(),
            found: x.len(),
        });
    }
    Ok(())
}

/// Value of `f` under state `x` and parameters `p`.
pub fn eval_formula(f: &MonotoneFormula, x: &Valuation, p: &ParamAssignment) -> Result<bool, ShapeError> {
    check_ids(f, x.len(), p.len())?;
    Ok(f.eval_with(&|v| x.get(v), p.bits()))
}

pub(crate) fn step_bits(sys: &System, x: &[bool], p: &[bool]) -> Vec<bool> {
    sys.formulas().iter().map(|f| f.eval_with(&|v| x[v.0], p)).collect()
}

/// `h_S`: like [`step_bits`] but coordinates in `masked` are forced to 0.
pub(crate) fn masked_step_bits(sys: &System, masked: &IndexSet, x: &[bool], p: &[bool]) -> Vec<bool> {
    sys.formulas()
        .iter()
        .enumerate()
        .map(|(i, f)| !masked.contains(VarId(i)) && f.eval_with(&|v| x[v.0], p))
        .collect()
}

/// One application of the system: `(f_1(x), .., f_n(x))`.
pub fn step(sys: &System, x: &Valuation, p: &ParamAssignment) -> Result<Valuation, ShapeError> {
    check_valuation(sys, x)?;
    sys.check_params(p)?;
    Ok(Valuation(step_bits(sys, x.bits(), p.bits())))
}

/// Least fixpoint by ascending iteration from `0⃗`.
///
/// Panics if the iteration fails to stabilise within `n` steps, which
/// cannot happen for a monotone system.
pub fn kleene_lfp(sys: &System, p: &ParamAssignment) -> Result<Fixpoint, ShapeError> {
    sys.check_params(p)?;
    let mut x = vec![false; sys.len()];
    let mut depth = 0;
    loop {
        let next = step_bits(sys, &x, p.bits());
        if next == x {
            return Ok(Fixpoint {
                value: Valuation(x),
                depth,
            });
        }
        debug_assert!(x.iter().zip(&next).all(|(a, b)| a <= b), "iteration is not ascending");
        x = next;
        depth += 1;
        assert!(
            depth <= sys.len(),
            "Kleene iteration exceeded n steps; system is not monotone"
        );
    }
}

/// Greatest fixpoint, computed as the complement of the dual system's
/// least fixpoint. `depth` is the dual iteration's depth.
pub fn greatest_fixpoint(sys: &System, p: &ParamAssignment) -> Result<Fixpoint, ShapeError> {
    let dual = kleene_lfp(&dualize(sys), p)?;
    Ok(Fixpoint {
        value: dual.value.complement(),
        depth: dual.depth,
    })
}

/// `h_S^m(0⃗)`: `m` iterations of the system with every equation in
/// `masked` replaced by the constant 0.
pub fn masked_kleene(sys: &System, masked: &IndexSet, m: usize, p: &ParamAssignment) -> Result<Valuation, ShapeError> {
    sys.check_params(p)?;
    let mut x = vec![false; sys.len()];
    for _ in 0..m {
        let next = masked_step_bits(sys, masked, &x, p.bits());
        if next == x {
            break;
        }
        x = next;
    }
    Ok(Valuation(x))
}

/// State variables occurring in `f`.
pub fn support(f: &MonotoneFormula) -> IndexSet {
    f.support()
}

/// Componentwise order on equal-length tuples.
pub fn tuple_le(x: &Valuation, y: &Valuation) -> Result<bool, ShapeError> {
    if x.len() != y.len() {
        return Err(ShapeError::Length {
            what: "tuple components",
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(x.bits().iter().zip(y.bits()).all(|(a, b)| a <= b))
}

/// De Morgan dual of every equation. `lfp(dualize(s))` is the complement
/// of `gfp(s)` under the same parameter assignment.
pub fn dualize(sys: &System) -> System {
    let formulas = sys.formulas().iter().map(MonotoneFormula::dual).collect();
    System::new(sys.var_names().to_vec(), sys.param_names().to_vec(), formulas).expect("dualizing preserves validity")
}

/// A witness that some `f_i` is not monotone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub lower: Valuation,
    pub upper: Valuation,
    pub params: ParamAssignment,
    pub equation: VarId,
}

/// Exhaustive semantic monotonicity check over all `x ≤ y` and all
/// parameter assignments. Exponential; meant for `n, P ≤ 4` or so.
pub fn check_monotone_brute_force(sys: &System) -> Result<(), MonotonicityViolation> {
    let n = sys.len();
    assert!(
        n < 32 && sys.param_count() < 32,
        "brute-force check is for tiny systems"
    );
    for p in ParamAssignment::enumerate(sys.param_count()) {
        for lo in 0..1u64 << n {
            let x = Valuation::from_mask(n, lo);
            let fx = step_bits(sys, x.bits(), p.bits());
            // every superset of lo
            let free = !lo & ((1u64 << n) - 1);
            let mut extra = free;
            loop {
                let y = Valuation::from_mask(n, lo | extra);
                let fy = step_bits(sys, y.bits(), p.bits());
                if let Some(i) = (0..n).find(|&i| fx[i] && !fy[i]) {
                    return Err(MonotonicityViolation {
                        lower: x,
                        upper: y,
                        params: p,
                        equation: VarId(i),
                    });
                }
                if extra == 0 {
                    break;
                }
                extra = (extra - 1) & free;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::arb_system;
    use crate::text::parse_bes;
    use proptest::prelude::*;
    use MonotoneFormula as F;

    fn sys(text: &str) -> System {
        parse_bes(text).unwrap()
    }

    fn none() -> ParamAssignment {
        ParamAssignment::none()
    }

    fn v(bits: &[u8]) -> Valuation {
        Valuation(bits.iter().map(|&b| b == 1).collect())
    }

    /// Least fixpoint by scanning all 2^n valuations.
    fn brute_force_lfp(s: &System, p: &ParamAssignment) -> Valuation {
        let n = s.len();
        let fixpoints: Vec<Valuation> = (0..1u64 << n)
            .map(|m| Valuation::from_mask(n, m))
            .filter(|x| step(s, x, p).unwrap() == *x)
            .collect();
        let least: Vec<&Valuation> = fixpoints
            .iter()
            .filter(|x| fixpoints.iter().all(|y| tuple_le(x, y).unwrap()))
            .collect();
        assert_eq!(least.len(), 1);
        least[0].clone()
    }

    #[test]
    fn eval_examples() {
        let p = none();
        assert!(!eval_formula(&F::Const(false), &v(&[1, 1]), &p).unwrap());
        assert!(eval_formula(&F::var(0), &v(&[1, 0]), &p).unwrap());
        let f = F::and(F::var(0), F::or(F::var(1), F::Const(true)));
        assert!(eval_formula(&f, &v(&[1, 0]), &p).unwrap());
        assert!(!eval_formula(&f, &v(&[0, 1]), &p).unwrap());
    }

    #[test]
    fn eval_params_and_errors() {
        let p = ParamAssignment(vec![true]);
        assert!(eval_formula(&F::param(0), &v(&[0]), &p).unwrap());
        assert!(!eval_formula(&F::not_param(0), &v(&[0]), &p).unwrap());
        assert_eq!(
            eval_formula(&F::var(2), &v(&[0]), &p),
            Err(ShapeError::VarOutOfRange { index: 2, len: 1 })
        );
        assert_eq!(
            eval_formula(&F::param(1), &v(&[0]), &p),
            Err(ShapeError::ParamOutOfRange { index: 1, len: 1 })
        );
    }

    #[test]
    fn step_examples() {
        let s = sys("a = 1; b = a & c; c = b | a;");
        assert_eq!(step(&s, &v(&[0, 0, 0]), &none()).unwrap(), v(&[1, 0, 0]));
        assert_eq!(step(&sys("x = x;"), &v(&[0]), &none()).unwrap(), v(&[0]));
        assert_eq!(
            step(&sys("x = x | y; y = x & y;"), &v(&[1, 1]), &none()).unwrap(),
            v(&[1, 1])
        );
        assert!(step(&s, &v(&[0, 0]), &none()).is_err());
        assert!(step(&s, &v(&[0, 0, 0]), &ParamAssignment(vec![true])).is_err());
    }

    #[test]
    fn kleene_examples() {
        let fp = kleene_lfp(&sys("x = x;"), &none()).unwrap();
        assert_eq!((fp.value, fp.depth), (v(&[0]), 0));
        let fp = kleene_lfp(&sys("a = 1; b = a & c; c = b | a;"), &none()).unwrap();
        assert_eq!((fp.value, fp.depth), (v(&[1, 1, 1]), 3));
        let fp = kleene_lfp(&sys("x = y | 1; y = x & y;"), &none()).unwrap();
        assert_eq!((fp.value, fp.depth), (v(&[1, 0]), 1));
    }

    #[test]
    fn masked_examples() {
        let s = sys("a = 1; b = a & c; c = b | a;");
        assert_eq!(
            masked_kleene(&s, &IndexSet::full(3), 5, &none()).unwrap(),
            v(&[0, 0, 0])
        );
        assert_eq!(
            masked_kleene(&s, &IndexSet::new(), 3, &none()).unwrap(),
            kleene_lfp(&s, &none()).unwrap().value
        );
        let only_a: IndexSet = [VarId(0)].into_iter().collect();
        assert_eq!(masked_kleene(&s, &only_a, 3, &none()).unwrap(), v(&[0, 0, 0]));
        assert_eq!(masked_kleene(&s, &IndexSet::new(), 0, &none()).unwrap(), v(&[0, 0, 0]));
    }

    #[test]
    fn tuple_le_examples() {
        assert!(tuple_le(&v(&[0, 0]), &v(&[1, 0])).unwrap());
        assert!(!tuple_le(&v(&[1, 0]), &v(&[0, 1])).unwrap());
        for m in 0..8 {
            assert!(tuple_le(&Valuation::bottom(3), &Valuation::from_mask(3, m)).unwrap());
        }
        assert!(tuple_le(&v(&[0]), &v(&[0, 1])).is_err());
    }

    #[test]
    fn dualize_examples() {
        let id = sys("x = x;");
        assert_eq!(dualize(&id), id);
        assert_eq!(greatest_fixpoint(&id, &none()).unwrap().value, v(&[1]));

        let s = sys("x = x & 0;");
        assert_eq!(dualize(&s), sys("x = x | 1;"));
        assert_eq!(kleene_lfp(&dualize(&s), &none()).unwrap().value, v(&[1]));
        assert_eq!(greatest_fixpoint(&s, &none()).unwrap().value, v(&[0]));

        assert_eq!(dualize(&sys("x = x | y; y = x & y;")), sys("x = x & y; y = x | y;"));
        assert_eq!(dualize(&sys("x = ?p & x;")), sys("x = !?p | x;"));
    }

    #[test]
    fn greatest_is_greatest_fixpoint() {
        let s = sys("a = a & ?p; b = a | b; c = c & 0;");
        for p in ParamAssignment::enumerate(1) {
            let g = greatest_fixpoint(&s, &p).unwrap().value;
            assert_eq!(step(&s, &g, &p).unwrap(), g);
            for m in 0..8 {
                let x = Valuation::from_mask(3, m);
                if step(&s, &x, &p).unwrap() == x {
                    assert!(tuple_le(&x, &g).unwrap());
                }
            }
        }
    }

    #[test]
    fn negated_params_stay_monotone() {
        let s = sys("a = b | ?p; b = a & !?p;");
        assert_eq!(check_monotone_brute_force(&s), Ok(()));
    }

    proptest! {
        #[test]
        fn kleene_is_least_fixpoint((s, p) in arb_system(4, 2)) {
            let fp = kleene_lfp(&s, &p).unwrap();
            prop_assert!(fp.depth <= s.len());
            prop_assert_eq!(fp.value, brute_force_lfp(&s, &p));
        }

        #[test]
        fn iteration_ascends((s, p) in arb_system(6, 3)) {
            let mut x = Valuation::bottom(s.len());
            for _ in 0..s.len() {
                let y = step(&s, &x, &p).unwrap();
                prop_assert!(tuple_le(&x, &y).unwrap());
                x = y;
            }
        }

        #[test]
        fn step_is_monotone((s, p) in arb_system(6, 3), a in any::<u64>(), b in any::<u64>()) {
            let n = s.len();
            let lo = Valuation::from_mask(n, a & b);
            let hi = Valuation::from_mask(n, a | b);
            prop_assert!(tuple_le(&step(&s, &lo, &p).unwrap(), &step(&s, &hi, &p).unwrap()).unwrap());
        }

        #[test]
        fn dualize_is_involution((s, _p) in arb_system(5, 3)) {
            prop_assert_eq!(dualize(&dualize(&s)), s);
        }

        #[test]
        fn small_systems_are_semantically_monotone((s, _p) in arb_system(4, 2)) {
            prop_assert_eq!(check_monotone_brute_force(&s), Ok(()));
        }

        #[test]
        fn gfp_via_dual_matches_brute_force((s, p) in arb_system(4, 2)) {
            let g = greatest_fixpoint(&s, &p).unwrap().value;
            prop_assert_eq!(step(&s, &g, &p).unwrap(), g.clone());
            for m in 0..1u64 << s.len() {
                let x = Valuation::from_mask(s.len(), m);
                if step(&s, &x, &p).unwrap() == x {
                    prop_assert!(tuple_le(&x, &g).unwrap());
                }
            }
        }
    }
}
