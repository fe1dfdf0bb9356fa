//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::system::{MonotoneFormula as F, ParamAssignment, System};

pub(crate) fn arb_formula(n: usize, params: usize) -> impl Strategy<Value = F> {
    let mut leaves = vec![
        Just(F::Const(false)).boxed(),
        Just(F::Const(true)).boxed(),
        (0..n).prop_map(F::var).boxed(),
        (0..n).prop_map(F::var).boxed(),
    ];
    if params > 0 {
        leaves.push(
            (0..params, any::<bool>())
                .prop_map(|(p, neg)| if neg { F::not_param(p) } else { F::param(p) })
                .boxed(),
        );
    }
    proptest::strategy::Union::new(leaves).prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| F::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| F::or(a, b)),
        ]
    })
}

/// A system with up to `max_n` equations and `max_p` parameters, plus an
/// assignment for its parameters.
pub(crate) fn arb_system(max_n: usize, max_p: usize) -> impl Strategy<Value = (System, ParamAssignment)> {
    (1..=max_n, 0..=max_p).prop_flat_map(|(n, pc)| {
        (
            proptest::collection::vec(arb_formula(n, pc), n),
            proptest::collection::vec(any::<bool>(), pc),
        )
            .prop_map(move |(fs, bits)| (System::with_default_names(pc, fs).unwrap(), ParamAssignment(bits)))
    })
}

/// Like [`arb_system`] but with parameters renumbered by first use.
pub(crate) fn arb_system_canonical(max_n: usize, max_p: usize) -> impl Strategy<Value = System> {
    arb_system(max_n, max_p).prop_map(|(s, _)| s.canonicalize_params())
}
