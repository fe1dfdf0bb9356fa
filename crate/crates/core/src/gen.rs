//! Benchmark families and seeded random systems.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::system::{MonotoneFormula as F, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Pairs `(f_i, f_{i+1})` for odd `i`, each depending on both members of
    /// its pair only.
    Chain,
    /// Every equation depends on every variable.
    Complete,
    /// Three equations with supports `{x,y}`, `{x}`, `{y,z}`.
    Sparse3,
    /// Seeded random supports of expected size `density·n`.
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Complete => "complete",
            Family::Sparse3 => "sparse3",
            Family::Random => "random",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(Family::Chain),
            "complete" => Ok(Family::Complete),
            "sparse3" => Ok(Family::Sparse3),
            "random" => Ok(Family::Random),
            other => Err(format!(
                "unknown family `{other}`; expected chain, complete, sparse3 or random"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub density: f64,
}

impl FamilySpec {
    pub fn chain(n: usize) -> Self {
        FamilySpec {
            family: Family::Chain,
            n,
            seed: 0,
            density: 1.0,
        }
    }

    pub fn complete(n: usize) -> Self {
        FamilySpec {
            family: Family::Complete,
            ..Self::chain(n)
        }
    }

    pub fn sparse3() -> Self {
        FamilySpec {
            family: Family::Sparse3,
            ..Self::chain(3)
        }
    }

    pub fn random(n: usize, seed: u64, density: f64) -> Self {
        FamilySpec {
            family: Family::Random,
            n,
            seed,
            density,
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Instantiates a family. Chain equations use `u ∨ v` over their two
/// variables; complete equations are the disjunction of all variables.
pub fn gen_family(spec: &FamilySpec) -> Result<System, GenError> {
    let n = spec.n;
    let sys = match spec.family {
        Family::Chain => {
            if n < 2 || !n.is_multiple_of(2) {
                return Err(GenError::ChainArity(n));
            }
            // even 0-based k is the first member of a pair
            let formulas = (0..n)
                .map(|k| {
                    if k % 2 == 0 {
                        F::or(F::var(k), F::var(k + 1))
                    } else {
                        F::or(F::var(k - 1), F::var(k))
                    }
                })
                .collect();
            System::new(names("f", n), vec![], formulas)
        }
        Family::Complete => {
            if n == 0 {
                return Err(GenError::ZeroArity);
            }
            let formulas = (0..n).map(|_| F::or_all((0..n).map(F::var))).collect();
            System::new(names("f", n), vec![], formulas)
        }
        Family::Sparse3 => {
            if n != 3 {
                return Err(GenError::Sparse3Arity(n));
            }
            let formulas = vec![F::or(F::var(0), F::var(1)), F::var(0), F::or(F::var(1), F::var(2))];
            System::new(vec!["f".into(), "g".into(), "h".into()], vec![], formulas)
        }
        Family::Random => {
            if n == 0 {
                return Err(GenError::ZeroArity);
            }
            if !(spec.density > 0.0 && spec.density <= 1.0) {
                return Err(GenError::Density(spec.density));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let formulas = (0..n)
                .map(|_| {
                    let mut vars: Vec<usize> = (0..n).filter(|_| rng.gen_bool(spec.density)).collect();
                    if vars.is_empty() {
                        vars.push(rng.gen_range(0..n));
                    }
                    vars.shuffle(&mut rng);
                    combine(&mut rng, vars.into_iter().map(F::var).collect())
                })
                .collect();
            System::new(names("x", n), vec![], formulas)
        }
    };
    Ok(sys.expect("generated systems are well formed"))
}

/// Joins all `items` into one random `∧`/`∨` tree, each item used once.
fn combine(rng: &mut impl Rng, mut items: Vec<F>) -> F {
    while items.len() > 1 {
        let a = items.swap_remove(rng.gen_range(0..items.len()));
        let b = items.swap_remove(rng.gen_range(0..items.len()));
        items.push(if rng.gen_bool(0.5) { F::and(a, b) } else { F::or(a, b) });
    }
    items.pop().expect("at least one item")
}

const SUPPORT_RETRIES: usize = 8;

fn random_formula(rng: &mut impl Rng, n: usize, params: usize, depth: usize) -> F {
    let leaf = depth <= 1 || rng.gen_bool(0.3);
    if leaf {
        let roll: f64 = rng.gen();
        return if roll < 0.15 {
            F::Const(rng.gen_bool(0.5))
        } else if params > 0 && roll < 0.4 {
            let p = rng.gen_range(0..params);
            if rng.gen_bool(0.5) {
                F::param(p)
            } else {
                F::not_param(p)
            }
        } else {
            F::var(rng.gen_range(0..n))
        };
    }
    let l = random_formula(rng, n, params, depth - 1);
    let r = random_formula(rng, n, params, depth - 1);
    if rng.gen_bool(0.5) {
        F::and(l, r)
    } else {
        F::or(l, r)
    }
}

/// A seeded random system: `n` formulas of depth at most `max_depth` over
/// up to `params` parameters.
///
/// A formula with no state variable is redrawn up to 8 times before it is
/// kept. Parameters are renumbered by first use and unused ones dropped, so
/// the result may declare fewer than `params`.
pub fn gen_random_monotone(n: usize, params: usize, max_depth: usize, seed: u64) -> Result<System, GenError> {
    if n == 0 {
        return Err(GenError::ZeroArity);
    }
    if max_depth == 0 {
        return Err(GenError::ZeroDepth);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formulas = (0..n)
        .map(|_| {
            let mut f = random_formula(&mut rng, n, params, max_depth);
            for _ in 0..SUPPORT_RETRIES {
                if !f.support().is_empty() {
                    break;
                }
                f = random_formula(&mut rng, n, params, max_depth);
            }
            f
        })
        .collect();
    let sys = System::with_default_names(params, formulas).expect("generated systems are well formed");
    Ok(sys.canonicalize_params())
}

/// Shape bounds for [`gen_random_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomBounds {
    pub max_n: usize,
    pub max_params: usize,
    pub max_depth: usize,
}

/// Trial `trial` of a seeded fuzzing campaign: arity, parameter count and
/// depth are drawn uniformly within `bounds`.
pub fn gen_random_instance(seed: u64, trial: u64, bounds: RandomBounds) -> System {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = rng.gen_range(1..=bounds.max_n.max(1));
    let params = rng.gen_range(0..=bounds.max_params);
    let depth = rng.gen_range(1..=bounds.max_depth.max(1));
    gen_random_monotone(n, params, depth, rng.gen()).expect("bounds are valid")
}

/// Every parameter-free formula over `n` variables of depth at most
/// `max_depth`, built from `0`, `1`, variables, `&` and `|`. Operands are
/// unordered: `x & y` is listed but `y & x` is not.
pub fn enumerate_formulas(n: usize, max_depth: usize) -> Vec<F> {
    let atoms: Vec<F> = [F::Const(false), F::Const(true)]
        .into_iter()
        .chain((0..n).map(F::var))
        .collect();
    if max_depth == 0 {
        return Vec::new();
    }
    let mut level = atoms.clone();
    for _ in 1..max_depth {
        let mut next = atoms.clone();
        for op in [F::and as fn(F, F) -> F, F::or] {
            for (k, a) in level.iter().enumerate() {
                for b in &level[k..] {
                    next.push(op(a.clone(), b.clone()));
                }
            }
        }
        level = next;
    }
    level
}

/// All systems of `n` equations drawn from [`enumerate_formulas`], in
/// lexicographic order of formula indices.
pub fn exhaustive_systems(n: usize, max_depth: usize) -> impl Iterator<Item = System> {
    let pool = enumerate_formulas(n, max_depth);
    let total = pool
        .len()
        .checked_pow(n as u32)
        .expect("exhaustive enumeration too large");
    (0..total).map(move |mut code| {
        let mut formulas = vec![F::Const(false); n];
        for slot in formulas.iter_mut().rev() {
            *slot = pool[code % pool.len()].clone();
            code /= pool.len();
        }
        System::with_default_names(0, formulas).expect("enumerated systems are well formed")
    })
}
