//! Expected pruned forms, one s-expression per root.

pub const GENERIC2: &str = "f = f & g; g = f | g;";
pub const GENERIC2_PRUNED: [&str; 2] = ["(f bot (g bot bot))", "(g (f bot bot) bot)"];

pub const GENERIC3: &str = "f = f | g | h; g = f & g | h; h = f | g & h;";
pub const GENERIC3_PRUNED: [&str; 3] = [
    "(f bot (g bot bot (h bot bot bot)) (h bot (g bot bot bot) bot))",
    "(g (f bot bot (h bot bot bot)) bot (h (f bot bot bot) bot bot))",
    "(h (f bot (g bot bot bot) bot) (g (f bot bot bot) bot bot) bot)",
];

pub const SPARSE3_PRUNED: [&str; 3] = ["(f bot (g bot))", "(g (f bot bot))", "(h (g (f bot bot)) bot)"];

pub const CHAIN2_PRUNED: [&str; 2] = ["(f1 bot (f2 bot bot))", "(f2 (f1 bot bot) bot)"];

/// Hand expansions of the generic n=3 and sparse3 systems that disagree
/// with the recursive definition in the roots for `g`, `h` and `f`
/// respectively.
pub const GENERIC3_HAND: [&str; 3] = [
    "(f bot (g bot bot (h bot bot bot)) (h bot (g bot bot bot) bot))",
    "(g (f bot bot (h bot bot bot)) bot (h bot bot bot))",
    "(h (f bot (g bot bot bot) bot) (g bot bot bot) bot)",
];
pub const SPARSE3_HAND: [&str; 3] = [
    "(f (f bot (g bot)) (g bot))",
    "(g (f bot bot))",
    "(h (g (f bot bot)) bot)",
];

/// Generic-shaped system on which the hand-expanded `g` root evaluates to
/// 0 although the least fixpoint is `(1,1,1)`.
pub const GENERIC3_WITNESS: &str = "f = 1 | f & g & h; g = h | f & g; h = f | g & h;";
