//! Text, graph and CNF renderings of term dags.
//!
//! All emitters are deterministic: the same dag and system always produce
//! byte-identical output.

mod cnf;
mod dimacs;
mod dot;
mod let_text;
mod sexpr;

pub use cnf::{to_cnf, CnfFormula, CnfLabel};
pub use dimacs::{parse_dimacs, write_dimacs};
pub use dot::to_dot;
pub use let_text::{to_let_text, to_let_text_with, LetStyle};
pub use sexpr::{term_sexpr, to_sexpr, to_sexpr_with_limit, DEFAULT_SEXPR_LIMIT};
