//! The BES text format.
//!
//! ```text
//! # comment
//! a = 1;
//! b = a & c;
//! c = b | (a & ?p) | !?q;
//! ```
//!
//! One equation per `;`. Declaration order fixes variable indices; a
//! parameter's index is the order of its first occurrence. `!` may only
//! negate a parameter.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::ParseError;
use crate::system::{MonotoneFormula, ParamId, Polarity, System, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Question,
    Bang,
    LParen,
    RParen,
    Amp,
    Pipe,
    Eq,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Question => "`?`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        chars.next();
        column += 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => continue,
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            '?' => Tok::Question,
            '!' => Tok::Bang,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            c if c.is_ascii_digit() => {
                let mut digits = String::from(c);
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                    digits.push(d);
                    chars.next();
                    column += 1;
                }
                match digits.as_str() {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    _ => {
                        return Err(ParseError::syntax(
                            pos.line,
                            pos.column,
                            format!("invalid constant `{digits}`; only 0 and 1 are allowed"),
                        ))
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::from(c);
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                    name.push(d);
                    chars.next();
                    column += 1;
                }
                Tok::Ident(name)
            }
            other => {
                return Err(ParseError::syntax(
                    pos.line,
                    pos.column,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

/// Formula with unresolved names.
enum Raw {
    Const(bool),
    Name(String, Pos),
    Param(String, Polarity, Pos),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let pos = self.pos();
        ParseError::syntax(
            pos.line,
            pos.column,
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = Raw::Or(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Raw::And(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn param_name(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            (Tok::Ident(name), _) => Ok(name),
            (tok, pos) => Err(ParseError::syntax(
                pos.line,
                pos.column,
                format!("expected a parameter name after `?`, found {}", tok.describe()),
            )),
        }
    }

    fn factor(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Raw::Const(false))
            }
            Tok::One => {
                self.bump();
                Ok(Raw::Const(true))
            }
            Tok::Ident(name) => {
                let pos = self.bump().1;
                Ok(Raw::Name(name, pos))
            }
            Tok::Question => {
                let pos = self.bump().1;
                Ok(Raw::Param(self.param_name()?, Polarity::Positive, pos))
            }
            Tok::Bang => {
                let bang = self.bump().1;
                match self.peek() {
                    Tok::Question => {
                        self.bump();
                        Ok(Raw::Param(self.param_name()?, Polarity::Negated, bang))
                    }
                    Tok::Ident(name) => Err(ParseError::syntax(
                        bang.line,
                        bang.column,
                        format!(
                            "negation of state variable `{name}` is not allowed; `!` only applies to `?parameters`"
                        ),
                    )),
                    _ => Err(ParseError::syntax(
                        bang.line,
                        bang.column,
                        "`!` only applies to `?parameters`",
                    )),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("`0`, `1`, an identifier, `?param`, `!?param` or `(`")),
        }
    }
}

struct Resolver<'a> {
    vars: &'a HashMap<String, VarId>,
    params: Vec<String>,
}

impl Resolver<'_> {
    fn resolve(&mut self, raw: Raw) -> Result<MonotoneFormula, ParseError> {
        Ok(match raw {
            Raw::Const(b) => MonotoneFormula::Const(b),
            Raw::Name(name, pos) => match self.vars.get(&name) {
                Some(v) => MonotoneFormula::Var(*v),
                None => {
                    return Err(ParseError::semantic(
                        pos.line,
                        pos.column,
                        format!("undeclared variable `{name}`"),
                    ))
                }
            },
            Raw::Param(name, pol, _) => {
                let k = match self.params.iter().position(|p| *p == name) {
                    Some(k) => k,
                    None => {
                        self.params.push(name);
                        self.params.len() - 1
                    }
                };
                MonotoneFormula::Param(ParamId(k), pol)
            }
            Raw::And(l, r) => MonotoneFormula::and(self.resolve(*l)?, self.resolve(*r)?),
            Raw::Or(l, r) => MonotoneFormula::or(self.resolve(*l)?, self.resolve(*r)?),
        })
    }
}

/// Parses a system from BES text.
pub fn parse_bes(text: &str) -> Result<System, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut equations: Vec<(String, Pos, Raw)> = Vec::new();
    while *parser.peek() != Tok::Eof {
        let (name, pos) = match parser.bump() {
            (Tok::Ident(name), pos) => (name, pos),
            (tok, pos) => {
                return Err(ParseError::syntax(
                    pos.line,
                    pos.column,
                    format!("expected an equation `name = expr;`, found {}", tok.describe()),
                ))
            }
        };
        parser.expect(Tok::Eq, "`=`")?;
        let rhs = parser.expr()?;
        parser.expect(Tok::Semi, "`;`")?;
        equations.push((name, pos, rhs));
    }
    if equations.is_empty() {
        let pos = parser.pos();
        return Err(ParseError::semantic(pos.line, pos.column, "empty system: no equations"));
    }

    let mut vars = HashMap::new();
    for (k, (name, pos, _)) in equations.iter().enumerate() {
        if vars.insert(name.clone(), VarId(k)).is_some() {
            return Err(ParseError::semantic(
                pos.line,
                pos.column,
                format!("variable `{name}` is defined more than once"),
            ));
        }
    }

    let mut resolver = Resolver {
        vars: &vars,
        params: Vec::new(),
    };
    let mut names = Vec::with_capacity(equations.len());
    let mut formulas = Vec::with_capacity(equations.len());
    let mut first_param_use: HashMap<String, Pos> = HashMap::new();
    for (name, _, raw) in equations {
        record_param_positions(&raw, &mut first_param_use);
        names.push(name);
        formulas.push(resolver.resolve(raw)?);
    }
    if let Some(clash) = resolver.params.iter().find(|p| vars.contains_key(*p)) {
        let pos = first_param_use[clash];
        return Err(ParseError::semantic(
            pos.line,
            pos.column,
            format!("`{clash}` is used both as a variable and as a parameter"),
        ));
    }
    System::new(names, resolver.params, formulas).map_err(|e| ParseError::semantic(1, 1, e.to_string()))
}

fn record_param_positions(raw: &Raw, out: &mut HashMap<String, Pos>) {
    match raw {
        Raw::Param(name, _, pos) => {
            out.entry(name.clone()).or_insert(*pos);
        }
        Raw::And(l, r) | Raw::Or(l, r) => {
            record_param_positions(l, out);
            record_param_positions(r, out);
        }
        _ => {}
    }
}

/// Writes a formula in BES syntax with the fewest parentheses that still
/// re-parse to the same tree.
pub fn format_formula(sys: &System, f: &MonotoneFormula) -> String {
    let mut out = String::new();
    write_formula(sys, f, Ctx::Top, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    OrRight,
    AndLeft,
    AndRight,
}

fn write_formula(sys: &System, f: &MonotoneFormula, ctx: Ctx, out: &mut String) {
    match f {
        MonotoneFormula::Const(b) => out.push(if *b { '1' } else { '0' }),
        MonotoneFormula::Var(v) => out.push_str(sys.var_name(*v)),
        MonotoneFormula::Param(p, Polarity::Positive) => {
            let _ = write!(out, "?{}", sys.param_name(*p));
        }
        MonotoneFormula::Param(p, Polarity::Negated) => {
            let _ = write!(out, "!?{}", sys.param_name(*p));
        }
        MonotoneFormula::Or(l, r) => {
            let parens = ctx != Ctx::Top;
            if parens {
                out.push('(');
            }
            write_formula(sys, l, Ctx::Top, out);
            out.push_str(" | ");
            write_formula(sys, r, Ctx::OrRight, out);
            if parens {
                out.push(')');
            }
        }
        MonotoneFormula::And(l, r) => {
            let parens = ctx == Ctx::AndRight;
            if parens {
                out.push('(');
            }
            write_formula(sys, l, Ctx::AndLeft, out);
            out.push_str(" & ");
            write_formula(sys, r, Ctx::AndRight, out);
            if parens {
                out.push(')');
            }
        }
    }
}

/// Prints a system in BES syntax, one equation per line.
///
/// Parameters are numbered by first occurrence when parsed back, so the
/// round trip is exact when the system's parameters are already in that
/// order (see [`System::canonicalize_params`]).
pub fn print_bes(sys: &System) -> String {
    let mut out = String::new();
    for v in sys.vars() {
        let _ = writeln!(out, "{} = {};", sys.var_name(v), format_formula(sys, sys.formula(v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseErrorKind;
    use crate::semantics::kleene_lfp;
    use crate::strategies::arb_system_canonical;
    use crate::system::{ParamAssignment, Valuation};
    use proptest::prelude::*;
    use MonotoneFormula as F;

    #[test]
    fn identity_system() {
        let s = parse_bes("x = x;").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.formula(VarId(0)), &F::var(0));
    }

    #[test]
    fn forward_references() {
        let s = parse_bes("a = 1; b = a & c; c = b | a;").unwrap();
        assert_eq!(s.var_names(), &["a", "b", "c"]);
        assert_eq!(s.formula(VarId(1)), &F::and(F::var(0), F::var(2)));
        assert_eq!(
            kleene_lfp(&s, &ParamAssignment::none()).unwrap().value,
            Valuation(vec![true, true, true])
        );
    }

    #[test]
    fn precedence_and_params() {
        let s = parse_bes("# header\nx = ?p | x & !?q ; # trailing\n").unwrap();
        assert_eq!(s.param_names(), &["p", "q"]);
        assert_eq!(
            s.formula(VarId(0)),
            &F::or(F::param(0), F::and(F::var(0), F::not_param(1)))
        );
    }

    #[test]
    fn rejects_state_negation() {
        let e = parse_bes("x = !y;\ny = x;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn semantic_errors() {
        let e = parse_bes("x = y;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!((e.line, e.column), (1, 5));

        let e = parse_bes("x = 1;\n  x = 0;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!((e.line, e.column), (2, 3));

        let e = parse_bes("  # nothing here\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);

        let e = parse_bes("x = ?x;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn syntax_errors() {
        for (text, line, col) in [
            ("x = ;", 1, 5),
            ("x = x", 1, 6),
            ("x = 2;", 1, 5),
            ("x = (x;", 1, 7),
            ("x = x;\ny = x $ x;", 2, 7),
            ("= x;", 1, 1),
            ("x = ? ;", 1, 7),
        ] {
            let e = parse_bes(text).unwrap_err();
            assert_eq!(e.kind, ParseErrorKind::Syntax, "{text}");
            assert_eq!((e.line, e.column), (line, col), "{text}: {e}");
        }
    }

    #[test]
    fn printer_parenthesizes_minimally() {
        let s = parse_bes("x = (x | ?p) & (x | 0) & x | x & (x & 1) | (x | x);").unwrap();
        let printed = print_bes(&s);
        assert_eq!(printed, "x = (x | ?p) & (x | 0) & x | x & (x & 1) | (x | x);\n");
        assert_eq!(parse_bes(&printed).unwrap(), s);
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(s in arb_system_canonical(6, 4)) {
            let printed = print_bes(&s);
            prop_assert_eq!(parse_bes(&printed).unwrap(), s);
        }
    }
}
