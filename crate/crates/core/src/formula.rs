//! The modal language over `□` and `▷`: AST, concrete syntax and printing.
//!
//! Concrete syntax (tightest binding first):
//!
//! | operator | meaning | associativity |
//! |----------|---------|---------------|
//! | `~` `[]` `<>` | negation, box, diamond | prefix |
//! | `&` | conjunction | left |
//! | `\|` | disjunction | left |
//! | `\|>` | interpretability | none |
//! | `->` | implication | right |
//! | `<->` | equivalence | right |
//!
//! `false` and `true` are constants and `#` starts a comment. Only `false`,
//! atoms, `->`, `[]` and `|>` survive parsing; everything else is
//! desugared classically (`~A` is `A -> false`, `<>A` is `~[]~A`).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Bottom,
    Atom(String),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Rhd(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Self {
        Formula::Box(Box::new(a))
    }

    pub fn rhd(a: Formula, b: Formula) -> Self {
        Formula::Rhd(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn top() -> Self {
        Formula::not(Formula::Bottom)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::implies(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn diamond(a: Formula) -> Self {
        Formula::not(Formula::boxed(Formula::not(a)))
    }

    /// Parses an object-language formula. Atom names must start with a
    /// lowercase letter.
    pub fn parse(text: &str) -> Result<Formula> {
        Parser::new(text, AtomMode::Object)?.parse_all()
    }

    /// Parses a schema body over the metavariables `A`, `B`, `C`.
    pub fn parse_schema(text: &str) -> Result<Formula> {
        Parser::new(text, AtomMode::Schema)?.parse_all()
    }

    /// Nesting depth of the core AST; atoms and `false` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Atom(_) => 0,
            Formula::Box(a) => 1 + a.depth(),
            Formula::Implies(a, b) | Formula::Rhd(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bottom => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Box(a) => a.collect_atoms(out),
            Formula::Implies(a, b) | Formula::Rhd(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// All distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, seen: &mut HashSet<&'a Formula>, out: &mut Vec<Formula>) {
        if seen.contains(self) {
            return;
        }
        match self {
            Formula::Bottom | Formula::Atom(_) => {}
            Formula::Box(a) => a.collect_subformulas(seen, out),
            Formula::Implies(a, b) | Formula::Rhd(a, b) => {
                a.collect_subformulas(seen, out);
                b.collect_subformulas(seen, out);
            }
        }
        seen.insert(self);
        out.push(self.clone());
    }

    /// Replaces atoms by formulas; atoms without a replacement are kept.
    pub fn substitute(&self, subst: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(p) => subst(p).unwrap_or_else(|| self.clone()),
            Formula::Box(a) => Formula::boxed(a.substitute(subst)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(subst), b.substitute(subst)),
            Formula::Rhd(a, b) => Formula::rhd(a.substitute(subst), b.substitute(subst)),
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

const IMP: u8 = 1;
const RHD: u8 = 2;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOMIC: u8 = 6;

enum View<'a> {
    Bottom,
    Top,
    Atom(&'a str),
    Not(&'a Formula),
    Diamond(&'a Formula),
    Box(&'a Formula),
    And(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Rhd(&'a Formula, &'a Formula),
}

fn view(f: &Formula) -> View<'_> {
    use Formula as F;
    match f {
        F::Bottom => View::Bottom,
        F::Atom(p) => View::Atom(p),
        F::Box(a) => View::Box(a),
        F::Rhd(a, b) => View::Rhd(a, b),
        F::Implies(a, b) => {
            if **b != F::Bottom {
                return View::Implies(a, b);
            }
            match &**a {
                F::Bottom => View::Top,
                F::Box(inner) => match &**inner {
                    F::Implies(x, bot) if **bot == F::Bottom => View::Diamond(x),
                    _ => View::Not(a),
                },
                F::Implies(x, y) => match &**y {
                    F::Implies(z, bot) if **bot == F::Bottom => View::And(x, z),
                    _ => View::Not(a),
                },
                _ => View::Not(a),
            }
        }
    }
}

fn level(v: &View<'_>) -> u8 {
    match v {
        View::Bottom | View::Top | View::Atom(_) => ATOMIC,
        View::Not(_) | View::Diamond(_) | View::Box(_) => UNARY,
        View::And(..) => AND,
        View::Rhd(..) => RHD,
        View::Implies(..) => IMP,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    let v = view(f);
    let paren = level(&v) < min;
    if paren {
        out.push('(');
    }
    match v {
        View::Bottom => out.push_str("false"),
        View::Top => out.push_str("true"),
        View::Atom(p) => out.push_str(p),
        View::Not(a) => {
            out.push('~');
            write_at(a, UNARY, out);
        }
        View::Diamond(a) => {
            out.push_str("<>");
            write_at(a, UNARY, out);
        }
        View::Box(a) => {
            out.push_str("[]");
            write_at(a, UNARY, out);
        }
        View::And(a, b) => {
            write_at(a, AND, out);
            out.push_str(" & ");
            write_at(b, UNARY, out);
        }
        View::Rhd(a, b) => {
            write_at(a, RHD + 1, out);
            out.push_str(" |> ");
            write_at(b, RHD + 1, out);
        }
        View::Implies(a, b) => {
            write_at(a, RHD, out);
            out.push_str(" -> ");
            write_at(b, IMP, out);
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_at(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Canonical text of a formula; `parse(&print(f)) == f`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

pub fn parse(text: &str) -> Result<Formula> {
    Formula::parse(text)
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    False,
    True,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Box,
    Dia,
    Rhd,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::False => "`false`".into(),
            Tok::True => "`true`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::Rhd => "`|>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let rest = &text[i..];
        let fixed = [
            ("<->", Tok::Iff),
            ("->", Tok::Imp),
            ("<>", Tok::Dia),
            ("[]", Tok::Box),
            ("|>", Tok::Rhd),
            ("|", Tok::Or),
            ("&", Tok::And),
            ("~", Tok::Not),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((i, t.clone()));
            i += s.len();
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "false" => Tok::False,
                "true" => Tok::True,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((start, tok));
            continue;
        }
        let found = rest.chars().next().map(String::from).unwrap_or_default();
        return Err(Error::UnknownToken { pos: i, found });
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AtomMode {
    Object,
    Schema,
}

pub(crate) const METAVARIABLES: [&str; 3] = ["A", "B", "C"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    mode: AtomMode,
}

impl Parser {
    fn new(text: &str, mode: AtomMode) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0, mode })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn parse_all(mut self) -> Result<Formula> {
        let f = self.iff()?;
        if *self.peek() != Tok::Eof {
            return self.err(format!("unexpected {}", self.peek().describe()));
        }
        Ok(f)
    }

    fn iff(&mut self) -> Result<Formula> {
        let a = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let b = self.iff()?;
            return Ok(Formula::iff(a, b));
        }
        Ok(a)
    }

    fn imp(&mut self) -> Result<Formula> {
        let a = self.rhd()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let b = self.imp()?;
            return Ok(Formula::implies(a, b));
        }
        Ok(a)
    }

    fn rhd(&mut self) -> Result<Formula> {
        let a = self.or()?;
        if *self.peek() == Tok::Rhd {
            self.bump();
            let b = self.or()?;
            if *self.peek() == Tok::Rhd {
                return self.err("`|>` is not associative; parenthesize the chain");
            }
            return Ok(Formula::rhd(a, b));
        }
        Ok(a)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut a = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let b = self.and()?;
            a = Formula::or(a, b);
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut a = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let b = self.unary()?;
            a = Formula::and(a, b);
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Formula> {
        let start = self.offset();
        match self.bump() {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::Dia => Ok(Formula::diamond(self.unary()?)),
            Tok::False => Ok(Formula::Bottom),
            Tok::True => Ok(Formula::top()),
            Tok::LParen => {
                let f = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return self.err(format!("expected `)`, found {}", self.peek().describe()));
                }
                self.bump();
                Ok(f)
            }
            Tok::Ident(name) => self.atom(name, start),
            other => Err(Error::Syntax {
                pos: start,
                msg: format!("expected a formula, found {}", other.describe()),
            }),
        }
    }

    fn atom(&self, name: String, pos: usize) -> Result<Formula> {
        let first = name.as_bytes()[0];
        match self.mode {
            AtomMode::Object if first.is_ascii_lowercase() => Ok(Formula::Atom(name)),
            AtomMode::Object => Err(Error::Syntax {
                pos,
                msg: format!("atom `{name}` must start with a lowercase letter"),
            }),
            AtomMode::Schema if METAVARIABLES.contains(&name.as_str()) => Ok(Formula::Atom(name)),
            AtomMode::Schema => Err(Error::Syntax {
                pos,
                msg: format!("schema bodies may only use the metavariables A, B, C, found `{name}`"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn parses_p_axiom_shape() {
        let f = Formula::parse("p |> q -> [](p |> q)").unwrap();
        let pq = Formula::rhd(p(), q());
        assert_eq!(f, Formula::implies(pq.clone(), Formula::boxed(pq)));
    }

    #[test]
    fn desugars_negation_and_diamond() {
        assert_eq!(Formula::parse("~p").unwrap(), Formula::implies(p(), Formula::Bottom));
        let dia = Formula::implies(
            Formula::boxed(Formula::implies(p(), Formula::Bottom)),
            Formula::Bottom,
        );
        assert_eq!(Formula::parse("<> p").unwrap(), dia);
    }

    #[test]
    fn prints_canonical_text() {
        assert_eq!(print(&Formula::Bottom), "false");
        assert_eq!(print(&Formula::rhd(p(), q())), "p |> q");
        assert_eq!(print(&Formula::parse("<>p & []q").unwrap()), "<>p & []q");
        assert_eq!(print(&Formula::parse("(p |> q) |> p").unwrap()), "(p |> q) |> p");
        assert_eq!(print(&Formula::parse("(p -> q) -> p").unwrap()), "(p -> q) -> p");
    }

    #[test]
    fn rhd_chains_are_rejected() {
        assert!(matches!(Formula::parse("p |> q |> p"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn reports_positions() {
        assert_eq!(
            Formula::parse("p & $"),
            Err(Error::UnknownToken { pos: 4, found: "$".into() })
        );
        assert!(matches!(Formula::parse("p ->"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(Formula::parse("(p"), Err(Error::Syntax { .. })));
        assert!(matches!(Formula::parse("P"), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let f = Formula::parse("  p\n  -> # trailing\n q ").unwrap();
        assert_eq!(f, Formula::implies(p(), q()));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = Formula::parse("p -> q -> p").unwrap();
        assert_eq!(f, Formula::implies(p(), Formula::implies(q(), p())));
        let g = Formula::parse("p & q | p |> q").unwrap();
        let lhs = Formula::or(Formula::and(p(), q()), p());
        assert_eq!(g, Formula::rhd(lhs, q()));
        let h = Formula::parse("p & q & p").unwrap();
        assert_eq!(h, Formula::and(Formula::and(p(), q()), p()));
    }

    #[test]
    fn subformulas_children_first() {
        assert_eq!(p().subformulas(), vec![p()]);
        let bp = Formula::boxed(p());
        assert_eq!(bp.subformulas(), vec![p(), bp.clone()]);
        let f = Formula::rhd(p(), bp.clone());
        assert_eq!(f.subformulas(), vec![p(), bp, f.clone()]);
    }

    #[test]
    fn and_sugar_round_trips_through_nested_negations() {
        for text in ["~~p", "~(p -> ~true)", "p & false", "~(p |> ~~q) |> <>q & []~q", "true"] {
            let f = Formula::parse(text).unwrap();
            assert_eq!(Formula::parse(&print(&f)).unwrap(), f, "{text}");
        }
    }
}
