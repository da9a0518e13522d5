//! Hilbert-style derivations over IL and its extensions.
//!
//! ```text
//! logic: R
//! 1. p |> q -> ~(p |> ~r) |> q & []r ; ax R [A:=p,B:=q,C:=r]
//! 2. ~~q -> q ; taut
//! 3. [](~~q -> q) ; nec 2
//! 4. ... ; mp 2 7
//! ```
//!
//! `mp I J` needs step `J` to be the implication from step `I` to the
//! current formula.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::schema::{parse_schema_list, SchemaId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Taut,
    Axiom(SchemaId, BTreeMap<String, Formula>),
    Mp(usize, usize),
    Nec(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// Steps are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub logic: Vec<SchemaId>,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// The first `n` steps.
    pub fn prefix(&self, n: usize) -> Derivation {
        Derivation { logic: self.logic.clone(), steps: self.steps[..n.min(self.steps.len())].to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Empty,
    /// A cited step that is not strictly earlier.
    BadIndex(usize),
    NotInLogic(SchemaId),
    UnusedBinding(String),
    MissingBinding(String),
    NotAnInstance { expected: Formula },
    NotATautology,
    NotAnImplication { cited: Formula },
    MpMismatch { expected: Formula, cited: Formula },
    NecMismatch { expected: Formula },
}

/// The first step that does not check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub step: usize,
    pub formula: Option<Formula>,
    pub reason: Reason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: ", self.step)?;
        match &self.reason {
            Reason::Empty => write!(f, "derivation has no steps"),
            Reason::BadIndex(i) => write!(f, "cites step {i}, which is not an earlier step"),
            Reason::NotInLogic(id) => write!(f, "axiom {id} is not in the logic"),
            Reason::UnusedBinding(m) => write!(f, "binding for `{m}`, which the schema does not use"),
            Reason::MissingBinding(m) => write!(f, "no binding for `{m}`"),
            Reason::NotAnInstance { expected } => {
                write!(f, "formula is not the instance `{expected}`")?;
                self.write_found(f)
            }
            Reason::NotATautology => {
                write!(f, "not a tautology")?;
                self.write_found(f)
            }
            Reason::NotAnImplication { cited } => write!(f, "major premise `{cited}` is not an implication"),
            Reason::MpMismatch { expected, cited } => {
                write!(f, "modus ponens needs `{expected}`, cited `{cited}`")
            }
            Reason::NecMismatch { expected } => {
                write!(f, "necessitation gives `{expected}`")?;
                self.write_found(f)
            }
        }
    }
}

impl Rejection {
    fn write_found(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.formula {
            Some(x) => write!(f, ", found `{x}`"),
            None => Ok(()),
        }
    }
}

impl std::error::Error for Rejection {}

/// Whether `f` is a classical tautology once every maximal `□` or `▷`
/// subformula is read as a fresh atom.
pub fn taut_check(f: &Formula) -> bool {
    let mut atoms: HashMap<&Formula, usize> = HashMap::new();
    collect_atoms(f, &mut atoms);
    let n = atoms.len();
    // Six atoms fill the 64 lanes of a word; the rest are fixed per chunk.
    let lanes = n.min(6);
    let mask = if lanes == 6 { u64::MAX } else { (1u64 << (1 << lanes)) - 1 };
    (0u64..1 << (n - lanes)).all(|chunk| {
        let value = |i: usize| -> u64 {
            if i < 6 {
                PATTERNS[i]
            } else if chunk >> (i - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        };
        eval_word(f, &atoms, &value) & mask == mask
    })
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn collect_atoms<'a>(f: &'a Formula, atoms: &mut HashMap<&'a Formula, usize>) {
    match f {
        Formula::Bottom => {}
        Formula::Implies(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
        _ => {
            let next = atoms.len();
            atoms.entry(f).or_insert(next);
        }
    }
}

fn eval_word(f: &Formula, atoms: &HashMap<&Formula, usize>, value: &dyn Fn(usize) -> u64) -> u64 {
    match f {
        Formula::Bottom => 0,
        Formula::Implies(a, b) => !eval_word(a, atoms, value) | eval_word(b, atoms, value),
        _ => value(atoms[f]),
    }
}

fn check_step(d: &Derivation, k: usize) -> std::result::Result<(), Reason> {
    let step = &d.steps[k];
    let earlier = |i: usize| -> std::result::Result<&Formula, Reason> {
        if i >= 1 && i <= k {
            Ok(&d.steps[i - 1].formula)
        } else {
            Err(Reason::BadIndex(i))
        }
    };
    match &step.justification {
        Justification::Taut => taut_check(&step.formula).then_some(()).ok_or(Reason::NotATautology),
        Justification::Axiom(id, subst) => {
            if !id.is_il_axiom() && !d.logic.contains(id) {
                return Err(Reason::NotInLogic(*id));
            }
            let schema = id.schema();
            let used = schema.metavariables();
            if let Some(m) = subst.keys().find(|m| !used.contains(&m.as_str())) {
                return Err(Reason::UnusedBinding(m.clone()));
            }
            let expected = schema.instantiate(subst).map_err(|e| match e {
                Error::MissingBinding(m) => Reason::MissingBinding(m),
                other => unreachable!("instantiation only lacks bindings: {other}"),
            })?;
            if expected == step.formula {
                Ok(())
            } else {
                Err(Reason::NotAnInstance { expected })
            }
        }
        Justification::Mp(i, j) => {
            let minor = earlier(*i)?;
            let major = earlier(*j)?;
            let Formula::Implies(a, b) = major else {
                return Err(Reason::NotAnImplication { cited: major.clone() });
            };
            if **a == *minor && **b == step.formula {
                Ok(())
            } else {
                Err(Reason::MpMismatch {
                    expected: Formula::implies(minor.clone(), step.formula.clone()),
                    cited: major.clone(),
                })
            }
        }
        Justification::Nec(i) => {
            let expected = Formula::boxed(earlier(*i)?.clone());
            if expected == step.formula {
                Ok(())
            } else {
                Err(Reason::NecMismatch { expected })
            }
        }
    }
}

/// Checks every step in order and reports the first that fails.
pub fn check_derivation(d: &Derivation) -> std::result::Result<(), Rejection> {
    if d.steps.is_empty() {
        return Err(Rejection { step: 0, formula: None, reason: Reason::Empty });
    }
    for k in 0..d.steps.len() {
        check_step(d, k).map_err(|reason| Rejection {
            step: k + 1,
            formula: Some(d.steps[k].formula.clone()),
            reason,
        })?;
    }
    Ok(())
}

fn parse_subst(text: &str, line: usize) -> Result<BTreeMap<String, Formula>> {
    let err = |msg: String| Error::DerivationFormat { line, msg };
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err("substitution must be written `[A:=..., B:=...]`".into()))?;
    let mut subst = BTreeMap::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (m, f) = part.split_once(":=").ok_or_else(|| err(format!("expected `X:=formula`, got `{part}`")))?;
        let m = m.trim();
        if !matches!(m, "A" | "B" | "C") {
            return Err(err(format!("unknown metavariable `{m}`")));
        }
        let f = Formula::parse(f).map_err(|e| err(format!("in binding for {m}: {e}")))?;
        if subst.insert(m.to_string(), f).is_some() {
            return Err(err(format!("repeated binding for `{m}`")));
        }
    }
    Ok(subst)
}

fn parse_index(word: Option<&str>, line: usize) -> Result<usize> {
    let word = word.ok_or(Error::DerivationFormat { line, msg: "missing step index".into() })?;
    word.parse()
        .map_err(|_| Error::DerivationFormat { line, msg: format!("bad step index `{word}`") })
}

fn parse_justification(text: &str, line: usize) -> Result<Justification> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let mut words = rest.split_whitespace();
    let just = match head {
        "taut" => Justification::Taut,
        "ax" => {
            let rest = rest.trim();
            let (id, subst) = rest.split_once(char::is_whitespace).unwrap_or((rest, "[]"));
            let id: SchemaId = id.parse().map_err(|e| Error::DerivationFormat { line, msg: format!("{e}") })?;
            return Ok(Justification::Axiom(id, parse_subst(subst.trim(), line)?));
        }
        "mp" => Justification::Mp(parse_index(words.next(), line)?, parse_index(words.next(), line)?),
        "nec" => Justification::Nec(parse_index(words.next(), line)?),
        other => {
            return Err(Error::DerivationFormat { line, msg: format!("unknown justification `{other}`") })
        }
    };
    match words.next() {
        Some(extra) => Err(Error::DerivationFormat { line, msg: format!("unexpected `{extra}`") }),
        None => Ok(just),
    }
}

/// Reads a derivation file. Steps must be numbered 1, 2, ... in order.
pub fn parse_derivation(text: &str) -> Result<Derivation> {
    let mut logic = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::DerivationFormat { line, msg };
        if let Some(list) = content.strip_prefix("logic:") {
            if logic.is_some() || !steps.is_empty() {
                return Err(err("`logic:` must be the first line, once".into()));
            }
            logic = Some(parse_schema_list(list).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let (num, rest) = content.split_once('.').ok_or_else(|| err("expected `N. formula ; justification`".into()))?;
        let want = steps.len() + 1;
        if num.trim().parse::<usize>().ok() != Some(want) {
            return Err(err(format!("expected step number {want}, found `{}`", num.trim())));
        }
        let (formula, just) = rest.rsplit_once(';').ok_or_else(|| err("missing `; justification`".into()))?;
        let formula = Formula::parse(formula).map_err(|e| err(e.to_string()))?;
        steps.push(Step { formula, justification: parse_justification(just, line)? });
    }
    let logic = logic.ok_or(Error::DerivationFormat { line: 1, msg: "missing `logic:` header".into() })?;
    Ok(Derivation { logic, steps })
}

pub fn write_derivation(d: &Derivation) -> String {
    let names: Vec<&str> = d.logic.iter().map(|id| id.name()).collect();
    let mut out = format!("logic: {}\n", names.join(","));
    for (k, step) in d.steps.iter().enumerate() {
        let _ = write!(out, "{}. {} ; ", k + 1, step.formula);
        let _ = match &step.justification {
            Justification::Taut => writeln!(out, "taut"),
            Justification::Axiom(id, subst) => {
                let binds: Vec<String> = subst.iter().map(|(m, f)| format!("{m}:={f}")).collect();
                writeln!(out, "ax {id} [{}]", binds.join(","))
            }
            Justification::Mp(i, j) => writeln!(out, "mp {i} {j}"),
            Justification::Nec(i) => writeln!(out, "nec {i}"),
        };
    }
    out
}

/// Shipped derivations of extension schemata from one another.
pub const FIXTURES: [(&str, &str); 6] = [
    ("p0_from_r", include_str!("../fixtures/proofs/p0_from_r.proof")),
    ("m0_from_r", include_str!("../fixtures/proofs/m0_from_r.proof")),
    ("rstar_from_rw", include_str!("../fixtures/proofs/rstar_from_rw.proof")),
    ("r_from_rstar", include_str!("../fixtures/proofs/r_from_rstar.proof")),
    ("top_from_rstar", include_str!("../fixtures/proofs/top_from_rstar.proof")),
    ("w_from_rstar", include_str!("../fixtures/proofs/w_from_rstar.proof")),
];

/// The four fixtures showing that R together with W proves the same as R*.
pub const EQUIVALENCE: [&str; 4] = ["rstar_from_rw", "r_from_rstar", "top_from_rstar", "w_from_rstar"];

pub fn fixture(name: &str) -> Option<Derivation> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_derivation(text).expect("shipped fixtures parse"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureFailure {
    pub name: String,
    pub rejection: Rejection,
}

impl fmt::Display for FixtureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.rejection)
    }
}

/// Checks named derivations in order, stopping at the first rejected one.
pub fn check_fixtures<'a>(
    fixtures: impl IntoIterator<Item = (&'a str, &'a Derivation)>,
) -> std::result::Result<(), FixtureFailure> {
    for (name, d) in fixtures {
        check_derivation(d).map_err(|rejection| FixtureFailure { name: name.to_string(), rejection })?;
    }
    Ok(())
}

pub fn check_equivalence_fixtures() -> std::result::Result<(), FixtureFailure> {
    let ds: Vec<(&str, Derivation)> = EQUIVALENCE.iter().map(|&n| (n, fixture(n).expect("known fixture"))).collect();
    check_fixtures(ds.iter().map(|(n, d)| (*n, d)))
}
