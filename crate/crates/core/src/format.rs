//! Text format shared by ordinary and generalized structures.
//!
//! ```text
//! # comment
//! worlds w x y
//! R w x
//! S w x : y          # ordinary: (w, x, y); generalized: (w, x, {y})
//! S w y : a0 a1      # generalized only: (w, y, {a0, a1})
//! val p : x y
//! closure on
//! ```
//!
//! A file is read as generalized when some `S` line lists other than one
//! target; an explicit kind overrides this. With `closure on` the relations
//! given are a seed and the least frame containing them is used.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::genveltman::{GenFrame, GenModel};
use crate::veltman::{Frame, Model};
use crate::worldset::{World, WorldSet, MAX_WORLDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Ordinary,
    Generalized,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Ordinary => "ordinary",
            Kind::Generalized => "generalized",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ordinary" | "frame" | "ord" => Ok(Kind::Ordinary),
            "gen" | "genframe" | "generalized" | "set" => Ok(Kind::Generalized),
            _ => Err(Error::Precondition(format!("unknown structure kind `{s}`"))),
        }
    }
}

/// A frame of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Ordinary(Frame),
    Generalized(GenFrame),
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::Ordinary(_) => Kind::Ordinary,
            Structure::Generalized(_) => Kind::Generalized,
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            Structure::Ordinary(f) => f.names(),
            Structure::Generalized(g) => g.names(),
        }
    }

    pub fn len(&self) -> usize {
        self.names().len()
    }

    pub fn is_empty(&self) -> bool {
        self.names().is_empty()
    }
}

/// A parsed structure file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub structure: Structure,
    pub valuation: BTreeMap<String, WorldSet>,
}

impl Document {
    pub fn model(&self) -> Result<Model> {
        match &self.structure {
            Structure::Ordinary(f) => Model::new(f.clone(), self.valuation.clone()),
            Structure::Generalized(_) => Err(Error::KindMismatch {
                condition: "ordinary model".into(),
                kind: Kind::Generalized.name(),
            }),
        }
    }

    pub fn gen_model(&self) -> Result<GenModel> {
        match &self.structure {
            Structure::Generalized(g) => GenModel::new(g.clone(), self.valuation.clone()),
            Structure::Ordinary(_) => Err(Error::KindMismatch {
                condition: "generalized model".into(),
                kind: Kind::Ordinary.name(),
            }),
        }
    }
}

struct SLine {
    line: usize,
    base: World,
    from: World,
    to: Vec<World>,
}

/// Parses a structure file and validates the result.
pub fn parse_document(text: &str, kind: Option<Kind>) -> Result<Document> {
    let mut names: Option<Vec<String>> = None;
    let mut r: Vec<(usize, World, World)> = Vec::new();
    let mut s: Vec<SLine> = Vec::new();
    let mut valuation: BTreeMap<String, WorldSet> = BTreeMap::new();
    let mut closure = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(head) = words.next() else { continue };
        let rest: Vec<&str> = words.collect();
        let err = |msg: String| Error::Format { line, msg };
        let lookup = |n: &str| -> Result<World> {
            let names = names.as_ref().ok_or_else(|| err("`worlds` must come first".into()))?;
            names.iter().position(|m| m == n).ok_or_else(|| err(format!("unknown world `{n}`")))
        };
        match head {
            "worlds" => {
                if names.is_some() {
                    return Err(err("repeated `worlds` line".into()));
                }
                if rest.is_empty() {
                    return Err(err("`worlds` needs at least one world".into()));
                }
                if rest.len() > MAX_WORLDS {
                    return Err(Error::TooManyWorlds(rest.len()));
                }
                let list: Vec<String> = rest.iter().map(|w| w.to_string()).collect();
                crate::veltman::check_names(&list)?;
                names = Some(list);
            }
            "R" => {
                if rest.len() != 2 {
                    return Err(err("expected `R <world> <world>`".into()));
                }
                r.push((line, lookup(rest[0])?, lookup(rest[1])?));
            }
            "S" => {
                if rest.len() < 3 || rest[2] != ":" {
                    return Err(err("expected `S <base> <from> : <targets>`".into()));
                }
                let to = rest[3..].iter().map(|w| lookup(w)).collect::<Result<Vec<_>>>()?;
                s.push(SLine { line, base: lookup(rest[0])?, from: lookup(rest[1])?, to });
            }
            "val" => {
                if rest.len() < 2 || rest[1] != ":" {
                    return Err(err("expected `val <atom> : <worlds>`".into()));
                }
                let atom = rest[0];
                if !atom.starts_with(|c: char| c.is_ascii_lowercase())
                    || !atom.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    return Err(err(format!("invalid atom name `{atom}`")));
                }
                if valuation.contains_key(atom) {
                    return Err(err(format!("repeated valuation for `{atom}`")));
                }
                let set = rest[2..].iter().map(|w| lookup(w)).collect::<Result<WorldSet>>()?;
                valuation.insert(atom.to_string(), set);
            }
            "closure" => match rest.as_slice() {
                ["on"] => closure = true,
                ["off"] => closure = false,
                _ => return Err(err("expected `closure on` or `closure off`".into())),
            },
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let names = names.ok_or(Error::Format { line: 0, msg: "missing `worlds` line".into() })?;
    let kind = kind.unwrap_or(if s.iter().all(|l| l.to.len() == 1) {
        Kind::Ordinary
    } else {
        Kind::Generalized
    });
    let structure = match kind {
        Kind::Ordinary => {
            let mut f = Frame::new(names)?;
            for &(_, a, b) in &r {
                f.add_r(a, b);
            }
            for l in &s {
                if l.to.is_empty() {
                    return Err(Error::Format { line: l.line, msg: "S line without targets".into() });
                }
                for &t in &l.to {
                    f.add_s(l.base, l.from, t);
                }
            }
            let f = if closure { f.close()? } else { f };
            f.ensure_valid()?;
            Structure::Ordinary(f)
        }
        Kind::Generalized => {
            let mut g = GenFrame::new(names)?;
            for &(_, a, b) in &r {
                g.add_r(a, b);
            }
            for l in &s {
                if l.to.is_empty() {
                    return Err(Error::Format { line: l.line, msg: "empty target set".into() });
                }
                g.add_s(l.base, l.from, l.to.iter().copied().collect());
            }
            let g = if closure { g.close()? } else { g };
            g.ensure_valid()?;
            Structure::Generalized(g)
        }
    };
    Ok(Document { structure, valuation })
}

fn write_header(out: &mut String, names: &[String], pairs: &[(World, World)]) {
    let _ = writeln!(out, "worlds {}", names.join(" "));
    for &(a, b) in pairs {
        let _ = writeln!(out, "R {} {}", names[a], names[b]);
    }
}

fn write_tail(out: &mut String, names: &[String], valuation: &BTreeMap<String, WorldSet>) {
    for (p, set) in valuation {
        let members: Vec<&str> = set.iter().map(|w| names[w].as_str()).collect();
        let _ = writeln!(out, "val {p} : {}", members.join(" "));
    }
    out.push_str("closure off\n");
}

/// Full relations of an ordinary frame, one triple per `S` line.
pub fn write_frame(f: &Frame, valuation: &BTreeMap<String, WorldSet>) -> String {
    let names = f.names();
    let mut out = String::new();
    write_header(&mut out, names, &f.r_pairs());
    for (b, x, y) in f.s_triples() {
        let _ = writeln!(out, "S {} {} : {}", names[b], names[x], names[y]);
    }
    write_tail(&mut out, names, valuation);
    out
}

/// Full relations of a generalized frame. Files with only singleton
/// targets need an explicit generalized kind when read back.
pub fn write_genframe(g: &GenFrame, valuation: &BTreeMap<String, WorldSet>) -> String {
    let names = g.names();
    let mut out = String::new();
    write_header(&mut out, names, &g.r_pairs());
    for (b, x, t) in g.s_triples() {
        let members: Vec<&str> = t.iter().map(|w| names[w].as_str()).collect();
        let _ = writeln!(out, "S {} {} : {}", names[b], names[x], members.join(" "));
    }
    write_tail(&mut out, names, valuation);
    out
}

pub fn write_structure(s: &Structure, valuation: &BTreeMap<String, WorldSet>) -> String {
    match s {
        Structure::Ordinary(f) => write_frame(f, valuation),
        Structure::Generalized(g) => write_genframe(g, valuation),
    }
}
