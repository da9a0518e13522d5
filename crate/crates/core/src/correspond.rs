//! Frame conditions checked against brute-force schema validity.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::enumerate::{enumerate_structures, random_structure};
use crate::error::{Error, Result};
use crate::format::{Kind, Structure};
use crate::genveltman::{self, GenFrame};
use crate::schema::SchemaId;
use crate::veltman::{self, Frame};
use crate::verdict::{set_names, Verdict};

/// A frame condition paired with the schema it corresponds to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    M0Set,
    P0Set,
    RSet,
    /// Holds when the Not-W configuration exists; matches failure of W.
    NotWSet,
    ROrdinary,
    /// The ordinary R condition compared with validity of P0.
    P0Ordinary,
}

impl ConditionId {
    pub const ALL: [ConditionId; 6] = [
        ConditionId::M0Set,
        ConditionId::P0Set,
        ConditionId::RSet,
        ConditionId::NotWSet,
        ConditionId::ROrdinary,
        ConditionId::P0Ordinary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::M0Set => "M0set",
            ConditionId::P0Set => "P0set",
            ConditionId::RSet => "Rset",
            ConditionId::NotWSet => "NotWset",
            ConditionId::ROrdinary => "Rordinary",
            ConditionId::P0Ordinary => "P0ordinary",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            ConditionId::ROrdinary | ConditionId::P0Ordinary => Kind::Ordinary,
            _ => Kind::Generalized,
        }
    }

    /// The schema whose validity the condition characterizes.
    pub fn schema(self) -> SchemaId {
        match self {
            ConditionId::M0Set => SchemaId::M0,
            ConditionId::P0Set | ConditionId::P0Ordinary => SchemaId::P0,
            ConditionId::RSet | ConditionId::ROrdinary => SchemaId::R,
            ConditionId::NotWSet => SchemaId::W,
        }
    }

    /// Reads a condition name, letting the structure kind pick between the
    /// ordinary and set versions of `R` and `P0`.
    pub fn resolve(name: &str, kind: Kind) -> Result<ConditionId> {
        let lower = name.to_ascii_lowercase();
        let id = match (lower.as_str(), kind) {
            ("r", Kind::Ordinary) => ConditionId::ROrdinary,
            ("p0", Kind::Ordinary) => ConditionId::P0Ordinary,
            _ => name.parse()?,
        };
        Ok(id)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "m0" | "m0set" => ConditionId::M0Set,
            "p0" | "p0set" => ConditionId::P0Set,
            "r" | "rset" => ConditionId::RSet,
            "notw" | "not-w" | "notwset" => ConditionId::NotWSet,
            "rordinary" | "rord" => ConditionId::ROrdinary,
            "p0ordinary" | "p0ord" => ConditionId::P0Ordinary,
            _ => return Err(Error::Precondition(format!("unknown condition `{s}`"))),
        })
    }
}

/// Both verdicts for one structure and condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceCase {
    pub condition: ConditionId,
    pub structure: Structure,
    pub condition_holds: bool,
    /// For `NotWset` this is the failure of W.
    pub oracle_holds: bool,
    pub condition_detail: Option<String>,
    pub oracle_detail: Option<String>,
}

impl CorrespondenceCase {
    pub fn agrees(&self) -> bool {
        self.condition_holds == self.oracle_holds
    }
}

/// Decides a condition, with a readable witness: a counterexample when it
/// fails, or for `NotWset` the configuration when it holds.
pub fn decide(structure: &Structure, condition: ConditionId) -> Result<(bool, Option<String>)> {
    match (structure, condition.kind()) {
        (Structure::Ordinary(f), Kind::Ordinary) => {
            f.ensure_valid()?;
            Ok(describe_ordinary(f))
        }
        (Structure::Generalized(g), Kind::Generalized) => {
            g.ensure_valid()?;
            Ok(describe_gen(g, condition))
        }
        (s, _) => Err(Error::KindMismatch { condition: condition.name().into(), kind: s.kind().name() }),
    }
}

fn describe_ordinary(f: &Frame) -> (bool, Option<String>) {
    match veltman::r_frame_condition(f) {
        Verdict::Holds => (true, None),
        Verdict::Fails(w) => {
            let n = |i| f.name(i);
            let detail = format!(
                "{x} R {y} R {z}, {z} S_{x} {u}, {u} R {v}, but not {z} S_{y} {v}",
                x = n(w.x),
                y = n(w.y),
                z = n(w.z),
                u = n(w.u),
                v = n(w.v)
            );
            (false, Some(detail))
        }
    }
}

fn describe_gen(g: &GenFrame, condition: ConditionId) -> (bool, Option<String>) {
    let names = g.names();
    let n = |i: usize| names[i].as_str();
    let set = |s| set_names(s, names);
    match condition {
        ConditionId::M0Set => match genveltman::m0_condition(g) {
            Verdict::Holds => (true, None),
            Verdict::Fails(w) => (
                false,
                Some(format!(
                    "{w} R {x} R {y}, {y} S_{w} Y={yy}, but no Y' ⊆ Y with {x} S_{w} Y' and R[Y'] ⊆ R[{x}]",
                    w = n(w.w),
                    x = n(w.x),
                    y = n(w.y),
                    yy = set(w.big_y)
                )),
            ),
        },
        ConditionId::P0Set => match genveltman::p0_condition(g) {
            Verdict::Holds => (true, None),
            Verdict::Fails(w) => (
                false,
                Some(format!(
                    "{w} R {x} R {y}, {y} S_{w} Y={yy}, Z={z} meets R[y'] for each y' in Y, but no Z' ⊆ Z with {y} S_{x} Z'",
                    w = n(w.w),
                    x = n(w.x),
                    y = n(w.y),
                    yy = set(w.big_y),
                    z = set(w.z)
                )),
            ),
        },
        ConditionId::RSet => match genveltman::r_condition(g) {
            Verdict::Holds => (true, None),
            Verdict::Fails(w) => (
                false,
                Some(format!(
                    "{w} R {x} R {y}, {y} S_{w} Y={yy}, choice set Γ={gamma} for ({x},{y}), but no Y' ⊆ Y with {x} S_{w} Y' and R[Y'] ⊆ Γ",
                    w = n(w.w),
                    x = n(w.x),
                    y = n(w.y),
                    yy = set(w.big_y),
                    gamma = set(w.gamma)
                )),
            ),
        },
        ConditionId::NotWSet => match genveltman::not_w(g) {
            None => (false, None),
            Some(w) => {
                let lasso: Vec<&str> = w.lasso().into_iter().map(n).collect();
                let steps: Vec<String> = w
                    .steps
                    .iter()
                    .map(|s| format!("{} S_{} {} ∋ {} R {}", n(s.from), n(w.w), set(s.target), n(s.via), n(s.to)))
                    .collect();
                (
                    true,
                    Some(format!(
                        "w={} z0={} Z={} Q={}; {}; sequence {}",
                        n(w.w),
                        n(w.z0),
                        set(w.z),
                        set(w.q),
                        steps.join("; "),
                        lasso.join(" -> ")
                    )),
                )
            }
        },
        ConditionId::ROrdinary | ConditionId::P0Ordinary => unreachable!("kind checked by caller"),
    }
}

/// Runs a condition decider and its schema oracle on one structure.
pub fn verify_correspondence(structure: &Structure, condition: ConditionId) -> Result<CorrespondenceCase> {
    let (condition_holds, condition_detail) = decide(structure, condition)?;
    let schema = condition.schema().schema();
    let verdict = match structure {
        Structure::Ordinary(f) => veltman::frame_valid_schema(f, schema)?,
        Structure::Generalized(g) => genveltman::genframe_valid_schema(g, schema)?,
    };
    let valid = verdict.holds();
    let oracle_detail = verdict.witness().map(|c| c.display(structure.names()).to_string());
    let oracle_holds = if condition == ConditionId::NotWSet { !valid } else { valid };
    Ok(CorrespondenceCase {
        condition,
        structure: structure.clone(),
        condition_holds,
        oracle_holds,
        condition_detail,
        oracle_detail,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Every canonical structure with at most the given number of worlds.
    Exhaustive,
    /// `count` random structures with exactly the given number of worlds.
    Random { seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub structures: usize,
    /// Structure and condition pairs compared.
    pub checked: usize,
    pub mismatches: usize,
    /// Least mismatch in enumeration order.
    pub first_mismatch: Option<CorrespondenceCase>,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn summary_line(&self) -> String {
        format!("mismatches={} checked={}", self.mismatches, self.checked)
    }
}

/// Compares every listed condition with its oracle over a family of
/// structures. With `workers` set, a dedicated pool of that size is used.
pub fn sweep(
    kind: Kind,
    max_worlds: usize,
    conditions: &[ConditionId],
    mode: SweepMode,
    workers: Option<usize>,
) -> Result<SweepReport> {
    if max_worlds == 0 {
        return Err(Error::Precondition("max-worlds must be at least 1".into()));
    }
    if let Some(c) = conditions.iter().find(|c| c.kind() != kind) {
        return Err(Error::KindMismatch { condition: c.name().into(), kind: kind.name() });
    }
    let start = Instant::now();
    let structures: Vec<Structure> = match mode {
        SweepMode::Exhaustive => enumerate_structures(kind, max_worlds).collect(),
        SweepMode::Random { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_structure(&mut rng, kind, max_worlds)).collect()
        }
    };
    let run = || -> Result<Vec<Option<CorrespondenceCase>>> {
        structures
            .par_iter()
            .map(|s| {
                for &c in conditions {
                    let case = verify_correspondence(s, c)?;
                    if !case.agrees() {
                        return Ok(Some(case));
                    }
                }
                Ok(None)
            })
            .collect()
    };
    let results = match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start workers: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let mismatches = results.iter().filter(|r| r.is_some()).count();
    let first_mismatch = results.into_iter().flatten().next();
    Ok(SweepReport {
        structures: structures.len(),
        checked: structures.len() * conditions.len(),
        mismatches,
        first_mismatch,
        elapsed: start.elapsed(),
    })
}
