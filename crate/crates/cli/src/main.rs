use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ilvelt::correspond::{self, ConditionId, SweepMode};
use ilvelt::format::{self, Document, Kind, Structure};
use ilvelt::genveltman::{self, GenModel};
use ilvelt::hilbert;
use ilvelt::schema::{parse_schema_list, SchemaId};
use ilvelt::search::{self, Requirement, SearchKind, SearchOptions, SearchOutcome, SearchSpec};
use ilvelt::veltman;
use ilvelt::verdict::set_names;
use ilvelt::{Formula, Verdict};

/// Model checking, frame conditions, countermodel search and derivation
/// checking for interpretability logics.
#[derive(Parser)]
#[command(name = "ilvelt", version)]
struct Cli {
    /// Print a JSON object instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StructureArgs {
    /// Structure file.
    file: PathBuf,
    /// Read the file as this kind (ordinary or gen) instead of guessing.
    #[arg(long)]
    kind: Option<Kind>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it canonically.
    Parse {
        formula: String,
        /// Allow the metavariables A, B, C.
        #[arg(long)]
        schema: bool,
    },
    /// Evaluate a formula in a model.
    CheckModel {
        #[command(flatten)]
        input: StructureArgs,
        #[arg(long, short)]
        formula: String,
        /// Only this world; by default every world.
        #[arg(long, short)]
        world: Option<String>,
    },
    /// Decide frame validity of a schema by brute force.
    FrameValid {
        #[command(flatten)]
        input: StructureArgs,
        #[arg(long, short)]
        schema: SchemaId,
    },
    /// Decide a frame condition.
    Condition {
        #[command(flatten)]
        input: StructureArgs,
        /// M0, P0, R or NotW (generalized); R or P0 (ordinary).
        #[arg(long, short)]
        name: String,
    },
    /// Check that worlds force every definable instance of a logic.
    ForcesLogic {
        #[command(flatten)]
        input: StructureArgs,
        /// Comma-separated schema ids, e.g. P0,Wstar.
        #[arg(long, short)]
        logic: String,
        #[arg(long, short)]
        world: Option<String>,
    },
    /// Print the generalized model induced by an ordinary one.
    Lift {
        #[command(flatten)]
        input: StructureArgs,
    },
    /// Compare condition deciders with brute-force schema validity.
    Correspond {
        /// ordinary or gen.
        #[arg(long)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Comma-separated conditions; all of the kind by default.
        #[arg(long)]
        conditions: Option<String>,
        /// Sample random structures of exactly max-worlds worlds.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Search for a separating frame or an incompleteness model.
    Search {
        /// frame, genframe or model-logic.
        #[arg(long)]
        kind: SearchKind,
        #[arg(long, default_value_t = 8)]
        max_worlds: usize,
        /// Required schemata or conditions, comma-separated.
        #[arg(long)]
        valid: Option<String>,
        /// Schema or condition to refute.
        #[arg(long)]
        invalid: Option<String>,
        /// Model-logic search: schemata forced at every world.
        #[arg(long)]
        logic: Option<String>,
        /// Model-logic search: schema refuted somewhere.
        #[arg(long)]
        target: Option<SchemaId>,
        /// Most seed triples per candidate frame.
        #[arg(long)]
        max_seeds: Option<usize>,
        /// Shuffle candidate order within each layer.
        #[arg(long)]
        seed: Option<u64>,
        /// Time limit in seconds.
        #[arg(long, env = "ILVELT_BUDGET_SECS")]
        budget: Option<f64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check a derivation file.
    Prove { file: PathBuf },
}

struct Report {
    code: u8,
    text: String,
    json: Value,
}

impl Report {
    fn new(holds: bool, text: String, json: Value) -> Report {
        Report { code: if holds { 0 } else { 1 }, text, json }
    }
}

type Outcome = Result<Report, String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(input: &StructureArgs) -> Result<Document, String> {
    format::parse_document(&read(&input.file)?, input.kind).map_err(|e| format!("{}: {e}", input.file.display()))
}

fn world_index(names: &[String], name: &str) -> Result<usize, String> {
    names.iter().position(|n| n == name).ok_or_else(|| format!("unknown world `{name}`"))
}

fn parse(formula: &str, schema: bool) -> Outcome {
    let f = if schema { Formula::parse_schema(formula) } else { Formula::parse(formula) }.map_err(|e| e.to_string())?;
    let text = f.to_string();
    Ok(Report::new(true, format!("{text}\n"), json!({ "formula": text, "depth": f.depth() })))
}

fn check_model(input: &StructureArgs, formula: &str, world: Option<&str>) -> Outcome {
    let doc = load(input)?;
    let f = Formula::parse(formula).map_err(|e| e.to_string())?;
    let ext = match &doc.structure {
        Structure::Ordinary(_) => doc.model().and_then(|m| m.extension(&f)),
        Structure::Generalized(_) => doc.gen_model().and_then(|m| m.extension(&f)),
    }
    .map_err(|e| e.to_string())?;
    let names = doc.structure.names();
    let scope: Vec<usize> = match world {
        Some(w) => vec![world_index(names, w)?],
        None => (0..names.len()).collect(),
    };
    let mut text = String::new();
    for &w in &scope {
        let _ = writeln!(text, "{} {} {f}", names[w], if ext.contains(w) { "|=" } else { "|/=" });
    }
    let holds = scope.iter().all(|&w| ext.contains(w));
    let json = json!({ "formula": f.to_string(), "holds": holds, "extension": set_list(ext, names) });
    Ok(Report::new(holds, text, json))
}

fn set_list(set: ilvelt::WorldSet, names: &[String]) -> Vec<String> {
    set.iter().map(|w| names[w].clone()).collect()
}

fn frame_valid(input: &StructureArgs, id: SchemaId) -> Outcome {
    let doc = load(input)?;
    let verdict = match &doc.structure {
        Structure::Ordinary(f) => veltman::frame_valid_schema(f, id.schema()),
        Structure::Generalized(g) => genveltman::genframe_valid_schema(g, id.schema()),
    }
    .map_err(|e| e.to_string())?;
    let names = doc.structure.names();
    let (text, witness) = match &verdict {
        Verdict::Holds => (format!("{id} is valid on the frame\n"), Value::Null),
        Verdict::Fails(c) => (format!("{}\n", c.display(names)), json!(c.display(names).to_string())),
    };
    Ok(Report::new(verdict.holds(), text, json!({ "schema": id.name(), "valid": verdict.holds(), "witness": witness })))
}

fn condition(input: &StructureArgs, name: &str) -> Outcome {
    let doc = load(input)?;
    let id = ConditionId::resolve(name, doc.structure.kind()).map_err(|e| e.to_string())?;
    let (holds, detail) = correspond::decide(&doc.structure, id).map_err(|e| e.to_string())?;
    let mut text = format!("{id}: {}\n", if holds { "holds" } else { "fails" });
    if let Some(d) = &detail {
        let _ = writeln!(text, "  {d}");
    }
    Ok(Report::new(holds, text, json!({ "condition": id.name(), "holds": holds, "witness": detail })))
}

fn forces_logic(input: &StructureArgs, logic: &str, world: Option<&str>) -> Outcome {
    let doc = load(input)?;
    let m = doc.model().map_err(|e| e.to_string())?;
    let ids = parse_schema_list(logic).map_err(|e| e.to_string())?;
    let names = m.frame.names();
    let verdict = match world {
        Some(w) => veltman::world_forces_logic(&m, world_index(names, w)?, &ids),
        None => veltman::model_forces_logic(&m, &ids),
    }
    .map_err(|e| e.to_string())?;
    let list: Vec<&str> = ids.iter().map(|i| i.name()).collect();
    let (text, witness) = match &verdict {
        Verdict::Holds => (format!("forced: {}\n", list.join(",")), Value::Null),
        Verdict::Fails(fi) => {
            let assignment: Vec<String> = fi.assignment.iter().map(|(m, s)| format!("{m}={}", set_names(*s, names))).collect();
            (
                format!("{}\n  under {}\n", fi.display(names), assignment.join(" ")),
                json!({ "schema": fi.schema.name(), "world": names[fi.world], "instance": fi.instance.to_string() }),
            )
        }
    };
    Ok(Report::new(verdict.holds(), text, json!({ "logic": list, "forced": verdict.holds(), "witness": witness })))
}

fn lift(input: &StructureArgs) -> Outcome {
    let doc = load(input)?;
    let m = doc.model().map_err(|e| e.to_string())?;
    let GenModel { frame, valuation } = genveltman::lift(&m).map_err(|e| e.to_string())?;
    let text = format::write_genframe(&frame, &valuation);
    Ok(Report::new(true, text.clone(), json!({ "structure": text })))
}

fn correspond(
    kind: Kind,
    max_worlds: usize,
    conditions: Option<&str>,
    seed: Option<u64>,
    samples: usize,
    workers: Option<usize>,
) -> Outcome {
    let ids: Vec<ConditionId> = match conditions {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| ConditionId::resolve(s, kind))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?,
        None => ConditionId::ALL.iter().copied().filter(|c| c.kind() == kind).collect(),
    };
    let mode = match seed {
        Some(seed) => SweepMode::Random { seed, count: samples },
        None => SweepMode::Exhaustive,
    };
    let report = correspond::sweep(kind, max_worlds, &ids, mode, workers).map_err(|e| e.to_string())?;
    let mut text = format!("{} structures={}\n", report.summary_line(), report.structures);
    if let Some(case) = &report.first_mismatch {
        let _ = writeln!(
            text,
            "first mismatch on {}: condition {} but schema oracle {}",
            case.condition, case.condition_holds, case.oracle_holds
        );
        text.push_str(&format::write_structure(&case.structure, &Default::default()));
    }
    let names: Vec<&str> = ids.iter().map(|c| c.name()).collect();
    let json = json!({
        "conditions": names,
        "structures": report.structures,
        "checked": report.checked,
        "mismatches": report.mismatches,
        "elapsed_ms": report.elapsed.as_millis() as u64,
    });
    Ok(Report::new(report.mismatches == 0, text, json))
}

struct SearchArgs<'a> {
    kind: SearchKind,
    max_worlds: usize,
    valid: Option<&'a str>,
    invalid: Option<&'a str>,
    logic: Option<&'a str>,
    target: Option<SchemaId>,
    options: SearchOptions,
}

fn outcome_name<T>(o: &SearchOutcome<T>) -> &'static str {
    match o {
        SearchOutcome::Found(_) => "found",
        SearchOutcome::BoundExhausted => "bound exhausted",
        SearchOutcome::BudgetExhausted => "budget exhausted",
    }
}

fn run_search(a: SearchArgs<'_>) -> Outcome {
    if a.kind == SearchKind::ModelLogic {
        let logic = parse_schema_list(a.logic.ok_or("model-logic search needs --logic")?).map_err(|e| e.to_string())?;
        let target = a.target.ok_or("model-logic search needs --target")?;
        let out = search::find_incompleteness_model(&logic, target, a.max_worlds, &a.options).map_err(|e| e.to_string())?;
        let status = outcome_name(&out);
        return Ok(match out {
            SearchOutcome::Found(m) => {
                let names = m.model.frame.names();
                let text = format!(
                    "{}# {}\n",
                    format::write_frame(&m.model.frame, &m.model.valuation),
                    m.failing.display(names)
                );
                let json = json!({
                    "outcome": status,
                    "structure": format::write_frame(&m.model.frame, &m.model.valuation),
                    "failing": { "world": names[m.failing.world], "instance": m.failing.instance.to_string() },
                });
                Report::new(true, text, json)
            }
            _ => Report::new(false, format!("# {status}\n"), json!({ "outcome": status })),
        });
    }
    let kind = if a.kind == SearchKind::Frame { Kind::Ordinary } else { Kind::Generalized };
    let resolve = |s: &str| Requirement::resolve(s.trim(), kind).map_err(|e| e.to_string());
    let valid = a
        .valid
        .map(|v| v.split(',').filter(|s| !s.trim().is_empty()).map(resolve).collect::<Result<Vec<_>, _>>())
        .transpose()?
        .unwrap_or_default();
    let invalid = a.invalid.map(resolve).transpose()?;
    let spec = SearchSpec {
        kind: a.kind,
        max_worlds: a.max_worlds,
        valid,
        invalid,
        logic: Vec::new(),
        target: None,
        options: a.options,
    };
    let out = search::find_separating_structure(&spec).map_err(|e| e.to_string())?;
    let status = outcome_name(&out);
    Ok(match out {
        SearchOutcome::Found(s) => {
            let text = format::write_structure(&s, &Default::default());
            let json = json!({ "outcome": status, "kind": s.kind().name(), "worlds": s.len(), "structure": text });
            Report::new(true, text, json)
        }
        _ => Report::new(false, format!("# {status}\n"), json!({ "outcome": status })),
    })
}

fn prove(file: &Path) -> Outcome {
    let d = hilbert::parse_derivation(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
    Ok(match hilbert::check_derivation(&d) {
        Ok(()) => {
            let last = d.conclusion().map(|f| f.to_string()).unwrap_or_default();
            let text = format!("ok: {} steps, concluding {last}\n", d.steps.len());
            Report::new(true, text, json!({ "ok": true, "steps": d.steps.len(), "conclusion": last }))
        }
        Err(r) => Report::new(
            false,
            format!("rejected at {r}\n"),
            json!({ "ok": false, "step": r.step, "reason": r.to_string() }),
        ),
    })
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { formula, schema } => parse(&formula, schema),
        Command::CheckModel { input, formula, world } => check_model(&input, &formula, world.as_deref()),
        Command::FrameValid { input, schema } => frame_valid(&input, schema),
        Command::Condition { input, name } => condition(&input, &name),
        Command::ForcesLogic { input, logic, world } => forces_logic(&input, &logic, world.as_deref()),
        Command::Lift { input } => lift(&input),
        Command::Correspond { kind, max_worlds, conditions, seed, samples, workers } => {
            correspond(kind, max_worlds, conditions.as_deref(), seed, samples, workers)
        }
        Command::Search { kind, max_worlds, valid, invalid, logic, target, max_seeds, seed, budget, workers } => {
            let budget = match budget {
                Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
                Some(s) => return Err(format!("invalid budget `{s}`")),
                None => None,
            };
            run_search(SearchArgs {
                kind,
                max_worlds,
                valid: valid.as_deref(),
                invalid: invalid.as_deref(),
                logic: logic.as_deref(),
                target,
                options: SearchOptions { max_seeds, budget, shuffle: seed, workers },
            })
        }
        Command::Prove { file } => prove(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match dispatch(cli.command) {
        Ok(r) => {
            if json {
                let mut obj = r.json;
                if let Value::Object(map) = &mut obj {
                    map.insert("exit".into(), json!(r.code));
                    map.insert("report".into(), json!(r.text));
                }
                println!("{obj}");
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "exit": 2, "error": e }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
