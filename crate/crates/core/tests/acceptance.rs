//! One check per acceptance criterion, each reporting a PASS or FAIL line.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ilvelt::correspond::{sweep, ConditionId, SweepMode};
use ilvelt::enumerate::{enumerate_structures, random_frame};
use ilvelt::format::{parse_document, Kind, Structure};
use ilvelt::genveltman::{self, geval, lift};
use ilvelt::hilbert::{self, check_derivation, Justification};
use ilvelt::search::{
    find_incompleteness_model, find_separating_structure, Requirement, SearchKind, SearchOptions,
    SearchOutcome, SearchSpec,
};
use ilvelt::veltman::{self, eval, Model};
use ilvelt::{Formula, GenFrame, SchemaId, WorldSet};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/frames/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn genframe(name: &str) -> GenFrame {
    match parse_document(&fixture(name), Some(Kind::Generalized)).unwrap().structure {
        Structure::Generalized(g) => g,
        Structure::Ordinary(_) => unreachable!(),
    }
}

fn f7_fixture() -> Check {
    let g = genframe("f7.frame");
    let m0 = genveltman::check_m0_condition(&g).map_err(|e| e.to_string())?;
    let p0 = genveltman::check_p0_condition(&g).map_err(|e| e.to_string())?;
    let r = genveltman::check_r_condition(&g).map_err(|e| e.to_string())?;
    ensure(m0.holds() && p0.holds(), || "M0 or P0 condition fails".into())?;
    let wit = r.witness().ok_or("R condition holds")?;
    let b0 = g.world("b0").unwrap();
    ensure(!wit.gamma.contains(b0), || "choice set witness contains b0".into())?;
    for (id, want) in [(SchemaId::M0, true), (SchemaId::P0, true), (SchemaId::R, false)] {
        let got = genveltman::genframe_valid(&g, id).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{id} validity is {got}"))?;
    }
    Ok("M0 and P0 hold, R fails with a choice set omitting b0; schema validity agrees".into())
}

fn correspondence() -> Check {
    let gen: Vec<ConditionId> = ConditionId::ALL.iter().copied().filter(|c| c.kind() == Kind::Generalized).collect();
    let ord: Vec<ConditionId> = ConditionId::ALL.iter().copied().filter(|c| c.kind() == Kind::Ordinary).collect();
    let runs = [
        (Kind::Generalized, 3, &gen, SweepMode::Exhaustive),
        (Kind::Ordinary, 4, &ord, SweepMode::Exhaustive),
        (Kind::Generalized, 5, &gen, SweepMode::Random { seed: 42, count: 500 }),
        (Kind::Ordinary, 6, &ord, SweepMode::Random { seed: 42, count: 500 }),
    ];
    let mut lines = Vec::new();
    for (kind, n, conds, mode) in runs {
        let rep = sweep(kind, n, conds, mode, None).map_err(|e| e.to_string())?;
        ensure(rep.mismatches == 0, || format!("{} n={n}: {}", kind.name(), rep.summary_line()))?;
        lines.push(format!("{} n={n} {}", kind.name(), rep.summary_line()));
    }
    let mut frames = 0;
    for s in enumerate_structures(Kind::Ordinary, 4) {
        let Structure::Ordinary(f) = s else { unreachable!() };
        let p0 = veltman::frame_valid_schema(&f, SchemaId::P0.schema()).unwrap().holds();
        let r = veltman::frame_valid_schema(&f, SchemaId::R.schema()).unwrap().holds();
        ensure(p0 == r, || "P0 and R validity differ on an ordinary frame".into())?;
        frames += 1;
    }
    lines.push(format!("P0/R agree on {frames} ordinary frames"));
    Ok(lines.join("; "))
}

fn separation() -> Check {
    let spec = SearchSpec {
        kind: SearchKind::GenFrame,
        max_worlds: 8,
        valid: vec![Requirement::Condition(ConditionId::P0Set)],
        invalid: Some(Requirement::Condition(ConditionId::M0Set)),
        logic: vec![],
        target: None,
        options: SearchOptions { budget: Some(Duration::from_secs(600)), ..Default::default() },
    };
    let out = find_separating_structure(&spec).map_err(|e| e.to_string())?;
    let SearchOutcome::Found(Structure::Generalized(g)) = out else {
        return Err(format!("no frame: {out:?}"));
    };
    ensure(g.validate().is_empty(), || "returned frame is invalid".into())?;
    ensure(genveltman::check_p0_condition(&g).unwrap().holds(), || "P0 fails".into())?;
    ensure(!genveltman::check_m0_condition(&g).unwrap().holds(), || "M0 holds".into())?;
    ensure(genveltman::genframe_valid(&g, SchemaId::P0).unwrap(), || "P0 schema invalid".into())?;
    ensure(!genveltman::genframe_valid(&g, SchemaId::M0).unwrap(), || "M0 schema valid".into())?;
    Ok(format!("{}-world frame with P0 but not M0", g.len()))
}

fn incompleteness() -> Check {
    let logic = [SchemaId::P0, SchemaId::Wstar];
    let opts = SearchOptions { budget: Some(Duration::from_secs(600)), ..Default::default() };
    let out = find_incompleteness_model(&logic, SchemaId::R, 8, &opts).map_err(|e| e.to_string())?;
    let SearchOutcome::Found(found) = out else {
        return Err(format!("no model: {out:?}"));
    };
    let m = &found.model;
    ensure(m.frame.validate().is_empty(), || "frame is invalid".into())?;
    for w in 0..m.frame.len() {
        let v = veltman::world_forces_logic(m, w, &logic).unwrap();
        ensure(v.holds(), || format!("world {} does not force the logic", m.frame.name(w)))?;
    }
    let fi = &found.failing;
    ensure(fi.schema == SchemaId::R, || "failing instance is not of R".into())?;
    ensure(!eval(m, fi.world, &fi.instance).unwrap(), || "reported R instance holds".into())?;
    let r = veltman::world_forces_logic(m, fi.world, &[SchemaId::R]).unwrap();
    ensure(!r.holds(), || "R is forced at the reported world".into())?;
    Ok(format!("{}-world model; {}", m.frame.len(), fi.display(m.frame.names())))
}

fn derivations() -> Check {
    let mut total = 0;
    let expected = [
        ("p0_from_r", SchemaId::P0),
        ("m0_from_r", SchemaId::M0),
        ("rstar_from_rw", SchemaId::Rstar),
        ("r_from_rstar", SchemaId::R),
        ("w_from_rstar", SchemaId::W),
    ];
    let pqr: BTreeMap<String, Formula> =
        [("A", "p"), ("B", "q"), ("C", "r")].iter().map(|(m, f)| (m.to_string(), Formula::parse(f).unwrap())).collect();
    for (name, _) in hilbert::FIXTURES {
        let d = hilbert::fixture(name).unwrap();
        check_derivation(&d).map_err(|r| format!("{name}: {r}"))?;
        if let Some((_, id)) = expected.iter().find(|(n, _)| *n == name) {
            let mut s = pqr.clone();
            s.retain(|m, _| id.schema().metavariables().contains(&m.as_str()));
            let want = id.schema().instantiate(&s).unwrap();
            ensure(d.conclusion() == Some(&want), || format!("{name} does not conclude {want}"))?;
        }
        let n = d.steps.len();
        for k in 0..n {
            let arity = match d.steps[k].justification {
                Justification::Mp(..) => 2,
                Justification::Nec(_) => 1,
                _ => 0,
            };
            for slot in 0..arity {
                for v in 0..=n + 1 {
                    let mut m = d.clone();
                    let idx = match &mut m.steps[k].justification {
                        Justification::Mp(i, j) => if slot == 0 { i } else { j },
                        Justification::Nec(i) => i,
                        _ => unreachable!(),
                    };
                    if *idx == v {
                        continue;
                    }
                    *idx = v;
                    match check_derivation(&m) {
                        Err(r) if r.step == k + 1 => total += 1,
                        other => return Err(format!("{name}: index {v} at step {} gave {other:?}", k + 1)),
                    }
                }
            }
        }
    }
    hilbert::check_equivalence_fixtures().map_err(|f| f.to_string())?;
    Ok(format!("{} fixtures accepted; {total} index mutations rejected at the mutated step", hilbert::FIXTURES.len()))
}

fn soundness() -> Check {
    let mut count = 0;
    for (kind, n) in [(Kind::Generalized, 3), (Kind::Ordinary, 4)] {
        for s in enumerate_structures(kind, n) {
            for id in SchemaId::IL {
                let valid = match &s {
                    Structure::Ordinary(f) => veltman::frame_valid_schema(f, id.schema()).unwrap().holds(),
                    Structure::Generalized(g) => genveltman::genframe_valid_schema(g, id.schema()).unwrap().holds(),
                };
                ensure(valid, || format!("{id} fails on a {} frame", kind.name()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{} IL schemata valid in {count} frame checks", SchemaId::IL.len()))
}

/// Every formula over `p`, `q` of depth at most `depth`.
fn formulas(depth: usize) -> Vec<Formula> {
    let mut all = vec![Formula::Bottom, Formula::atom("p"), Formula::atom("q")];
    for _ in 0..depth {
        let prev = all.clone();
        for a in &prev {
            all.push(Formula::boxed(a.clone()));
            for b in &prev {
                all.push(Formula::implies(a.clone(), b.clone()));
                all.push(Formula::rhd(a.clone(), b.clone()));
            }
        }
        all.sort();
        all.dedup();
    }
    all
}

fn lifting() -> Check {
    let shallow = formulas(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0usize;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let frame = random_frame(&mut rng, n);
        let mut valuation = BTreeMap::new();
        for p in ["p", "q"] {
            valuation.insert(p.to_string(), (0..n).filter(|_| rng.gen_bool(0.5)).collect::<WorldSet>());
        }
        let m = Model::new(frame, valuation).unwrap();
        let lifted = lift(&m).unwrap();
        // Depth-3 formulas are built from depth-2 ones, so one
        // representative per extension covers them all.
        let mut reps: HashMap<WorldSet, &Formula> = HashMap::new();
        for f in &shallow {
            let mut ext = WorldSet::EMPTY;
            for w in 0..n {
                let (a, b) = (eval(&m, w, f).unwrap(), geval(&lifted, w, f).unwrap());
                ensure(a == b, || format!("lift disagrees on {f}"))?;
                if a {
                    ext = ext.with(w);
                }
                checks += 1;
            }
            reps.entry(ext).or_insert(f);
        }
        let reps: Vec<&Formula> = reps.into_values().collect();
        for &a in &reps {
            let mut deep = vec![Formula::boxed(a.clone())];
            for &b in &reps {
                deep.push(Formula::implies(a.clone(), b.clone()));
                deep.push(Formula::rhd(a.clone(), b.clone()));
            }
            for f in &deep {
                for w in 0..n {
                    ensure(eval(&m, w, f).unwrap() == geval(&lifted, w, f).unwrap(), || format!("lift disagrees on {f}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("1000 models, {} formulas of depth <= 2 plus depth-3 compositions, {checks} world checks", shallow.len()))
}

fn not_w_oracle() -> Check {
    let g = genframe("g4.frame");
    let holds = genveltman::check_not_w(&g).unwrap().is_some();
    let w_valid = genveltman::genframe_valid(&g, SchemaId::W).unwrap();
    ensure(holds && !w_valid, || format!("G4: Not-W {holds}, W valid {w_valid}"))?;
    let rep = sweep(Kind::Generalized, 3, &[ConditionId::NotWSet], SweepMode::Exhaustive, None).map_err(|e| e.to_string())?;
    ensure(rep.mismatches == 0, || rep.summary_line())?;
    Ok(format!("G4 satisfies Not-W and refutes W; size <= 3: {}", rep.summary_line()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("F7 fixture", f7_fixture),
        ("correspondence sweeps", correspondence),
        ("P0 without M0", separation),
        ("incompleteness model", incompleteness),
        ("derivation fixtures", derivations),
        ("IL soundness", soundness),
        ("lifting", lifting),
        ("Not-W oracle", not_w_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("PASS criterion {} ({name}, {secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}, {secs:.2}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
