use std::path::PathBuf;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_ilvelt");

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn path(rel: &str) -> String {
    let p = if let Some(rest) = rel.strip_prefix("core/") {
        root().join("../core").join(rest)
    } else {
        root().join("tests").join(rel)
    };
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> =
        args.iter().map(|a| if a.starts_with("core/") || a.starts_with("data/") { path(a) } else { a.to_string() }).collect();
    let out = Command::new(BIN).args(&args).env_remove("ILVELT_BUDGET_SECS").output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const F7: &str = "core/fixtures/frames/f7.frame";
const G4: &str = "core/fixtures/frames/g4.frame";
const FORK: &str = "core/fixtures/frames/fork.frame";

/// Invocations with their exit codes; the report text is compared with
/// `tests/golden/<name>.txt`. Set `UPDATE_GOLDEN=1` to rewrite them.
const CASES: &[(&str, &[&str], i32)] = &[
    ("condition_f7_r", &["condition", F7, "--name", "R"], 1),
    ("condition_f7_m0", &["condition", F7, "--name", "M0"], 0),
    ("condition_f7_p0", &["condition", F7, "--name", "P0"], 0),
    ("condition_f7_notw", &["condition", F7, "--name", "NotW"], 1),
    ("condition_g4_notw", &["condition", G4, "--kind", "gen", "--name", "NotW"], 0),
    ("condition_fork_r", &["condition", FORK, "--name", "R"], 0),
    ("frame_valid_f7_r", &["frame-valid", F7, "--schema", "R"], 1),
    ("frame_valid_g4_w", &["frame-valid", G4, "--kind", "gen", "--schema", "W"], 1),
    ("frame_valid_fork_j5", &["frame-valid", FORK, "--schema", "J5"], 0),
    ("parse_rhd", &["parse", "p |> q"], 0),
    ("parse_sugar", &["parse", "<>p & ~q | (p <-> q)"], 0),
    ("parse_schema", &["parse", "--schema", "A |> B -> <>A & []C |> B & []C"], 0),
    ("check_model_fork", &["check-model", FORK, "--formula", "p |> q"], 0),
    ("check_model_fork_box", &["check-model", FORK, "--formula", "[]q", "--world", "r"], 1),
    ("forces_fork", &["forces-logic", FORK, "--logic", "P0,Wstar,R"], 0),
    ("lift_fork", &["lift", FORK], 0),
    ("prove_p0", &["prove", "core/fixtures/proofs/p0_from_r.proof"], 0),
    ("prove_m0", &["prove", "core/fixtures/proofs/m0_from_r.proof"], 0),
    ("prove_rstar", &["prove", "core/fixtures/proofs/rstar_from_rw.proof"], 0),
    ("prove_r", &["prove", "core/fixtures/proofs/r_from_rstar.proof"], 0),
    ("prove_top", &["prove", "core/fixtures/proofs/top_from_rstar.proof"], 0),
    ("prove_w", &["prove", "core/fixtures/proofs/w_from_rstar.proof"], 0),
    ("prove_broken", &["prove", "data/broken.proof"], 1),
    ("correspond_gen3", &["correspond", "--kind", "gen", "--max-worlds", "3"], 0),
    ("search_p0_m0", &["search", "--kind", "genframe", "--valid", "P0", "--invalid", "M0", "--max-worlds", "8"], 0),
    ("search_model_2", &["search", "--kind", "model-logic", "--logic", "P0,Wstar", "--target", "R", "--max-worlds", "2"], 1),
];

#[test]
fn golden_reports_and_exit_codes() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args, code) in CASES {
        let (got, stdout, stderr) = run(args);
        assert_eq!(got, *code, "{name}: exit {got}\n{stdout}{stderr}");
        let golden = root().join("tests/golden").join(format!("{name}.txt"));
        if update {
            std::fs::write(&golden, &stdout).unwrap();
        } else {
            let want = std::fs::read_to_string(&golden).unwrap_or_else(|e| panic!("{}: {e}", golden.display()));
            assert_eq!(stdout, want, "{name}");
        }
    }
}

#[test]
fn f7_r_witness_is_the_least_choice_set() {
    let (code, out, _) = run(&["condition", F7, "--name", "R"]);
    assert_eq!(code, 1);
    assert!(out.contains("Γ={y, b1}"), "{out}");
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["condition", "data/missing.frame", "--name", "R"][..],
        &["condition", "data/bad.frame", "--name", "R"],
        &["condition", F7, "--name", "Q"],
        &["condition", FORK, "--name", "M0"],
        &["parse", "p |>"],
        &["frobnicate"],
        &["parse", "p", "--bogus"],
        &["search", "--kind", "model-logic", "--target", "R"],
        &["search", "--kind", "genframe", "--valid", "R", "--invalid", "R"],
        &["forces-logic", G4, "--kind", "gen", "--logic", "P0"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {out}{err}");
    }
    let (_, _, err) = run(&["condition", "data/bad.frame", "--name", "R"]);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn json_reports_parse() {
    let (code, out, _) = run(&["--json", "condition", F7, "--name", "R"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["exit"], 1);
    assert!(v["witness"].as_str().unwrap().contains("b1"));
    let (code, out, _) = run(&["--json", "parse", "p |>"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!(v["error"].is_string());
}

#[test]
fn search_output_reads_back_as_a_frame() {
    let (code, out, _) = run(&["search", "--kind", "genframe", "--valid", "P0", "--invalid", "M0", "--workers", "2"]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("ilvelt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("found.frame");
    std::fs::write(&file, &out).unwrap();
    let f = file.to_string_lossy().into_owned();
    assert_eq!(run(&["condition", &f, "--kind", "gen", "--name", "P0"]).0, 0);
    assert_eq!(run(&["condition", &f, "--kind", "gen", "--name", "M0"]).0, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn budget_comes_from_the_environment() {
    let out = Command::new(BIN)
        .args(["search", "--kind", "model-logic", "--logic", "P0,Wstar", "--target", "R"])
        .env("ILVELT_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "# budget exhausted\n");
}
