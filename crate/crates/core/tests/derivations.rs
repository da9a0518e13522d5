use std::collections::BTreeMap;

use ilvelt::enumerate::enumerate_structures;
use ilvelt::format::{Kind, Structure};
use ilvelt::hilbert::{
    check_derivation, check_fixtures, fixture, parse_derivation, write_derivation, Derivation, Reason, EQUIVALENCE,
    FIXTURES,
};
use ilvelt::veltman::{frame_valid_schema, Frame, Model};
use ilvelt::{SchemaId, WorldSet};

fn all_fixtures() -> Vec<(&'static str, Derivation)> {
    FIXTURES.iter().map(|(n, _)| (*n, fixture(n).unwrap())).collect()
}

fn valid_on(frame: &Frame, f: &ilvelt::Formula) -> bool {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let n = frame.len();
    let subsets = WorldSet::full(n).subsets();
    let mut idx = vec![0usize; atoms.len()];
    loop {
        let val: BTreeMap<String, WorldSet> = atoms.iter().cloned().zip(idx.iter().map(|&i| subsets[i])).collect();
        let m = Model::new(frame.clone(), val).unwrap();
        if m.extension(f).unwrap() != WorldSet::full(n) {
            return false;
        }
        let Some(k) = (0..idx.len()).find(|&k| idx[k] + 1 < subsets.len()) else { return true };
        idx[k] += 1;
        for i in idx.iter_mut().take(k) {
            *i = 0;
        }
    }
}

#[test]
fn derived_formulas_hold_on_frames_of_the_logic() {
    let frames: Vec<Frame> = enumerate_structures(Kind::Ordinary, 3)
        .map(|s| match s {
            Structure::Ordinary(f) => f,
            Structure::Generalized(_) => unreachable!(),
        })
        .collect();
    for (name, d) in all_fixtures() {
        let fitting: Vec<&Frame> = frames
            .iter()
            .filter(|f| d.logic.iter().all(|id| frame_valid_schema(f, id.schema()).unwrap().holds()))
            .collect();
        assert!(!fitting.is_empty());
        for (k, step) in d.steps.iter().enumerate() {
            for f in &fitting {
                assert!(valid_on(f, &step.formula), "{name} step {} fails on a frame of its logic", k + 1);
            }
        }
    }
}

#[test]
fn prefixes_of_accepted_derivations_are_accepted() {
    for (name, d) in all_fixtures() {
        for n in 1..=d.steps.len() {
            assert_eq!(check_derivation(&d.prefix(n)), Ok(()), "{name} prefix {n}");
        }
    }
}

#[test]
fn fixtures_survive_a_print_and_parse_round_trip() {
    for (name, d) in all_fixtures() {
        let back = parse_derivation(&write_derivation(&d)).unwrap();
        assert_eq!(back, d, "{name}");
        assert_eq!(check_derivation(&back), Ok(()), "{name}");
    }
}

#[test]
fn without_rstar_the_first_inclusion_fixture_fails() {
    let ds: Vec<(&str, Derivation)> = EQUIVALENCE
        .iter()
        .map(|&n| {
            let mut d = fixture(n).unwrap();
            d.logic.retain(|id| *id != SchemaId::Rstar);
            (n, d)
        })
        .collect();
    let fail = check_fixtures(ds.iter().map(|(n, d)| (*n, d))).unwrap_err();
    assert_eq!(fail.name, "r_from_rstar");
    assert_eq!(fail.rejection.step, 1);
    assert_eq!(fail.rejection.reason, Reason::NotInLogic(SchemaId::Rstar));
}

#[test]
fn modal_theorem_is_not_a_tautology() {
    let text = "logic:\n1. <>p & []r -> ~(p |> ~r) ; taut\n";
    let r = check_derivation(&parse_derivation(text).unwrap()).unwrap_err();
    assert_eq!((r.step, r.reason), (1, Reason::NotATautology));
}

#[test]
fn wrong_substitution_reports_the_expected_instance() {
    let text = "logic: R\n1. p |> q -> ~(p |> ~r) |> q & []q ; ax R [A:=p, B:=q, C:=r]\n";
    let r = check_derivation(&parse_derivation(text).unwrap()).unwrap_err();
    let Reason::NotAnInstance { expected } = r.reason else { panic!("{r}") };
    assert_eq!(expected.to_string(), "p |> q -> ~(p |> ~r) |> q & []r");
}
