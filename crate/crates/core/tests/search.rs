use std::time::Duration;

use ilvelt::correspond::ConditionId;
use ilvelt::enumerate::enumerate_structures;
use ilvelt::format::{Kind, Structure};
use ilvelt::genveltman;
use ilvelt::search::{
    find_incompleteness_model, find_separating_structure, Requirement, SearchKind, SearchOptions, SearchOutcome,
    SearchSpec,
};
use ilvelt::SchemaId;

fn gen_spec(max_worlds: usize, valid: &[ConditionId], invalid: ConditionId) -> SearchSpec {
    SearchSpec {
        kind: SearchKind::GenFrame,
        max_worlds,
        valid: valid.iter().map(|&c| Requirement::Condition(c)).collect(),
        invalid: Some(Requirement::Condition(invalid)),
        logic: vec![],
        target: None,
        options: SearchOptions::default(),
    }
}

#[test]
fn m0_and_p0_without_r_within_seven_worlds() {
    let spec = gen_spec(7, &[ConditionId::M0Set, ConditionId::P0Set], ConditionId::RSet);
    let Some(Structure::Generalized(g)) = find_separating_structure(&spec).unwrap().found() else {
        panic!("no frame")
    };
    assert!(g.len() <= 7);
    assert!(genveltman::genframe_valid(&g, SchemaId::M0).unwrap());
    assert!(genveltman::genframe_valid(&g, SchemaId::P0).unwrap());
    assert!(!genveltman::genframe_valid(&g, SchemaId::R).unwrap());
}

#[test]
fn single_world_refutes_nothing() {
    let spec = gen_spec(1, &[], ConditionId::RSet);
    assert_eq!(find_separating_structure(&spec).unwrap(), SearchOutcome::BoundExhausted);
}

#[test]
fn result_does_not_depend_on_worker_count() {
    let mut spec = gen_spec(6, &[ConditionId::P0Set], ConditionId::M0Set);
    spec.options.workers = Some(1);
    let one = find_separating_structure(&spec).unwrap();
    spec.options.workers = Some(3);
    assert_eq!(find_separating_structure(&spec).unwrap(), one);
    spec.options.shuffle = Some(11);
    let shuffled = find_separating_structure(&spec).unwrap();
    spec.options.workers = Some(1);
    assert_eq!(find_separating_structure(&spec).unwrap(), shuffled);
}

#[test]
fn search_agrees_with_exhaustive_enumeration_on_small_frames() {
    // Separation specs whose least witness has at most three worlds are
    // found by both the seeded search and a plain scan.
    for (valid, invalid) in [
        (vec![], ConditionId::NotWSet),
        (vec![ConditionId::M0Set], ConditionId::NotWSet),
        (vec![], ConditionId::RSet),
    ] {
        let plain = enumerate_structures(Kind::Generalized, 3).find(|s| {
            let Structure::Generalized(g) = s else { unreachable!() };
            valid.iter().all(|&c| genveltman::genframe_valid(g, c.schema()).unwrap() != (c == ConditionId::NotWSet))
                && genveltman::genframe_valid(g, invalid.schema()).unwrap() == (invalid == ConditionId::NotWSet)
        });
        let found = find_separating_structure(&gen_spec(3, &valid, invalid)).unwrap().found();
        assert_eq!(found.is_some(), plain.is_some(), "{valid:?} / {invalid}");
    }
}

#[test]
fn schema_requirements_work_on_ordinary_frames() {
    let spec = SearchSpec {
        kind: SearchKind::Frame,
        max_worlds: 4,
        valid: vec![],
        invalid: Some(Requirement::resolve("W", Kind::Ordinary).unwrap()),
        logic: vec![],
        target: None,
        options: SearchOptions::default(),
    };
    // A loop x R y S_w x already refutes W.
    let Some(Structure::Ordinary(f)) = find_separating_structure(&spec).unwrap().found() else { panic!() };
    assert_eq!(f.len(), 3);
    assert!(!ilvelt::veltman::frame_valid_schema(&f, SchemaId::W.schema()).unwrap().holds());
    let spec = SearchSpec { max_worlds: 2, ..spec };
    assert_eq!(find_separating_structure(&spec).unwrap(), SearchOutcome::BoundExhausted);
}

#[test]
fn incompleteness_bounds() {
    let opts = SearchOptions::default();
    let logic = [SchemaId::P0, SchemaId::Wstar];
    assert_eq!(find_incompleteness_model(&logic, SchemaId::R, 2, &opts).unwrap(), SearchOutcome::BoundExhausted);
    assert!(find_incompleteness_model(&[SchemaId::L1], SchemaId::L1, 3, &opts).is_err());
    let tight = SearchOptions { budget: Some(Duration::ZERO), ..Default::default() };
    assert_eq!(find_incompleteness_model(&logic, SchemaId::R, 8, &tight).unwrap(), SearchOutcome::BudgetExhausted);
}
