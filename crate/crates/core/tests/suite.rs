use envelope::suite::{
    cross_oracle, repair, run_mutations, run_suite, Evaluator, Registry, RepairOutcome, RunOptions, Status, SuiteError,
};

fn quiet() -> RunOptions {
    RunOptions { timings: false, repair: true, oracle: false }
}

#[test]
fn bracket_table_passes_in_full() {
    let r = run_suite(Registry::builtin(), "sec3.table", &quiet()).unwrap();
    assert_eq!(r.checks.len(), 28);
    assert_eq!(r.counts["PASS"], 28);
    assert!(!r.has_fail());
}

#[test]
fn groups_expected_to_pass_do() {
    for g in ["sec3.casimirs", "sec4.cubic"] {
        let r = run_suite(Registry::builtin(), g, &quiet()).unwrap();
        assert!(!r.has_fail(), "{}", r.to_text());
    }
}

#[test]
fn unknown_group_is_a_driver_error() {
    match run_suite(Registry::builtin(), "nonsense", &quiet()) {
        Err(SuiteError::UnknownGroup { valid, .. }) => assert!(valid.iter().any(|g| g == "sec5")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn reports_are_deterministic() {
    let a = run_suite(Registry::builtin(), "sec4.ybasis", &quiet()).unwrap();
    let b = run_suite(Registry::builtin(), "sec4.ybasis", &quiet()).unwrap();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn json_carries_the_documented_fields() {
    let r = run_suite(Registry::builtin(), "sec3.ladder", &quiet()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let first = &v["checks"][0];
    for key in ["id", "status", "residual", "anchor", "millis"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn ladder_sign_is_diagnosed() {
    let r = run_suite(Registry::builtin(), "sec3.ladder", &quiet()).unwrap();
    let cp = r.get("sec3.ladder.Cp-H").unwrap();
    assert_eq!(cp.status, Status::Fail);
    assert!(cp.variants.iter().any(|v| v.label == "+2C" && v.holds));
    assert!(matches!(cp.repair, Some(RepairOutcome::Candidate { single: true, .. })));
    assert_eq!(r.get("sec3.ladder.Cm-H").unwrap().status, Status::Pass);
}

#[test]
fn thirteenth_coefficient_is_not_a_twelfth() {
    // The 1/12 guess leaves a residual too, and no coefficient in the basis
    // repairs the printed relation.
    let reg = Registry::builtin();
    let ev = Evaluator::new();
    let check = reg.check("sec4.reduction.T121-alpha").unwrap();
    let r = run_suite(reg, "sec4.reduction", &quiet()).unwrap();
    let res = r.get(&check.id).unwrap();
    assert_eq!(res.status, Status::Fail);
    let twelfth = res.variants.iter().find(|v| v.label.contains("1/12")).unwrap();
    assert!(!twelfth.holds);
    assert!(matches!(repair(&ev, check).unwrap(), RepairOutcome::NoCandidate { .. }));
}

#[test]
fn repair_refuses_a_passing_check() {
    let reg = Registry::builtin();
    let ev = Evaluator::new();
    let check = reg.check("sec3.table.X5-X6").unwrap();
    assert!(matches!(repair(&ev, check), Err(SuiteError::NotFailing(_))));
}

#[test]
fn contraction_tension_is_resolved() {
    let r = run_suite(Registry::builtin(), "sec5", &quiet()).unwrap();
    assert_eq!(r.get("sec5.T13").unwrap().status, Status::Pass);
    assert_eq!(r.get("sec5.T12-T13").unwrap().status, Status::Fail);
}

#[test]
fn oracle_agrees_on_a_casimir_and_a_misprint() {
    let reg = Registry::builtin();
    let ev = Evaluator::new();
    let pass = reg.check("sec3.casimirs.C3-X5").unwrap();
    let v = cross_oracle(&ev, pass, &Status::Pass, 5).unwrap();
    assert!(v.confirms && v.nonzero == 0);
    let fail = reg.check("appA.T122-T12").unwrap();
    let v = cross_oracle(&ev, fail, &Status::Fail, 5).unwrap();
    assert!(v.confirms && v.nonzero > 0);
    let classical = reg.check("sec2.classical.tc121").unwrap();
    assert!(matches!(cross_oracle(&ev, classical, &Status::Pass, 5), Err(SuiteError::NoOracle(_))));
}

#[test]
fn every_mutation_is_caught() {
    let out = run_mutations(Registry::builtin(), 3).unwrap();
    assert!(out.len() >= 10);
    for m in out {
        assert!(m.pbw && m.oracle, "{m:?}");
    }
}

#[test]
fn registry_round_trips_through_toml() {
    let reg = Registry::builtin();
    let text = reg.to_toml();
    let again = Registry::parse(&text).unwrap();
    assert_eq!(&again, reg);
    assert_eq!(again.to_toml(), text);
}
