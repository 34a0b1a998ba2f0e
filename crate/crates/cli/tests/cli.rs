use subext::compute::{run, Command};
use subext::{bundled, parse_workspace, run_scenario, scenario_names, RunOptions, ScenarioResult, Status, WorkspaceError};
use subext_core::ext::ENUM_BUDGET;

#[test]
fn bundled_workspace_parses() {
    let ws = bundled();
    for l in ["D2", "D3", "D5", "E2", "E3", "E25", "A2", "A3"] {
        assert!(ws.rings.contains_key(l), "{l}");
    }
}

#[test]
fn parse_error_has_position() {
    let text = "ring D2 { family=dvr p=2 }\nmodule M { ring=D2 kind=nonsense }\n";
    match parse_workspace(text) {
        Err(WorkspaceError::Parse(e)) => {
            assert_eq!(e.line, 2);
            assert!(e.col > 1);
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let e = parse_workspace("ring X { family=dvr p=2 \n").unwrap_err();
    assert_eq!(e.code(), "ParseError");
}

#[test]
fn duplicate_labels_rejected() {
    let text = "ring D2 { family=dvr p=2 }\nring D2 { family=dvr p=3 }\n";
    let e = parse_workspace(text).unwrap_err();
    assert!(matches!(e, WorkspaceError::Duplicate { line: 2, .. }));
    assert_eq!(e.code(), "DuplicateLabel");
}

#[test]
fn non_numerical_semigroup() {
    let e = parse_workspace("ring S { family=semigroup p=2 gens=[2,4] }\n").unwrap_err();
    assert_eq!(e.code(), "BadSemigroup");
}

#[test]
fn unknown_scenario() {
    assert!(run_scenario(&bundled(), "no-such-thing", RunOptions::default()).is_err());
    assert!(scenario_names().contains(&"dvr-mu"));
}

#[test]
fn report_round_trip_and_determinism() {
    let ws = bundled();
    let opts = RunOptions { seed: 7, budget: ENUM_BUDGET };
    let a = run_scenario(&ws, "regu-d1", opts).unwrap();
    let b = run_scenario(&ws, "regu-d1", opts).unwrap();
    assert_eq!(a.status, Status::Pass);
    assert_eq!(a.to_json_timeless(), b.to_json_timeless());
    let back = ScenarioResult::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn compute_ring_info() {
    let ws = bundled();
    let v = run(&ws, &Command::RingInfo { ring: "E3".into() }, ENUM_BUDGET).unwrap();
    assert_eq!(v["multiplicity"], 3);
    assert_eq!(v["embdim"], 3);
    assert_eq!(v["type"], 2);
    assert_eq!(v["semigroup"]["conductor"], 3);
}

#[test]
fn compute_ext_sub_mu() {
    let ws = bundled();
    let cmd = Command::ExtSub {
        m: "D2.q2".into(),
        n: "D2.q2".into(),
        phis: vec!["mu".into()],
        list: true,
    };
    let v = run(&ws, &cmd, ENUM_BUDGET).unwrap();
    // Ext¹(R/t², R/t²) ≅ R/t², whose m-multiple has 2 elements
    assert_eq!(v["total_classes"], 4);
    assert_eq!(v["sub_classes"], 2);
    assert_eq!(v["span"]["closed"], true);
}

#[test]
fn compute_error_codes() {
    let ws = bundled();
    let code = |cmd: Command| run(&ws, &cmd, ENUM_BUDGET).unwrap_err().code;
    assert_eq!(code(Command::RingInfo { ring: "nope".into() }), "UnknownLabel");
    assert_eq!(code(Command::Ext { m: "D2.k".into(), n: "E2.k".into() }), "RingMismatch");
    let bad_phi = Command::ExtSub {
        m: "D2.k".into(),
        n: "D2.k".into(),
        phis: vec!["zeta".into()],
        list: false,
    };
    assert_eq!(code(bad_phi), "ParseError");
    let torsion = Command::ExtUl {
        m: "E2.k".into(),
        n: "E2.k".into(),
        ideal: "m".into(),
        s: 1,
    };
    assert_eq!(code(torsion), "NotUlrich");
    let e = run(&ws, &Command::RingInfo { ring: "nope".into() }, ENUM_BUDGET).unwrap_err();
    assert_eq!(e.to_json()["error"]["code"], "UnknownLabel");
}

#[test]
fn middle_of_zero_class_splits() {
    let ws = bundled();
    let cmd = Command::Middle {
        m: "D2.k".into(),
        n: "D2.k".into(),
        class: vec!["0".into()],
    };
    let v = run(&ws, &cmd, ENUM_BUDGET).unwrap();
    assert_eq!(v["zero"], true);
    assert_eq!(v["split"], true);
    let cmd = Command::Middle {
        m: "D2.k".into(),
        n: "D2.k".into(),
        class: vec!["1".into()],
    };
    let v = run(&ws, &cmd, ENUM_BUDGET).unwrap();
    assert_eq!(v["split"], false);
    assert_eq!(v["middle"]["length"], 2);
}
