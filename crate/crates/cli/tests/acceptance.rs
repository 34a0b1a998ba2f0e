//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (written to stdout directly so it shows without --nocapture).

use std::io::Write;

use serde_json::Value;
use subext::{bundled, run_scenario, RunOptions, ScenarioResult, Status};

fn run(name: &str) -> ScenarioResult {
    run_scenario(&bundled(), name, RunOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn why(r: &ScenarioResult) -> String {
    let bad: Vec<String> = r
        .failures()
        .take(3)
        .map(|i| format!("{} {:?} {}", i.ring, i.inputs, i.error.clone().unwrap_or_default()))
        .collect();
    format!("{} status={:?} {}ms [{}]", r.scenario, r.status, r.wall_time_ms, bad.join("; "))
}

fn line(n: u8, title: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let text = format!("acceptance {n:02} {title:<40} {verdict}  {detail}\n");
    let _ = std::io::stdout().write_all(text.as_bytes());
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
}

/// All scenarios pass.
fn criterion(n: u8, title: &str, names: &[&str]) {
    let rs: Vec<ScenarioResult> = names.iter().map(|s| run(s)).collect();
    let ok = rs.iter().all(|r| r.status == Status::Pass && r.pass && !r.instances.is_empty());
    let detail: Vec<String> = rs.iter().map(why).collect();
    line(n, title, ok, &detail.join(" | "));
}

fn int(v: Option<&Value>) -> u64 {
    v.and_then(Value::as_u64).unwrap_or(0)
}

#[test]
fn c01_dvr_mu() {
    criterion(1, "dvr-mu", &["dvr-mu"]);
}

#[test]
fn c02_cycquot() {
    criterion(2, "cycquot", &["cycquot"]);
}

#[test]
fn c03_regular_vs_depth_one() {
    criterion(3, "regu-d1 vs reg-depth1", &["regu-d1", "reg-depth1"]);
}

#[test]
fn c04_mr_minmult() {
    criterion(4, "mr-minmult", &["mr-minmult"]);
}

#[test]
fn c05_artincan_mintype() {
    criterion(5, "artincan + mintype-muadd", &["artincan", "mintype-muadd"]);
}

#[test]
fn c06_cano_d1() {
    criterion(6, "cano-d1", &["cano-d1"]);
}

#[test]
fn c07_injd_d1() {
    criterion(7, "injd-d1", &["injd-d1"]);
}

#[test]
fn c08_ulrich_subfunctor() {
    criterion(8, "prop1-ulrich + uladd + uliso", &["prop1-ulrich", "uladd", "uliso"]);
}

#[test]
fn c09_trset_jane() {
    criterion(9, "trset + jane", &["trset", "jane"]);
}

#[test]
fn c10_projgor_algor() {
    let p = run("projgor");
    let a = run("algor");
    let gor = ["E2", "E3"].iter().all(|l| {
        p.instances
            .iter()
            .filter(|i| i.ring == *l && i.inputs.get("I").map(String::as_str) == Some("m"))
            .any(|i| i.values.get("blowup_gorenstein") == Some(&Value::Bool(true)))
    });
    let ok = p.status == Status::Pass && a.status == Status::Pass && gor;
    line(10, "projgor + algor", ok, &format!("B(m) Gorenstein on E2, E3: {gor} | {} | {}", why(&p), why(&a)));
}

#[test]
fn c11_trk_depth() {
    criterion(11, "trk-depth", &["trk-depth"]);
}

#[test]
fn c12_loewy() {
    criterion(12, "loewy", &["loewy"]);
}

#[test]
fn c13_axioms_and_negative_control() {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["axioms-mu", "axioms-nu", "axioms-ul"] {
        let r = run(name);
        let total = r.instances.iter().find(|i| i.ring == "all").map_or(0, |i| int(i.values.get("checks")));
        let viol: u64 = r.instances.iter().map(|i| int(i.values.get("violations"))).sum();
        ok &= r.status == Status::Pass && total >= 200 && viol == 0;
        detail.push(format!("{name}: {total} checks, {viol} violations"));
    }
    let neg = run("axioms-mu-negative-control");
    let viol: u64 = neg.instances.iter().map(|i| int(i.values.get("violations"))).sum();
    ok &= neg.status == Status::Fail && viol >= 1;
    detail.push(format!("negative control: status {:?}, {viol} violations", neg.status));
    line(13, "axioms-* and negative control", ok, &detail.join(", "));
}

#[test]
fn c14_halfexact_tony_et() {
    criterion(14, "halfexact + tony-et", &["halfexact", "tony-et"]);
}

#[test]
fn c15_engine_laws() {
    criterion(15, "engine self-consistency", &["engine-laws"]);
}
