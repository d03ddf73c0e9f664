use std::collections::BTreeSet;

use ramsey_core::algebra::{parse_value, TowerElem};
use ramsey_core::certs::{builtin_bundle, builtin_ids, builtin_source, load_certificate, verify_in_order};
use ramsey_core::deduction::{
    check_certificate, check_certificate_with, premise_closure, CheckOptions, CheckOutcome, LemmaExport, Registry,
    Signature,
};
use ramsey_core::geometry::{orbit_of, Locus, Point3, RotationGroup};
use ramsey_core::report::emit_report;
use serde_json::{json, Value};

fn verify_all(options: &CheckOptions) -> Vec<CheckOutcome> {
    verify_in_order(&builtin_bundle(), &mut Registry::new(), options)
}

fn verified_ids(outcomes: &[CheckOutcome]) -> BTreeSet<String> {
    outcomes.iter().filter(|o| o.report.is_verified()).map(|o| o.report.id.clone()).collect()
}

fn closure_names(o: &CheckOutcome, name: &str) -> BTreeSet<String> {
    let i = o.facts.iter().position(|f| f.name == name).unwrap();
    premise_closure(&o.facts, i).into_iter().map(|j| o.facts[j].name.clone()).collect()
}

fn names(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[test]
fn premise_closures_match_the_hand_derivations() {
    let outcomes = verify_all(&CheckOptions::default());
    let get = |id: &str| outcomes.iter().find(|o| o.report.id == id).unwrap();
    let l52 = get("l52");
    assert_eq!(closure_names(l52, "S1"), names(&["A"]));
    assert_eq!(closure_names(l52, "S4"), names(&["B"]));
    assert_eq!(closure_names(l52, "C"), names(&["A", "B", "S1", "S2", "S3", "S4", "P5"]));
    let thm = get("thm_l5");
    assert_eq!(closure_names(thm, "C"), names(&["A", "S1", "S2", "S3", "S4", "P3"]));
    let disk = get("disk");
    assert_eq!(closure_names(disk, "C"), names(&["D", "A"]));
    assert_eq!(closure_names(disk, "E"), names(&["D", "A", "C", "Q5"]));
    let l63 = get("l63");
    assert_eq!(closure_names(l63, "W"), names(&["A", "B", "S1", "S2", "S3", "S4", "C"]));
    // every premise precedes the fact it supports
    for o in &outcomes {
        for (i, f) in o.facts.iter().enumerate() {
            assert!(f.premises.iter().all(|&j| j < i), "{} {}", o.report.id, f.name);
        }
    }
}

#[test]
fn granting_more_forbidden_distances_never_breaks_a_proof() {
    let base = verify_all(&CheckOptions::default());
    let extra = CheckOptions {
        extra_forbidden: vec![parse_value("sqrt(5)").unwrap(), TowerElem::from_int(10)],
        ..CheckOptions::default()
    };
    let more = verify_all(&extra);
    assert_eq!(verified_ids(&base).len(), 10);
    assert_eq!(verified_ids(&more), verified_ids(&base));
    for (a, b) in base.iter().zip(&more) {
        assert_eq!(a.export, b.export);
    }
}

#[test]
fn checking_is_deterministic() {
    let a: Vec<String> = verify_all(&CheckOptions::default()).iter().map(|o| emit_report(&o.report, true)).collect();
    let b: Vec<String> = verify_all(&CheckOptions::default()).iter().map(|o| emit_report(&o.report, true)).collect();
    assert_eq!(a, b);
}

#[test]
fn exports_are_released_only_after_verification() {
    let mut registry = Registry::new();
    let certs = builtin_bundle();
    let l62 = certs.iter().find(|c| c.id == "l62").unwrap();
    let early = check_certificate(l62, &registry);
    assert!(!early.report.is_verified());
    assert!(early.export.is_none());
    assert!(!registry.admit(&early));
    assert!(registry.is_empty());

    for o in verify_in_order(&certs, &mut registry, &CheckOptions::default()) {
        assert!(o.report.is_verified());
        assert_eq!(registry.export(&o.report.id), o.export.as_ref());
    }
    assert_eq!(registry.len(), 10);
    assert_eq!(registry.export("thm_l6"), Some(&LemmaExport::BlueApExists { k: 6, requires: Signature::Base }));
    assert_eq!(
        registry.export("disk"),
        Some(&LemmaExport::NoBlueDisk { radius: parse_value("sqrt(3)").unwrap(), requires: Signature::NoBlueAp(6) })
    );
}

fn without(id: &str) -> (BTreeSet<String>, BTreeSet<String>) {
    let certs: Vec<_> = builtin_bundle().into_iter().filter(|c| c.id != id).collect();
    let outcomes = verify_in_order(&certs, &mut Registry::new(), &CheckOptions::default());
    let ok = verified_ids(&outcomes);
    let failed = outcomes.iter().map(|o| o.report.id.clone()).filter(|i| !ok.contains(i)).collect();
    (ok, failed)
}

#[test]
fn removing_a_lemma_fails_only_its_dependents() {
    let (ok, failed) = without("thm_l5");
    assert_eq!(failed, names(&["thm_l6"]));
    assert_eq!(ok.len(), 8);

    let (ok, failed) = without("disk");
    assert_eq!(failed, names(&["l62", "l63", "l64", "r3_fig8a", "r3_pattern", "thm_l6"]));
    assert_eq!(ok, names(&["l52", "l5r7", "thm_l5"]));

    let (ok, failed) = without("l52");
    assert_eq!(failed, names(&["thm_l5", "thm_l6"]));
    assert!(ok.contains("r3_pattern"));
}

#[test]
fn loading_then_serializing_gives_the_same_document() {
    for id in builtin_ids() {
        let text = builtin_source(id).unwrap();
        let cert = load_certificate(text).unwrap();
        let original: Value = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_value(&cert).unwrap(), original, "{id}");
        let again = load_certificate(&serde_json::to_string(&cert).unwrap()).unwrap();
        assert_eq!(again, cert);
    }
}

fn text_of(x: &TowerElem) -> Value {
    Value::String(x.to_expr().to_string())
}

fn coords(p: &Point3) -> Value {
    json!([text_of(&p.x), text_of(&p.y), text_of(&p.z)])
}

#[test]
fn a_lift_about_an_axis_that_moves_its_premises_is_rejected() {
    // P5 rotated about the line through A and P1: the image circle is the
    // true orbit, but the blue circles it came from are not invariant
    let mut doc: Value = serde_json::from_str(builtin_source("l52").unwrap()).unwrap();
    let p1 = Point3::new(parse_value("-1/2").unwrap(), parse_value("-sqrt(3) / 2").unwrap(), TowerElem::zero());
    let p5 = Point3::new(parse_value("7/2").unwrap(), parse_value("-sqrt(3) / 2").unwrap(), TowerElem::zero());
    let axis = RotationGroup::through(&Point3::origin(), &p1).unwrap();
    let Locus::Circle { center, normal, sq_radius } = orbit_of(&p5, &axis) else { panic!("not a circle") };
    doc["scene"]["C"] =
        json!({"circle": {"center": coords(&center), "normal": coords(&normal), "sqRadius": text_of(&sq_radius)}});
    doc["steps"][2]["args"]["axis"] = json!(["A", "P1"]);
    let cert = load_certificate(&doc.to_string()).unwrap();
    let outcome = check_certificate(&cert, &Registry::new());
    assert!(!outcome.report.is_verified());
    let failing = outcome.report.failing_checks();
    assert!(
        failing.iter().any(|(rule, c)| *rule == "orbit_lift" && c.label.contains("under rotation") && c.rhs == "sound"),
        "{failing:?}"
    );
}

#[test]
fn a_circle_too_large_for_the_neighbour_rule_is_rejected() {
    let mut doc: Value = serde_json::from_str(builtin_source("l52").unwrap()).unwrap();
    doc["scene"]["S1"]["circle"]["sqRadius"] = json!("1");
    let cert = load_certificate(&doc.to_string()).unwrap();
    let outcome = check_certificate_with(&cert, &Registry::new(), &CheckOptions::default());
    assert!(!outcome.report.is_verified());
    let failing = outcome.report.failing_checks();
    assert!(failing.iter().any(|(rule, _)| *rule == "neighbor_blue"), "{failing:?}");
}
