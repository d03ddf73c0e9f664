//! Single-field mutations of the bundled certificates and their
//! verification against the rest of the bundle.

use std::sync::OnceLock;

use ramsey_core::algebra::AlgExpr;
use ramsey_core::certs::{
    builtin_bundle, builtin_ids, builtin_source, load_certificate, load_error_report, verify_in_order,
};
use ramsey_core::deduction::{
    check_certificate_with, Certificate, CheckOptions, CheckOutcome, Registry, EUCLIDEAN_RULES, LATTICE_RULES,
};
use ramsey_core::report::VerificationReport;
use serde_json::Value;

#[derive(Clone, Debug)]
pub struct Mutation {
    pub cert: String,
    pub kind: &'static str,
    pub path: String,
    pub text: String,
}

/// Fields whose values are search budgets or patch extents: changing them
/// yields another valid check, not a broken one.
const NOT_LOAD_BEARING: [&str; 4] = ["gadget.patch", ".limit", ".margin", "note"];

fn allowed(path: &str) -> bool {
    !NOT_LOAD_BEARING.iter().any(|p| path.contains(p))
}

fn plus_one(text: &str) -> String {
    let e = AlgExpr::parse(text).expect("bundled expression parses");
    AlgExpr::Add(Box::new(e), Box::new(AlgExpr::int(1))).to_string()
}

fn toggle_zero(text: &str) -> String {
    let v = ramsey_core::algebra::parse_value(text).expect("bundled expression parses");
    if v.is_zero() { "1" } else { "0" }.to_string()
}

fn leaves(v: &Value, path: String, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, format!("{path}.{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| leaves(x, format!("{path}[{i}]"), out)),
        other => out.push((path, other.clone())),
    }
}

fn set(v: &mut Value, path: &str, new: Value) {
    let mut cur = v;
    for part in path.trim_start_matches('.').split('.') {
        let (key, idx) = match part.find('[') {
            Some(i) => (&part[..i], Some(&part[i..])),
            None => (part, None),
        };
        cur = &mut cur[key];
        if let Some(idx) = idx {
            for i in idx.trim_matches(|c| c == '[' || c == ']').split("][") {
                cur = &mut cur[i.parse::<usize>().unwrap()];
            }
        }
    }
    *cur = new;
}

fn is_numeric_string(path: &str, s: &str) -> bool {
    (path.starts_with(".scene.") || path.contains(".distance")) && AlgExpr::parse(s).is_ok()
}

/// Every single-field mutation of one bundled certificate: +1 and zero
/// toggles of numeric fields (zero toggles only for directions, whose scale
/// is immaterial), the next rule name of the same kind, and each dependency
/// removed.
pub fn mutations_of(id: &str) -> Vec<Mutation> {
    let original: Value = serde_json::from_str(builtin_source(id).unwrap()).unwrap();
    let mut fields = Vec::new();
    leaves(&original, String::new(), &mut fields);
    let mut out = Vec::new();
    let mut push = |kind, path: &str, new: Value| {
        let mut v = original.clone();
        set(&mut v, path, new);
        out.push(Mutation { cert: id.to_string(), kind, path: path.to_string(), text: v.to_string() });
    };
    for (path, value) in &fields {
        if !allowed(path) {
            continue;
        }
        match value {
            Value::String(s) if is_numeric_string(path, s) => {
                if !path.contains(".normal") {
                    push("numeric +1", path, Value::String(plus_one(s)));
                }
                push("numeric zero toggle", path, Value::String(toggle_zero(s)));
            }
            Value::Number(n) => {
                let n = n.as_i64().unwrap();
                push("numeric +1", path, Value::from(n + 1));
                push("numeric zero toggle", path, Value::from(if n == 0 { 1 } else { 0 }));
            }
            _ => {}
        }
    }
    for (i, step) in original["steps"].as_array().unwrap().iter().enumerate() {
        let rule = step["rule"].as_str().unwrap();
        let table: &[&str] = if EUCLIDEAN_RULES.contains(&rule) { &EUCLIDEAN_RULES } else { &LATTICE_RULES };
        let next = table[(table.iter().position(|r| *r == rule).unwrap() + 1) % table.len()];
        push("rule id", &format!(".steps[{i}].rule"), Value::String(next.into()));
    }
    let deps = original["dependencies"].as_array().unwrap().clone();
    for (i, dep) in deps.iter().enumerate() {
        let mut v = original.clone();
        v["dependencies"].as_array_mut().unwrap().remove(i);
        out.push(Mutation {
            cert: id.to_string(),
            kind: "dependency removed",
            path: format!(".dependencies[{i}] ({})", dep.as_str().unwrap()),
            text: v.to_string(),
        });
    }
    out
}

pub fn all_mutations() -> Vec<Mutation> {
    builtin_ids().flat_map(mutations_of).collect()
}

struct Baseline {
    certs: Vec<Certificate>,
    outcomes: Vec<CheckOutcome>,
}

fn baseline() -> &'static Baseline {
    static BASE: OnceLock<Baseline> = OnceLock::new();
    BASE.get_or_init(|| {
        let certs = builtin_bundle();
        let outcomes = verify_in_order(&certs, &mut Registry::new(), &CheckOptions::default());
        Baseline { certs, outcomes }
    })
}

/// Verifies the bundle with one certificate's text replaced, in order,
/// stopping at the first rejected report. Certificates that do not depend
/// on the replaced one reuse their unmutated outcome. A certificate that
/// fails to load gets a rejected schema report.
pub fn verify_bundle_with(id: &str, text: &str) -> Vec<VerificationReport> {
    let base = baseline();
    let options = CheckOptions::default();
    let mut registry = Registry::new();
    let mut affected: Vec<String> = vec![id.to_string()];
    let mut reports = Vec::new();
    for (cert, outcome) in base.certs.iter().zip(&base.outcomes) {
        let outcome = if cert.id == id {
            match load_certificate(text) {
                Ok(c) => check_certificate_with(&c, &registry, &options),
                Err(e) => {
                    reports.push(load_error_report(id, &e));
                    return reports;
                }
            }
        } else if cert.dependencies.iter().any(|d| affected.contains(d)) {
            affected.push(cert.id.clone());
            check_certificate_with(cert, &registry, &options)
        } else {
            outcome.clone()
        };
        registry.admit(&outcome);
        let rejected = !outcome.report.is_verified();
        reports.push(outcome.report);
        if rejected {
            break;
        }
    }
    reports
}

/// The first rejected report of the bundle with this mutation, if any.
pub fn rejection(m: &Mutation) -> Option<VerificationReport> {
    verify_bundle_with(&m.cert, &m.text).into_iter().find(|r| !r.is_verified())
}
