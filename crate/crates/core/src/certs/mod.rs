//! Certificate files, the bundled lemma certificates, and verification in
//! dependency order.

mod cli;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use crate::deduction::{
    check_certificate_with, parse_rule, Certificate, CheckOptions, CheckOutcome, Registry, RuleError,
};
use crate::report::{CheckRecord, StepReport, Verdict, VerificationReport};

pub use cli::run_cli;

/// Environment variable holding a colon-separated search path for
/// certificate files given by relative name.
pub const CERT_PATH_VAR: &str = "RAMSEY_CERT_PATH";

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("step {index}: {source}")]
    Rule { index: usize, source: RuleError },
    #[error("duplicate certificate id {0:?}")]
    DuplicateId(String),
    #[error("{id} depends on unknown certificate {dependency:?}")]
    UnknownDependency { id: String, dependency: String },
    #[error("dependency cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("no certificate named {0:?}")]
    NotFound(String),
}

/// The bundled certificates, in a valid verification order.
const BUILTIN_SOURCES: [(&str, &str); 10] = [
    ("l52", include_str!("../../certs/l52.json")),
    ("l5r7", include_str!("../../certs/l5r7.json")),
    ("thm_l5", include_str!("../../certs/thm_l5.json")),
    ("disk", include_str!("../../certs/disk.json")),
    ("l62", include_str!("../../certs/l62.json")),
    ("l64", include_str!("../../certs/l64.json")),
    ("l63", include_str!("../../certs/l63.json")),
    ("r3_fig8a", include_str!("../../certs/r3_fig8a.json")),
    ("r3_pattern", include_str!("../../certs/r3_pattern.json")),
    ("thm_l6", include_str!("../../certs/thm_l6.json")),
];

pub fn builtin_ids() -> impl Iterator<Item = &'static str> {
    BUILTIN_SOURCES.iter().map(|(id, _)| *id)
}

pub fn builtin_source(id: &str) -> Option<&'static str> {
    BUILTIN_SOURCES.iter().find(|(name, _)| *name == id).map(|(_, text)| *text)
}

/// Parses a certificate document, reporting the field path of any schema
/// violation and rejecting unknown rule names and malformed rule arguments.
pub fn load_certificate(text: &str) -> Result<Certificate, CertError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cert: Certificate = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CertError::Schema { path, message: e.into_inner().to_string() }
    })?;
    for (index, step) in cert.steps.iter().enumerate() {
        parse_rule(&step.rule, cert.kind, &step.args).map_err(|source| CertError::Rule { index, source })?;
    }
    Ok(cert)
}

pub fn load_certificate_file(path: &Path) -> Result<Certificate, CertError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CertError::Io { path: path.display().to_string(), source })?;
    load_certificate(&text)
}

/// Resolves a certificate file name: as given if it exists, otherwise
/// against each directory of the search path.
pub fn resolve_cert_path(name: &str, search_path: Option<&str>) -> Option<PathBuf> {
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Some(direct);
    }
    if direct.is_absolute() {
        return None;
    }
    search_path?.split(':').filter(|dir| !dir.is_empty()).map(|dir| Path::new(dir).join(name)).find(|p| p.is_file())
}

pub fn builtin_certificate(id: &str) -> Result<Certificate, CertError> {
    load_certificate(builtin_source(id).ok_or_else(|| CertError::NotFound(id.to_string()))?)
}

/// All bundled certificates in dependency order.
pub fn builtin_bundle() -> Vec<Certificate> {
    let certs = builtin_ids().map(|id| builtin_certificate(id).expect("bundled certificate loads")).collect();
    topological_order(certs, &[]).expect("bundled certificates form a DAG")
}

/// Orders certificates so every dependency precedes its dependents, keeping
/// the given order where there is a choice. Dependencies must be in `certs`
/// or listed in `external`.
pub fn topological_order(certs: Vec<Certificate>, external: &[&str]) -> Result<Vec<Certificate>, CertError> {
    let mut position = HashMap::new();
    for (i, c) in certs.iter().enumerate() {
        if position.insert(c.id.clone(), i).is_some() {
            return Err(CertError::DuplicateId(c.id.clone()));
        }
    }
    for c in &certs {
        for d in &c.dependencies {
            if !position.contains_key(d) && !external.contains(&d.as_str()) {
                return Err(CertError::UnknownDependency { id: c.id.clone(), dependency: d.clone() });
            }
        }
    }
    // 0 unvisited, 1 on the stack, 2 done
    let mut state = vec![0u8; certs.len()];
    let mut order = Vec::with_capacity(certs.len());
    fn visit(
        i: usize,
        certs: &[Certificate],
        position: &HashMap<String, usize>,
        state: &mut [u8],
        stack: &mut Vec<usize>,
        order: &mut Vec<usize>,
    ) -> Result<(), CertError> {
        match state[i] {
            2 => return Ok(()),
            1 => {
                let start = stack.iter().position(|&j| j == i).unwrap_or(0);
                let mut cycle: Vec<String> = stack[start..].iter().map(|&j| certs[j].id.clone()).collect();
                cycle.push(certs[i].id.clone());
                return Err(CertError::Cycle(cycle));
            }
            _ => {}
        }
        state[i] = 1;
        stack.push(i);
        for d in &certs[i].dependencies {
            if let Some(&j) = position.get(d) {
                visit(j, certs, position, state, stack, order)?;
            }
        }
        stack.pop();
        state[i] = 2;
        order.push(i);
        Ok(())
    }
    for i in 0..certs.len() {
        visit(i, &certs, &position, &mut state, &mut Vec::new(), &mut order)?;
    }
    let mut slots: Vec<Option<Certificate>> = certs.into_iter().map(Some).collect();
    Ok(order.into_iter().map(|i| slots[i].take().expect("visited once")).collect())
}

/// A rejected report standing in for a certificate that failed to load.
pub fn load_error_report(id: &str, err: &CertError) -> VerificationReport {
    VerificationReport {
        id: id.to_string(),
        verdict: Verdict::Rejected,
        checks: vec![CheckRecord::structural("schema", err.to_string(), "is", "well-formed", false)],
        steps: Vec::<StepReport>::new(),
        elapsed_ms: None,
    }
}

/// Verifies certificates in order, admitting each verified one to the
/// registry before its dependents are checked.
pub fn verify_in_order(certs: &[Certificate], registry: &mut Registry, options: &CheckOptions) -> Vec<CheckOutcome> {
    certs
        .iter()
        .map(|c| {
            let outcome = check_certificate_with(c, registry, options);
            registry.admit(&outcome);
            outcome
        })
        .collect()
}

/// Builtin certificates that `ids` depend on, transitively, in bundle order.
pub fn builtin_closure(ids: &[String]) -> Result<Vec<Certificate>, CertError> {
    let bundle: BTreeMap<String, Certificate> = builtin_bundle().into_iter().map(|c| (c.id.clone(), c)).collect();
    let mut wanted = Vec::new();
    let mut stack: Vec<String> = ids.to_vec();
    while let Some(id) = stack.pop() {
        if wanted.contains(&id) {
            continue;
        }
        let c = bundle.get(&id).ok_or_else(|| CertError::NotFound(id.clone()))?;
        stack.extend(c.dependencies.iter().cloned());
        wanted.push(id);
    }
    Ok(builtin_bundle().into_iter().filter(|c| wanted.contains(&c.id)).collect())
}
