//! Certificate checking: colour facts over loci, the deduction rules, and the
//! registry of verified lemmas.

mod certificate;
mod checker;
mod lattice_steps;
mod rules;

use std::fmt;
use std::time::Instant;

use indexmap::IndexMap;

use crate::algebra::TowerElem;
use crate::color::Color;
use crate::geometry::sqdist;
use crate::lattice::sqdist_lattice;
use crate::report::{CheckRecord, StepReport, Verdict, VerificationReport};

pub use certificate::{
    lattice_point, AnnulusSpec, CertKind, Certificate, ContextSpec, Coords, FactSpec, GadgetSpec, Goal, Keyword,
    LatticeCoords, PatchSpec, PlanarSpec, Produces, Quantity, RhombusSpec, Scene, SceneEntry, SeedSpec, SphereSpec,
    SqDistRule, Step,
};
pub use checker::{premise_closure, FactTrace, Origin};
pub use rules::{parse_rule, Rule, RuleError, EUCLIDEAN_RULES, LATTICE_RULES};

/// The hypotheses an export relies on besides the one it refutes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    /// Only "no two red points at distance 1".
    Base,
    /// The base hypothesis plus "no blue unit progression of this length".
    NoBlueAp(usize),
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Base => f.write_str("base"),
            Signature::NoBlueAp(k) => write!(f, "no blue {k}-progression"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaExport {
    ForbiddenRedDistance {
        distance: TowerElem,
        requires: Signature,
    },
    NoBlueDisk {
        radius: TowerElem,
        requires: Signature,
    },
    BlueApExists {
        k: usize,
        requires: Signature,
    },
    /// A lattice stage: red points at this squared distance force the period-5
    /// pattern, given the listed lemmas.
    LatticeStage {
        red_sq_dist: i64,
        requires: Signature,
        lemmas: Vec<String>,
    },
}

impl fmt::Display for LemmaExport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaExport::ForbiddenRedDistance { distance, requires } => {
                write!(f, "no red pair at distance {distance} [{requires}]")
            }
            LemmaExport::NoBlueDisk { radius, requires } => write!(f, "no blue disk of radius {radius} [{requires}]"),
            LemmaExport::BlueApExists { k, requires } => write!(f, "a blue {k}-progression exists [{requires}]"),
            LemmaExport::LatticeStage { red_sq_dist, requires, lemmas } => {
                write!(f, "lattice stage at squared distance {red_sq_dist} using {} [{requires}]", lemmas.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub export: Option<LemmaExport>,
    pub report: VerificationReport,
}

/// Verified lemmas in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: IndexMap<String, RegistryEntry>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a verified certificate; rejected reports are not admitted.
    pub fn admit(&mut self, outcome: &CheckOutcome) -> bool {
        if !outcome.report.is_verified() {
            return false;
        }
        self.entries.insert(
            outcome.report.id.clone(),
            RegistryEntry { export: outcome.export.clone(), report: outcome.report.clone() },
        );
        true
    }

    pub fn get(&self, id: &str) -> Option<&RegistryEntry> {
        self.entries.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn export(&self, id: &str) -> Option<&LemmaExport> {
        self.entries.get(id).and_then(|e| e.export.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Fractional digits in decimal renderings.
    pub digits: u32,
    /// Record wall time in reports.
    pub timings: bool,
    /// Additional forbidden red distances granted to the context.
    pub extra_forbidden: Vec<TowerElem>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { digits: 6, timings: false, extra_forbidden: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub report: VerificationReport,
    pub export: Option<LemmaExport>,
    /// Every fact established, in order, with its premises.
    pub facts: Vec<FactTrace>,
}

/// What a certificate may assume, assembled from its verified dependencies.
#[derive(Clone, Debug)]
pub(crate) struct Context {
    pub ap_len: usize,
    pub forbidden: Vec<(TowerElem, String)>,
    pub no_blue_disk: Option<(TowerElem, String)>,
}

impl Context {
    fn build(cert: &Certificate, registry: &Registry, options: &CheckOptions) -> Self {
        let k = cert.context.ap_len;
        let mut forbidden = vec![(TowerElem::one(), "base".to_string())];
        let mut no_blue_disk = None;
        for dep in &cert.dependencies {
            match registry.export(dep) {
                Some(LemmaExport::ForbiddenRedDistance { distance, requires: Signature::NoBlueAp(j) }) if *j == k => {
                    forbidden.push((distance.clone(), dep.clone()))
                }
                Some(LemmaExport::NoBlueDisk { radius, requires: Signature::NoBlueAp(j) }) if *j == k => {
                    no_blue_disk = Some((radius.clone(), dep.clone()))
                }
                _ => {}
            }
        }
        forbidden.extend(options.extra_forbidden.iter().map(|d| (d.clone(), "granted".to_string())));
        Context { ap_len: k, forbidden, no_blue_disk }
    }

    pub fn forbidden_check(&self, d: &TowerElem) -> CheckRecord {
        let listed: Vec<String> = self.forbidden.iter().map(|(x, _)| x.to_string()).collect();
        let pass = self.forbidden.iter().any(|(x, _)| x == d);
        CheckRecord::structural(
            "forbidden red distance",
            d.to_string(),
            "in",
            format!("{{{}}}", listed.join(", ")),
            pass,
        )
    }
}

/// Checks that do not belong to any single step.
fn certificate_checks(cert: &Certificate, registry: &Registry) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let k = cert.context.ap_len as i64;
    out.push(CheckRecord::structural(
        "forbidden blue progression length",
        k.to_string(),
        "in",
        "{5, 6}",
        k == 5 || k == 6,
    ));
    for dep in &cert.dependencies {
        let pass = dep != &cert.id && registry.contains(dep);
        out.push(CheckRecord::structural(format!("dependency {dep}"), dep.clone(), "is", "verified", pass));
    }
    let kind_ok = match cert.kind {
        CertKind::Euclidean => cert.gadget.is_none(),
        CertKind::Lattice => cert.gadget.is_some() && cert.scene.is_empty() && cert.context.hypotheses.is_empty(),
    };
    out.push(CheckRecord::structural(
        "sections match certificate kind",
        format!("{:?}", cert.kind).to_lowercase(),
        "has",
        "its own sections only",
        kind_ok,
    ));
    out
}

/// Re-verifies every step of a certificate against the registry.
pub fn check_certificate(cert: &Certificate, registry: &Registry) -> CheckOutcome {
    check_certificate_with(cert, registry, &CheckOptions::default())
}

pub fn check_certificate_with(cert: &Certificate, registry: &Registry, options: &CheckOptions) -> CheckOutcome {
    let start = Instant::now();
    let mut checks = certificate_checks(cert, registry);
    let ctx = Context::build(cert, registry, options);
    let run = match cert.kind {
        CertKind::Euclidean => checker::run(cert, &ctx, options.digits),
        CertKind::Lattice => lattice_steps::run(cert, &ctx, registry),
    };
    checks.extend(run.checks);
    let contradiction_last = run.contradiction_at.is_some_and(|i| i + 1 == cert.steps.len());
    let goal_ok = match cert.goal {
        Goal::Contradiction => contradiction_last,
        Goal::Holds => run.contradiction_at.is_none() && !cert.steps.is_empty(),
    };
    checks.push(CheckRecord::structural(
        "goal",
        if run.contradiction_at.is_some() { "contradiction" } else { "no contradiction" },
        "meets",
        format!("{:?}", cert.goal).to_lowercase(),
        goal_ok,
    ));
    let verified = checks.iter().all(|c| c.pass) && run.steps.iter().all(StepReport::passed);
    let report = VerificationReport {
        id: cert.id.clone(),
        verdict: if verified { Verdict::Verified } else { Verdict::Rejected },
        checks,
        steps: run.steps,
        elapsed_ms: options.timings.then(|| start.elapsed().as_millis() as u64),
    };
    let export = if verified { derive_export(cert) } else { None };
    CheckOutcome { report, export, facts: run.facts }
}

pub(crate) struct Run {
    pub checks: Vec<CheckRecord>,
    pub steps: Vec<StepReport>,
    pub contradiction_at: Option<usize>,
    pub facts: Vec<FactTrace>,
}

/// The export is read off the refuted hypothesis, never declared.
pub fn derive_export(cert: &Certificate) -> Option<LemmaExport> {
    let k = cert.context.ap_len;
    match cert.kind {
        CertKind::Euclidean => {
            let hyps: Vec<(crate::geometry::Locus, Color)> = cert
                .context
                .hypotheses
                .iter()
                .map(|h| cert.scene.0.get(&h.fact).map(|e| (e.locus(), h.color)))
                .collect::<Option<_>>()?;
            use crate::geometry::Locus;
            match hyps.as_slice() {
                [(Locus::Point(a), Color::Red), (Locus::Point(b), Color::Red)] => {
                    let distance = sqdist(a, b).sqrt().ok()?;
                    (!distance.is_zero())
                        .then_some(LemmaExport::ForbiddenRedDistance { distance, requires: Signature::NoBlueAp(k) })
                }
                [(Locus::Disk { sq_radius, .. }, Color::Blue)] => {
                    Some(LemmaExport::NoBlueDisk { radius: sq_radius.sqrt().ok()?, requires: Signature::NoBlueAp(k) })
                }
                [(Locus::Point(_), Color::Red)] => Some(LemmaExport::BlueApExists { k, requires: Signature::Base }),
                _ => None,
            }
        }
        CertKind::Lattice => {
            let gadget = cert.gadget.as_ref()?;
            let seed = gadget.seed_coloring();
            let reds: Vec<_> = seed.iter().filter(|(_, &c)| c == Color::Red).map(|(&p, _)| p).collect();
            match cert.goal {
                Goal::Contradiction if seed.len() == 1 && reds.len() == 1 => {
                    Some(LemmaExport::BlueApExists { k, requires: Signature::Base })
                }
                Goal::Holds => {
                    let red_sq_dist = reds
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &p)| reds[i + 1..].iter().map(move |&q| sqdist_lattice(p, q)))
                        .min()?;
                    let mut lemmas: Vec<String> = gadget
                        .forbidden_red_sq_dists
                        .iter()
                        .flat_map(|r| r.sources.iter().cloned())
                        .filter(|s| s != "base")
                        .collect();
                    lemmas.sort();
                    lemmas.dedup();
                    Some(LemmaExport::LatticeStage { red_sq_dist, requires: Signature::NoBlueAp(k), lemmas })
                }
                _ => None,
            }
        }
    }
}
