//! Checking of lattice certificates.

use std::collections::BTreeSet;

use super::certificate::{lattice_point, Certificate, Keyword, Produces};
use super::rules::{parse_rule, Rule};
use super::{Context, LemmaExport, Registry, Run, Signature};
use crate::color::Color;
use crate::lattice::{
    check_periodic, core_mismatch, enumerate, forcing_check, pattern_mod5, sqdist_lattice, LatticePoint, LatticeRules,
    Patch,
};
use crate::report::{CheckRecord, StepReport};

/// Whether the listed sources justify forbidding red pairs at `sq_dist` in a
/// context forbidding blue `k`-progressions.
fn justified(sq_dist: i64, sources: &[String], k: usize, cert: &Certificate, registry: &Registry) -> bool {
    if sources.is_empty() {
        return false;
    }
    if sources.iter().any(|s| s == "base") {
        return sq_dist == 1 && sources.len() == 1;
    }
    let exports: Option<Vec<&LemmaExport>> =
        sources.iter().map(|s| if cert.dependencies.contains(s) { registry.export(s) } else { None }).collect();
    let Some(exports) = exports else { return false };
    let direct = exports.iter().any(|e| match e {
        LemmaExport::ForbiddenRedDistance { distance, requires: Signature::NoBlueAp(j) } => {
            *j == k && distance * distance == crate::algebra::TowerElem::from_int(sq_dist)
        }
        _ => false,
    });
    // a stage forcing the pattern from red pairs at sq_dist, whose own lemmas
    // are declared too, and a blue (k − 1)-progression the pattern cannot hold
    let staged = exports.iter().any(|e| match e {
        LemmaExport::LatticeStage { red_sq_dist, requires: Signature::NoBlueAp(j), lemmas } => {
            *red_sq_dist == sq_dist && *j == k && lemmas.iter().all(|l| cert.dependencies.contains(l))
        }
        _ => false,
    }) && exports.iter().any(|e| matches!(e, LemmaExport::BlueApExists { k: m, .. } if *m + 1 == k));
    direct || staged
}

struct State {
    patch: Patch,
    rules: LatticeRules,
    seed: crate::lattice::LatticeColoring,
    reds: BTreeSet<LatticePoint>,
}

fn red_known(st: &State, p: LatticePoint) -> CheckRecord {
    CheckRecord::structural(format!("{p} is red"), p.to_string(), "in", "seed or forced reds", st.reds.contains(&p))
}

fn apply(st: &mut State, rule: &Rule, k: usize) -> (Vec<CheckRecord>, bool) {
    let mut checks = Vec::new();
    let mut contradiction = false;
    match rule {
        Rule::LatticeForces(a) => {
            let p = lattice_point(&a.at);
            let rec = forcing_check(&st.patch, &st.seed, &st.rules, p, a.color);
            if rec.pass && a.color == Color::Red {
                st.reds.insert(p);
            }
            checks.push(rec);
        }
        Rule::LatticeSqdist(a) => {
            let (p, q) = (lattice_point(&a.p), lattice_point(&a.q));
            checks.push(red_known(st, p));
            checks.push(red_known(st, q));
            let d = sqdist_lattice(p, q);
            checks.push(CheckRecord::integer(format!("squared distance {p} {q}"), d, "=", a.sq_dist, d == a.sq_dist));
        }
        Rule::LatticeUnsat(a) => match enumerate(&st.patch, &st.seed, &st.rules, a.limit.max(1)) {
            Ok(e) => {
                let n = e.colorings.len() as i64;
                checks.push(CheckRecord::integer("total colourings", n, "=", 0, n == 0 && !e.truncated && a.limit > 0));
                contradiction = true;
            }
            Err(e) => checks.push(CheckRecord::structural("enumeration", e.to_string(), "is", "possible", false)),
        },
        Rule::LatticePatternCheck(a) => {
            checks.push(CheckRecord::integer(
                "pattern progression length",
                a.ap_len as i64,
                "=",
                k as i64 - 1,
                a.ap_len + 1 == k,
            ));
            let dists: Vec<i64> = st.rules.sq_dists().collect();
            let res = check_periodic(pattern_mod5, 5, &dists, a.ap_len);
            let found = match &res {
                Ok(()) => "no violation".to_string(),
                Err(v) => v.to_string(),
            };
            checks.push(CheckRecord::structural(
                "period-5 pattern obeys the rules",
                found,
                "is",
                "no violation",
                res.is_ok(),
            ));
        }
        Rule::LatticePatternRedPair(a) => {
            let (p, q) = (lattice_point(&a.p), lattice_point(&a.q));
            for x in [p, q] {
                let c = pattern_mod5(x);
                checks.push(CheckRecord::structural(
                    format!("pattern at {x}"),
                    c.to_string(),
                    "=",
                    "red",
                    c == Color::Red,
                ));
            }
            let d = sqdist_lattice(p, q);
            checks.push(CheckRecord::integer(format!("squared distance {p} {q}"), d, "=", a.sq_dist, d == a.sq_dist));
            checks.push(CheckRecord::structural(
                "pair at a seeded red distance",
                a.sq_dist.to_string(),
                "in",
                "seed red distances",
                seed_red_sq_dists(st).contains(&a.sq_dist),
            ));
        }
        Rule::LatticeMatchesPattern(a) => {
            let core = st.patch.core(a.margin);
            checks.push(CheckRecord::integer("core points", core.len() as i64, ">", 0, !core.is_empty()));
            match enumerate(&st.patch, &st.seed, &st.rules, a.limit.max(1)) {
                Ok(e) => {
                    let n = e.colorings.len() as i64;
                    checks.push(CheckRecord::integer("total colourings", n, ">=", 1, n >= 1 && a.limit > 0));
                    checks.push(CheckRecord::structural(
                        "enumeration complete",
                        if e.truncated { "truncated" } else { "complete" },
                        "is",
                        "complete",
                        !e.truncated,
                    ));
                    for (i, c) in e.colorings.iter().enumerate() {
                        let bad = core_mismatch(c, &st.patch, a.margin, pattern_mod5);
                        let found = bad.map_or("agrees".to_string(), |p| format!("differs at {p}"));
                        checks.push(CheckRecord::structural(
                            format!("colouring {} on the core", i + 1),
                            found,
                            "=",
                            "agrees",
                            bad.is_none(),
                        ));
                    }
                }
                Err(e) => checks.push(CheckRecord::structural("enumeration", e.to_string(), "is", "possible", false)),
            }
        }
        _ => checks.push(CheckRecord::structural("rule kind", "euclidean rule", "in", "lattice certificate", false)),
    }
    (checks, contradiction)
}

fn seed_red_sq_dists(st: &State) -> BTreeSet<i64> {
    let reds: Vec<LatticePoint> = st.seed.iter().filter(|(_, &c)| c == Color::Red).map(|(&p, _)| p).collect();
    reds.iter().enumerate().flat_map(|(i, &p)| reds[i + 1..].iter().map(move |&q| sqdist_lattice(p, q))).collect()
}

pub(crate) fn run(cert: &Certificate, ctx: &Context, registry: &Registry) -> Run {
    let mut checks = Vec::new();
    let Some(gadget) = &cert.gadget else {
        checks.push(CheckRecord::structural("gadget", "absent", "is", "present", false));
        return Run { checks, steps: Vec::new(), contradiction_at: None, facts: Vec::new() };
    };
    let k = ctx.ap_len;
    let rules = gadget.rules(k);
    checks.push(CheckRecord::structural(
        "red distance 1 forbidden",
        "1",
        "in",
        "rule squared distances",
        rules.forbidden_red_sq_dists.contains_key(&1),
    ));
    let mut seen = BTreeSet::new();
    for r in &gadget.forbidden_red_sq_dists {
        checks.push(CheckRecord::structural(
            format!("squared distance {} listed once", r.sq_dist),
            r.sq_dist.to_string(),
            "is",
            "new",
            seen.insert(r.sq_dist),
        ));
        checks.push(CheckRecord::structural(
            format!("squared distance {} justified", r.sq_dist),
            r.sources.join(", "),
            "justify",
            r.sq_dist.to_string(),
            justified(r.sq_dist, &r.sources, k, cert, registry),
        ));
    }
    let patch = gadget.patch.patch();
    let seed = gadget.seed_coloring();
    let mut seeds_ok = seed.len() == gadget.seed.len();
    for &p in seed.keys() {
        seeds_ok &= patch.contains(p);
    }
    checks.push(CheckRecord::structural(
        "seed points distinct and inside the patch",
        gadget.seed.len().to_string(),
        "points",
        "inside",
        seeds_ok,
    ));
    let reds = seed.iter().filter(|(_, &c)| c == Color::Red).map(|(&p, _)| p).collect();
    let mut st = State { patch, rules, seed, reds };

    let mut steps = Vec::new();
    let mut contradiction_at = None;
    let mut failed = false;
    for (i, step) in cert.steps.iter().enumerate() {
        if failed || contradiction_at.is_some() {
            steps.push(StepReport::skipped(step.rule.clone()));
            failed = true;
            continue;
        }
        let (mut out, contradiction) = match parse_rule(&step.rule, cert.kind, &step.args) {
            Ok(rule) => apply(&mut st, &rule, k),
            Err(e) => (vec![CheckRecord::structural("rule", e.to_string(), "is", "well-formed", false)], false),
        };
        let expected =
            if contradiction { Produces::Keyword(Keyword::Contradiction) } else { Produces::Facts(Vec::new()) };
        let describe = |p: &Produces| match p {
            Produces::Keyword(_) => "contradiction".to_string(),
            Produces::Facts(f) if f.is_empty() => "nothing".to_string(),
            Produces::Facts(_) => "colour facts".to_string(),
        };
        out.push(CheckRecord::structural(
            "produces",
            describe(&expected),
            "=",
            describe(&step.produces),
            expected == step.produces,
        ));
        let report = StepReport::new(step.rule.clone(), out);
        if !report.passed() {
            failed = true;
        } else if contradiction {
            contradiction_at = Some(i);
        }
        steps.push(report);
    }
    Run { checks, steps, contradiction_at, facts: Vec::new() }
}
