//! Named finite lattice configurations with an expected outcome.

use std::time::Instant;

use crate::color::Color;
use crate::report::{CheckRecord, StepReport, Verdict, VerificationReport};

use super::{
    enumerate, sqdist_lattice, Engine, LatticeColoring, LatticeError, LatticePoint, LatticeRules, Patch, Propagation,
};

pub const GADGET_NAMES: [&str; 3] = ["fig8a", "fig8b", "fig9"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// Each point is forced to its colour, and each pair sits at the given
    /// squared distance.
    Forces { points: Vec<(LatticePoint, Color)>, pairs: Vec<(LatticePoint, LatticePoint, i64)> },
    /// No total colouring exists.
    Unsat { limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub patch: Patch,
    pub seed: LatticeColoring,
    pub rules: LatticeRules,
    pub expectation: Expectation,
}

#[derive(Clone, Debug)]
pub struct GadgetOutcome {
    pub report: VerificationReport,
    pub summary: String,
}

fn pt(a: i64, b: i64) -> LatticePoint {
    LatticePoint::new(a, b)
}

fn space_rules() -> LatticeRules {
    LatticeRules::new(&[], 6).with_source(1, "base").with_source(4, "l62").with_source(9, "l63").with_source(16, "l64")
}

/// The red line `i·(−1, 2)` for `i ∈ [0, n)`.
fn red_line(n: i64) -> LatticeColoring {
    (0..n).map(|i| (pt(-i, 2 * i), Color::Red)).collect()
}

/// A red point, a row below it, and two unit lines through the row that end
/// at squared distance 3 from the red point.
pub fn fig9_points() -> Vec<LatticePoint> {
    let mut pts = vec![pt(0, 0)];
    pts.extend((-2..=3).map(|x| pt(x, -1)));
    pts.extend((1..=6).map(|i| pt(-1, 3 - i)));
    pts.extend((1..=6).map(|i| pt(i - 2, 3 - i)));
    pts.sort();
    pts.dedup();
    pts
}

pub fn builtin_gadget(name: &str) -> Option<Gadget> {
    let g = match name {
        "fig8a" => Gadget {
            name: name.into(),
            patch: Patch::radius(8),
            seed: red_line(2),
            rules: space_rules(),
            expectation: Expectation::Forces { points: vec![(pt(-2, 4), Color::Red)], pairs: vec![] },
        },
        "fig8b" => Gadget {
            name: name.into(),
            patch: Patch::radius(8),
            seed: red_line(5),
            rules: space_rules(),
            expectation: Expectation::Forces {
                points: vec![(pt(0, 5), Color::Red), (pt(1, 3), Color::Red)],
                pairs: vec![(pt(0, 5), pt(1, 3), 3)],
            },
        },
        "fig9" => Gadget {
            name: name.into(),
            patch: Patch::from_points(fig9_points()),
            seed: [(pt(0, 0), Color::Red)].into_iter().collect(),
            rules: LatticeRules::new(&[], 6).with_source(1, "base").with_source(3, "r3_pattern"),
            expectation: Expectation::Unsat { limit: 1 << 16 },
        },
        _ => return None,
    };
    Some(g)
}

/// How a colour was established for a point, if it was.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Forcing {
    /// Propagation from the seed assigns it.
    Propagated,
    /// Propagation from the seed plus the opposite colour contradicts.
    Refuted,
    NotForced,
    /// The seed itself propagates to a contradiction.
    SeedContradicts(LatticePoint),
}

pub fn forcing(
    patch: &Patch,
    seed: &LatticeColoring,
    rules: &LatticeRules,
    p: LatticePoint,
    color: Color,
) -> Result<Forcing, LatticeError> {
    if !patch.contains(p) {
        return Err(LatticeError::SeedOutsidePatch(p));
    }
    let engine = Engine::new(patch, rules)?;
    let fixpoint = match engine.propagate(seed, &mut super::fifo)? {
        Propagation::Contradiction(at) => return Ok(Forcing::SeedContradicts(at)),
        Propagation::Fixpoint(c) => c,
    };
    match fixpoint.get(&p) {
        Some(&c) if c == color => return Ok(Forcing::Propagated),
        Some(_) => return Ok(Forcing::NotForced),
        None => {}
    }
    let mut probe = fixpoint;
    probe.insert(p, !color);
    Ok(match engine.propagate(&probe, &mut super::fifo)? {
        Propagation::Contradiction(_) => Forcing::Refuted,
        Propagation::Fixpoint(_) => Forcing::NotForced,
    })
}

pub fn forcing_check(
    patch: &Patch,
    seed: &LatticeColoring,
    rules: &LatticeRules,
    p: LatticePoint,
    color: Color,
) -> CheckRecord {
    let (found, pass) = match forcing(patch, seed, rules, p, color) {
        Ok(Forcing::Propagated) => (format!("{color} by propagation"), true),
        Ok(Forcing::Refuted) => (format!("{color}: {} contradicts", !color), true),
        Ok(Forcing::NotForced) => ("not forced".to_string(), false),
        Ok(Forcing::SeedContradicts(at)) => (format!("seed contradicts at {at}"), false),
        Err(e) => (e.to_string(), false),
    };
    CheckRecord::structural(format!("{p} forced {color}"), found, "is", color.to_string(), pass)
}

pub fn verify_gadget(g: &Gadget) -> Result<GadgetOutcome, LatticeError> {
    let start = Instant::now();
    let (steps, summary) = match &g.expectation {
        Expectation::Forces { points, pairs } => {
            let checks: Vec<CheckRecord> =
                points.iter().map(|&(p, c)| forcing_check(&g.patch, &g.seed, &g.rules, p, c)).collect();
            let mut steps = vec![StepReport::new("lattice_forces", checks)];
            if !pairs.is_empty() {
                let checks = pairs
                    .iter()
                    .map(|&(p, q, d)| {
                        let got = sqdist_lattice(p, q);
                        CheckRecord::integer(format!("squared distance {p} {q}"), got, "=", d, got == d)
                    })
                    .collect();
                steps.push(StepReport::new("lattice_sqdist", checks));
            }
            let forced: Vec<String> = points.iter().map(|(p, c)| format!("{p} {c}")).collect();
            (steps, format!("forces {}", forced.join(", ")))
        }
        Expectation::Unsat { limit } => {
            let e = enumerate(&g.patch, &g.seed, &g.rules, *limit)?;
            let count = e.colorings.len() as i64;
            let mut checks = vec![CheckRecord::integer("total colourings", count, "=", 0, count == 0 && !e.truncated)];
            if let Some(w) = e.colorings.first() {
                let witness: Vec<String> = w.iter().map(|(p, c)| format!("{p}:{c}")).collect();
                checks.push(CheckRecord::structural("witness colouring", witness.join(" "), "is", "absent", false));
            }
            let summary = if count == 0 {
                format!("UNSAT, nodes explored: {}", e.nodes)
            } else {
                format!("SAT, {count} colourings, nodes explored: {}", e.nodes)
            };
            (vec![StepReport::new("lattice_unsat", checks)], summary)
        }
    };
    let verdict = if steps.iter().all(StepReport::passed) { Verdict::Verified } else { Verdict::Rejected };
    let report = VerificationReport {
        id: g.name.clone(),
        verdict,
        checks: Vec::new(),
        steps,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    };
    Ok(GadgetOutcome { report, summary })
}
