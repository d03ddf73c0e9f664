//! Step-by-step checking of euclidean certificates.

use std::collections::{BTreeSet, HashMap, HashSet};

use indexmap::IndexMap;

use super::certificate::{Certificate, FactSpec, Keyword, Produces};
use super::rules::{parse_rule, ApForceRed, ApWitnessBlue, FactArg, NeighborBlue, OrbitLift, PointFromLocus, Rule};
use super::{Context, Run};
use crate::algebra::TowerElem;
use crate::color::Color;
use crate::geometry::{
    all_hold, invariance_conditions, membership_conditions, orbit_of, same_locus_conditions, subset_conditions,
    sweep_of, unit_ap_conditions, unit_chord_condition, validity_conditions, Condition, Locus, Point3, Relation,
    RotationGroup,
};
use crate::report::{CheckRecord, StepReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Hypothesis,
    Step(usize),
}

/// A colour fact as established during checking.
#[derive(Clone, Debug)]
pub struct FactTrace {
    pub name: String,
    pub color: Color,
    pub origin: Origin,
    /// Indices of the facts it was derived from.
    pub premises: Vec<usize>,
}

/// Every fact reachable from `fact` through premises, excluding itself.
pub fn premise_closure(facts: &[FactTrace], fact: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut stack = facts[fact].premises.clone();
    while let Some(i) = stack.pop() {
        if seen.insert(i) {
            stack.extend(facts[i].premises.iter().copied());
        }
    }
    seen
}

struct Fact {
    trace: FactTrace,
    locus: Locus,
}

struct Checker<'a> {
    ctx: &'a Context,
    digits: u32,
    scene: IndexMap<String, Locus>,
    used: HashSet<String>,
    facts: Vec<Fact>,
    index: HashMap<(String, Color), usize>,
}

/// Outcome of one rule application.
#[derive(Default)]
struct StepOut {
    checks: Vec<CheckRecord>,
    produced: Vec<(String, Color, Vec<usize>)>,
    contradiction: bool,
}

impl StepOut {
    fn fail(&mut self, label: impl Into<String>, lhs: impl Into<String>, relation: &str, rhs: impl Into<String>) {
        self.checks.push(CheckRecord::structural(label, lhs, relation, rhs, false));
    }

    fn ok(&mut self, label: impl Into<String>, lhs: impl Into<String>, relation: &str, rhs: impl Into<String>) {
        self.checks.push(CheckRecord::structural(label, lhs, relation, rhs, true));
    }

    fn expect(
        &mut self,
        pass: bool,
        label: impl Into<String>,
        lhs: impl Into<String>,
        relation: &str,
        rhs: impl Into<String>,
    ) {
        self.checks.push(CheckRecord::structural(label, lhs, relation, rhs, pass));
    }

    fn failed(&self) -> bool {
        self.checks.iter().any(|c| !c.pass)
    }
}

impl Checker<'_> {
    fn conds(&self, out: &mut StepOut, prefix: &str, conds: Vec<Condition>) {
        out.checks.extend(conds.into_iter().map(|c| CheckRecord::from_condition(&c.prefixed(prefix), self.digits)));
    }

    fn locus(&mut self, out: &mut StepOut, name: &str) -> Option<Locus> {
        match self.scene.get(name) {
            Some(l) => {
                self.used.insert(name.to_string());
                Some(l.clone())
            }
            None => {
                out.fail(format!("scene entry {name}"), name, "in", "scene");
                None
            }
        }
    }

    fn point(&mut self, out: &mut StepOut, name: &str) -> Option<Point3> {
        match self.locus(out, name)? {
            Locus::Point(p) => Some(p),
            other => {
                out.fail(format!("{name} is a point"), other.kind_name(), "is", "point");
                None
            }
        }
    }

    fn fact(&mut self, out: &mut StepOut, name: &str, color: Color) -> Option<usize> {
        self.used.insert(name.to_string());
        match self.index.get(&(name.to_string(), color)) {
            Some(&i) => {
                out.ok(format!("fact {name} is {color}"), name, "is", color.to_string());
                Some(i)
            }
            None => {
                out.fail(format!("fact {name} is {color}"), name, "is", format!("{color} (not established)"));
                None
            }
        }
    }

    /// The single established fact about `name`, whatever its colour.
    fn any_fact(&mut self, out: &mut StepOut, name: &str) -> Option<usize> {
        self.used.insert(name.to_string());
        let found: Vec<usize> =
            [Color::Red, Color::Blue].iter().filter_map(|&c| self.index.get(&(name.to_string(), c)).copied()).collect();
        match found.as_slice() {
            [i] => {
                out.ok(format!("fact about {name}"), name, "is", self.facts[*i].trace.color.to_string());
                Some(*i)
            }
            [] => {
                out.fail(format!("fact about {name}"), name, "is", "established");
                None
            }
            _ => {
                out.fail(format!("fact about {name}"), name, "has", "a single colour");
                None
            }
        }
    }

    /// Conditions for "every point of `target` is at distance `d` from `center`".
    fn at_distance(&self, out: &mut StepOut, label: &str, target: &Locus, center: &Point3, d: &TowerElem) {
        let sphere = Locus::Sphere { center: center.clone(), sq_radius: d * d };
        let conds = match target {
            Locus::Sphere { .. } => same_locus_conditions(target, &sphere),
            _ => subset_conditions(target, &sphere).ok(),
        };
        match conds {
            Some(c) => self.conds(out, label, c),
            None => out.fail(format!("{label}: target kind"), target.kind_name(), "in", "{point, circle, sphere}"),
        }
    }

    fn progression(&mut self, out: &mut StepOut, names: &[String]) -> Option<Vec<Point3>> {
        let k = self.ctx.ap_len as i64;
        out.checks.push(CheckRecord::integer(
            "progression length",
            names.len() as i64,
            "=",
            k,
            names.len() as i64 == k,
        ));
        let points: Option<Vec<Point3>> = names.iter().map(|n| self.point(out, n)).collect();
        let points = points?;
        self.conds(out, "unit progression", unit_ap_conditions(&points));
        Some(points)
    }

    /// Blue facts covering every progression point except the missing ones.
    fn covered(
        &mut self,
        out: &mut StepOut,
        names: &[String],
        points: &[Point3],
        missing: &[usize],
        blue: &[String],
    ) -> Vec<usize> {
        let present: Vec<usize> = (0..names.len()).filter(|i| !missing.contains(i)).collect();
        out.checks.push(CheckRecord::integer(
            "blue facts for the other points",
            blue.len() as i64,
            "=",
            present.len() as i64,
            blue.len() == present.len(),
        ));
        let mut premises = Vec::new();
        for (&i, b) in present.iter().zip(blue) {
            if let Some(f) = self.fact(out, b, Color::Blue) {
                let locus = self.facts[f].locus.clone();
                self.conds(out, &format!("{} in {b}", names[i]), membership_conditions(&points[i], &locus));
                premises.push(f);
            }
        }
        premises
    }

    fn neighbor_blue(&mut self, a: &NeighborBlue) -> StepOut {
        let mut out = StepOut::default();
        let d = &a.distance.value;
        out.checks.push(self.ctx.forbidden_check(d));
        for t in &a.targets {
            let Some(red) = self.fact(&mut out, &t.red, Color::Red) else { continue };
            let Locus::Point(r) = self.facts[red].locus.clone() else {
                out.fail(format!("{} is a point", t.red), self.facts[red].locus.kind_name(), "is", "point");
                continue;
            };
            let Some(target) = self.locus(&mut out, &t.locus) else { continue };
            self.at_distance(&mut out, &format!("{} from {}", t.locus, t.red), &target, &r, d);
            out.produced.push((t.locus.clone(), Color::Blue, vec![red]));
        }
        out
    }

    fn point_from_locus(&mut self, a: &PointFromLocus) -> StepOut {
        let mut out = StepOut::default();
        let (Some(p), Some(f)) = (self.point(&mut out, &a.point), self.any_fact(&mut out, &a.locus)) else {
            return out;
        };
        let locus = self.facts[f].locus.clone();
        self.conds(&mut out, &format!("{} in {}", a.point, a.locus), membership_conditions(&p, &locus));
        out.produced.push((a.point.clone(), self.facts[f].trace.color, vec![f]));
        out
    }

    fn ap_force_red(&mut self, a: &ApForceRed) -> StepOut {
        let mut out = StepOut::default();
        let Some(j) = a.ap.iter().position(|n| n == &a.missing) else {
            out.fail("missing point", a.missing.clone(), "in", "progression");
            return out;
        };
        let Some(points) = self.progression(&mut out, &a.ap) else { return out };
        let premises = self.covered(&mut out, &a.ap, &points, &[j], &a.blue);
        out.produced.push((a.missing.clone(), Color::Red, premises));
        out
    }

    fn ap_witness_blue(&mut self, a: &ApWitnessBlue) -> StepOut {
        let mut out = StepOut::default();
        let Some(target) = self.locus(&mut out, &a.target) else { return out };
        if !matches!(target, Locus::Point(_) | Locus::Circle { .. }) {
            out.fail("witness target kind", target.kind_name(), "in", "{point, circle}");
            return out;
        }
        let mut missing = Vec::new();
        for m in &a.missing {
            match a.ap.iter().position(|n| n == &m.point) {
                Some(j) if !missing.contains(&j) => missing.push(j),
                _ => out.fail("missing point", m.point.clone(), "in", "progression, once"),
            }
        }
        let Some(points) = self.progression(&mut out, &a.ap) else { return out };
        let premises = self.covered(&mut out, &a.ap, &points, &missing, &a.blue);
        for (m, &j) in a.missing.iter().zip(&missing) {
            out.checks.push(self.ctx.forbidden_check(&m.distance.value));
            self.at_distance(
                &mut out,
                &format!("{} from {}", a.target, m.point),
                &target,
                &points[j],
                &m.distance.value,
            );
        }
        out.produced.push((a.target.clone(), Color::Blue, premises));
        out
    }

    fn axis(&mut self, out: &mut StepOut, names: &[String]) -> Option<RotationGroup> {
        let g = match names {
            [p, q] => {
                let (p, q) = (self.point(out, p)?, self.point(out, q)?);
                RotationGroup::through(&p, &q)
            }
            [l] => RotationGroup::normal_to(&self.locus(out, l)?),
            _ => {
                out.fail("axis", format!("{} names", names.len()), "in", "{1, 2}");
                return None;
            }
        };
        match g {
            Ok(g) => Some(g),
            Err(e) => {
                out.fail("axis", e.to_string(), "is", "a line");
                None
            }
        }
    }

    /// Walks the derivation of `root`: invariant facts are cut points, derived
    /// non-invariant facts are traced to their premises, and a non-invariant
    /// hypothesis makes the lift unsound.
    fn lift_is_sound(&self, out: &mut StepOut, root: usize, g: &RotationGroup) {
        let mut seen = HashSet::new();
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            if !seen.insert(i) {
                continue;
            }
            let f = &self.facts[i];
            let label = format!("premise {} {} under rotation", f.trace.name, f.trace.color);
            if all_hold(&invariance_conditions(&f.locus, g)) {
                out.ok(label, "invariant", "is", "sound");
            } else if f.trace.origin == Origin::Hypothesis {
                out.fail(label, "non-invariant hypothesis", "is", "sound");
            } else {
                out.ok(label, "derived, traced to its premises", "is", "sound");
                stack.extend(f.trace.premises.iter().rev().copied());
            }
        }
    }

    fn orbit_lift(&mut self, a: &OrbitLift) -> StepOut {
        let mut out = StepOut::default();
        let Some(f) = self.any_fact(&mut out, &a.fact) else { return out };
        let Some(g) = self.axis(&mut out, &a.axis) else { return out };
        let source = self.facts[f].locus.clone();
        let image = match &source {
            Locus::Point(p) => Ok(orbit_of(p, &g)),
            Locus::Circle { .. } => sweep_of(&source, &g),
            other => {
                out.fail("liftable locus", other.kind_name(), "in", "{point, circle}");
                return out;
            }
        };
        let image = match image {
            Ok(l) => l,
            Err(e) => {
                out.fail("rotation image", e.to_string(), "is", "defined");
                return out;
            }
        };
        let Some(declared) = self.locus(&mut out, &a.image) else { return out };
        match same_locus_conditions(&image, &declared) {
            Some(c) => self.conds(&mut out, &format!("image equals {}", a.image), c),
            None => out.fail(format!("image equals {}", a.image), image.kind_name(), "is", declared.kind_name()),
        }
        self.lift_is_sound(&mut out, f, &g);
        out.produced.push((a.image.clone(), self.facts[f].trace.color, vec![f]));
        out
    }

    fn chord_contradiction(&mut self, a: &FactArg) -> StepOut {
        let mut out = StepOut::default();
        out.checks.push(self.ctx.forbidden_check(&TowerElem::one()));
        let Some(f) = self.fact(&mut out, &a.fact, Color::Red) else { return out };
        match unit_chord_condition(&self.facts[f].locus) {
            Ok(c) => self.conds(&mut out, &format!("{} has a unit chord", a.fact), vec![c]),
            Err(e) => out.fail("red circle", e.to_string(), "is", "circle"),
        }
        out.contradiction = true;
        out
    }

    fn disk_contradiction(&mut self, a: &FactArg) -> StepOut {
        let mut out = StepOut::default();
        let Some((r, source)) = self.ctx.no_blue_disk.clone() else {
            out.fail("no-blue-disk lemma", "none", "in", "dependencies");
            return out;
        };
        out.ok("no-blue-disk lemma", source, "in", "dependencies");
        let Some(f) = self.fact(&mut out, &a.fact, Color::Blue) else { return out };
        let label = format!("{} holds a disk of radius {r}", a.fact);
        let cond = match &self.facts[f].locus {
            Locus::Disk { sq_radius, .. } => Condition::new("squared radius", sq_radius.clone(), Relation::Ge, &r * &r),
            Locus::Annulus { r_inner, r_outer, .. } => {
                Condition::new("width", r_outer - r_inner, Relation::Ge, TowerElem::from_int(2) * &r)
            }
            other => {
                out.fail(label, other.kind_name(), "in", "{disk, annulus}");
                return out;
            }
        };
        self.conds(&mut out, &label, vec![cond]);
        out.contradiction = true;
        out
    }

    fn apply(&mut self, rule: &Rule) -> StepOut {
        match rule {
            Rule::NeighborBlue(a) => self.neighbor_blue(a),
            Rule::PointFromLocus(a) => self.point_from_locus(a),
            Rule::ApForceRed(a) => self.ap_force_red(a),
            Rule::ApWitnessBlue(a) => self.ap_witness_blue(a),
            Rule::OrbitLift(a) => self.orbit_lift(a),
            Rule::ChordContradiction(a) => self.chord_contradiction(a),
            Rule::DiskContradiction(a) => self.disk_contradiction(a),
            _ => {
                let mut out = StepOut::default();
                out.fail("rule kind", "lattice rule", "in", "euclidean certificate");
                out
            }
        }
    }

    fn add_fact(&mut self, name: String, color: Color, origin: Origin, premises: Vec<usize>, locus: Locus) {
        self.index.insert((name.clone(), color), self.facts.len());
        self.facts.push(Fact { trace: FactTrace { name, color, origin, premises }, locus });
    }
}

fn describe(produces: &Produces) -> String {
    match produces {
        Produces::Keyword(Keyword::Contradiction) => "contradiction".into(),
        Produces::Facts(f) => {
            let parts: Vec<String> = f.iter().map(|f| format!("{} {}", f.fact, f.color)).collect();
            format!("[{}]", parts.join(", "))
        }
    }
}

pub(crate) fn run(cert: &Certificate, ctx: &Context, digits: u32) -> Run {
    let mut c = Checker {
        ctx,
        digits,
        scene: cert.scene.0.iter().map(|(k, v)| (k.clone(), v.locus())).collect(),
        used: HashSet::new(),
        facts: Vec::new(),
        index: HashMap::new(),
    };
    let mut checks = Vec::new();
    for (name, locus) in &c.scene {
        checks.extend(
            validity_conditions(locus)
                .into_iter()
                .map(|cond| CheckRecord::from_condition(&cond.prefixed(&format!("scene {name}")), digits)),
        );
    }
    for h in &cert.context.hypotheses {
        match c.scene.get(&h.fact).cloned() {
            Some(locus) => {
                c.used.insert(h.fact.clone());
                c.add_fact(h.fact.clone(), h.color, Origin::Hypothesis, Vec::new(), locus);
            }
            None => checks.push(CheckRecord::structural("hypothesis", h.fact.clone(), "in", "scene", false)),
        }
    }
    let mut steps = Vec::new();
    let mut contradiction_at = None;
    let mut failed = false;
    for (i, step) in cert.steps.iter().enumerate() {
        if failed || contradiction_at.is_some() {
            steps.push(StepReport::skipped(step.rule.clone()));
            failed = true;
            continue;
        }
        let mut out = match parse_rule(&step.rule, cert.kind, &step.args) {
            Ok(rule) => c.apply(&rule),
            Err(e) => {
                let mut out = StepOut::default();
                out.fail("rule", e.to_string(), "is", "well-formed");
                out
            }
        };
        let derived = if out.contradiction {
            Produces::Keyword(Keyword::Contradiction)
        } else {
            Produces::Facts(out.produced.iter().map(|(n, col, _)| FactSpec { fact: n.clone(), color: *col }).collect())
        };
        out.expect(derived == step.produces, "produces", describe(&derived), "=", describe(&step.produces));
        let repeated: Vec<(String, Color)> = out
            .produced
            .iter()
            .filter(|(name, color, _)| c.index.contains_key(&(name.clone(), *color)))
            .map(|(name, color, _)| (name.clone(), *color))
            .collect();
        for (name, color) in repeated {
            out.fail(format!("{name} {color} is new"), name.clone(), "is", "not yet established");
        }
        if out.failed() {
            failed = true;
        } else {
            for (name, color, premises) in std::mem::take(&mut out.produced) {
                let locus = c.scene[&name].clone();
                c.add_fact(name, color, Origin::Step(i), premises, locus);
            }
            if out.contradiction {
                contradiction_at = Some(i);
            }
        }
        steps.push(StepReport::new(step.rule.clone(), out.checks));
    }
    if !failed {
        for name in c.scene.keys().filter(|n| !c.used.contains(*n)) {
            checks.push(CheckRecord::structural(format!("scene entry {name}"), name.clone(), "is", "used", false));
        }
    }
    let facts = c.facts.into_iter().map(|f| f.trace).collect();
    Run { checks, steps, contradiction_at, facts }
}
