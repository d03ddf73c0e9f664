//! Colourings of the unit triangular lattice: propagation, exhaustive search,
//! and the period-5 pattern.

mod gadget;
mod pattern;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::color::Color;

pub use gadget::{
    builtin_gadget, fig9_points, forcing, forcing_check, verify_gadget, Expectation, Forcing, Gadget, GadgetOutcome,
    GADGET_NAMES,
};
pub use pattern::{check_pattern, check_periodic, pattern_mod5, red_pairs_at, PatternViolation};

/// Coordinates over the basis u = (1, 0), v = (1/2, √3/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    pub fn offset(self, da: i64, db: i64) -> Self {
        LatticePoint::new(self.a + da, self.b + db)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

pub fn sqdist_lattice(p: LatticePoint, q: LatticePoint) -> i64 {
    let (da, db) = (p.a - q.a, p.b - q.b);
    da * da + da * db + db * db
}

/// The three unit steps; together with their negatives these are all lattice
/// vectors of squared norm 1.
pub const DIRECTIONS: [(i64, i64); 3] = [(1, 0), (0, 1), (1, -1)];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("seed point {0} is outside the patch")]
    SeedOutsidePatch(LatticePoint),
    #[error("enumeration limit must be at least 1")]
    ZeroLimit,
    #[error("blue progression length must be at least 2, got {0}")]
    BadApLen(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRules {
    /// Forbidden red squared distances, each with the ids that justify it.
    pub forbidden_red_sq_dists: BTreeMap<i64, Vec<String>>,
    pub ap_len: usize,
}

impl LatticeRules {
    pub fn new(sq_dists: &[i64], ap_len: usize) -> Self {
        LatticeRules { forbidden_red_sq_dists: sq_dists.iter().map(|&d| (d, Vec::new())).collect(), ap_len }
    }

    pub fn with_source(mut self, sq_dist: i64, source: &str) -> Self {
        self.forbidden_red_sq_dists.entry(sq_dist).or_default().push(source.to_string());
        self
    }

    pub fn sq_dists(&self) -> impl Iterator<Item = i64> + '_ {
        self.forbidden_red_sq_dists.keys().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    points: BTreeSet<LatticePoint>,
    rhombus: Option<[(i64, i64); 2]>,
}

impl Patch {
    /// All points with `a ∈ [a0, a1]` and `b ∈ [b0, b1]`.
    pub fn rhombus(a: (i64, i64), b: (i64, i64)) -> Self {
        let points = (a.0..=a.1).flat_map(|x| (b.0..=b.1).map(move |y| LatticePoint::new(x, y))).collect();
        Patch { points, rhombus: Some([a, b]) }
    }

    pub fn radius(r: i64) -> Self {
        Self::rhombus((-r, r), (-r, r))
    }

    pub fn from_points(points: impl IntoIterator<Item = LatticePoint>) -> Self {
        Patch { points: points.into_iter().collect(), rhombus: None }
    }

    pub fn points(&self) -> &BTreeSet<LatticePoint> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.contains(&p)
    }

    pub fn rhombus_bounds(&self) -> Option<[(i64, i64); 2]> {
        self.rhombus
    }

    /// The rhombus shrunk by `margin` on every side; empty for explicit sets.
    pub fn core(&self, margin: i64) -> Vec<LatticePoint> {
        let Some([(a0, a1), (b0, b1)]) = self.rhombus else {
            return Vec::new();
        };
        self.points
            .iter()
            .copied()
            .filter(|p| p.a >= a0 + margin && p.a <= a1 - margin && p.b >= b0 + margin && p.b <= b1 - margin)
            .collect()
    }
}

pub type LatticeColoring = BTreeMap<LatticePoint, Color>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Fixpoint(LatticeColoring),
    /// A point was forced both ways.
    Contradiction(LatticePoint),
}

impl Propagation {
    pub fn fixpoint(&self) -> Option<&LatticeColoring> {
        match self {
            Propagation::Fixpoint(c) => Some(c),
            Propagation::Contradiction(_) => None,
        }
    }
}

/// Precomputed neighbour and window lists for one patch and rule set.
struct Engine {
    points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    neighbours: Vec<Vec<usize>>,
    windows: Vec<Vec<usize>>,
    windows_of: Vec<Vec<usize>>,
}

type State = Vec<Option<Color>>;

impl Engine {
    fn new(patch: &Patch, rules: &LatticeRules) -> Result<Self, LatticeError> {
        if rules.ap_len < 2 {
            return Err(LatticeError::BadApLen(rules.ap_len));
        }
        let points: Vec<LatticePoint> = patch.points.iter().copied().collect();
        let index: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let dists: BTreeSet<i64> = rules.sq_dists().collect();
        let max = dists.iter().copied().max().unwrap_or(0);
        // a² + ab + b² ≥ (a² + b²)/2, so offsets are bounded by √(2·max)
        let reach = (1..).find(|r: &i64| r * r > 2 * max).unwrap_or(1);
        let mut offsets = Vec::new();
        for da in -reach..=reach {
            for db in -reach..=reach {
                let d = da * da + da * db + db * db;
                if d > 0 && dists.contains(&d) {
                    offsets.push((da, db));
                }
            }
        }
        let neighbours = points
            .iter()
            .map(|p| offsets.iter().filter_map(|&(da, db)| index.get(&p.offset(da, db)).copied()).collect())
            .collect();
        let k = rules.ap_len as i64;
        let mut windows = Vec::new();
        let mut windows_of = vec![Vec::new(); points.len()];
        for p in &points {
            for (da, db) in DIRECTIONS {
                let w: Option<Vec<usize>> = (0..k).map(|i| index.get(&p.offset(i * da, i * db)).copied()).collect();
                if let Some(w) = w {
                    for &i in &w {
                        windows_of[i].push(windows.len());
                    }
                    windows.push(w);
                }
            }
        }
        Ok(Engine { points, index, neighbours, windows, windows_of })
    }

    fn seed_state(&self, seed: &LatticeColoring) -> Result<(State, Vec<usize>), LatticeError> {
        let mut state = vec![None; self.points.len()];
        let mut pending = Vec::new();
        for (&p, &c) in seed {
            let &i = self.index.get(&p).ok_or(LatticeError::SeedOutsidePatch(p))?;
            state[i] = Some(c);
            pending.push(i);
        }
        Ok((state, pending))
    }

    /// Applies both rules until nothing changes. `choose` picks which pending
    /// point to process next; the fixpoint does not depend on it.
    fn run(
        &self,
        state: &mut State,
        mut pending: Vec<usize>,
        choose: &mut dyn FnMut(usize) -> usize,
    ) -> Result<(), usize> {
        let assign = |state: &mut State, pending: &mut Vec<usize>, i: usize, c: Color| -> Result<(), usize> {
            match state[i] {
                Some(old) if old == c => Ok(()),
                Some(_) => Err(i),
                None => {
                    state[i] = Some(c);
                    pending.push(i);
                    Ok(())
                }
            }
        };
        while !pending.is_empty() {
            let pick = choose(pending.len());
            let i = pending.swap_remove(pick);
            if state[i] == Some(Color::Red) {
                for &j in &self.neighbours[i] {
                    assign(state, &mut pending, j, Color::Blue)?;
                }
            }
            for &w in &self.windows_of[i] {
                let window = &self.windows[w];
                let blues = window.iter().filter(|&&j| state[j] == Some(Color::Blue)).count();
                if blues == window.len() {
                    return Err(i);
                }
                if blues + 1 == window.len() {
                    if let Some(&j) = window.iter().find(|&&j| state[j].is_none()) {
                        assign(state, &mut pending, j, Color::Red)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn coloring(&self, state: &State) -> LatticeColoring {
        self.points.iter().zip(state).filter_map(|(&p, c)| c.map(|c| (p, c))).collect()
    }

    fn propagate(
        &self,
        seed: &LatticeColoring,
        choose: &mut dyn FnMut(usize) -> usize,
    ) -> Result<Propagation, LatticeError> {
        let (mut state, pending) = self.seed_state(seed)?;
        Ok(match self.run(&mut state, pending, choose) {
            Ok(()) => Propagation::Fixpoint(self.coloring(&state)),
            Err(i) => Propagation::Contradiction(self.points[i]),
        })
    }
}

fn fifo(n: usize) -> usize {
    n - 1
}

/// Least fixpoint of "red forces blue at forbidden squared distances" and
/// "k − 1 blues in a k-window force the last point red".
pub fn propagate(patch: &Patch, seed: &LatticeColoring, rules: &LatticeRules) -> Result<Propagation, LatticeError> {
    Engine::new(patch, rules)?.propagate(seed, &mut fifo)
}

/// [`propagate`] with a caller-chosen processing order.
pub fn propagate_with_order(
    patch: &Patch,
    seed: &LatticeColoring,
    rules: &LatticeRules,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<Propagation, LatticeError> {
    Engine::new(patch, rules)?.propagate(seed, choose)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Total colourings in canonical order.
    pub colorings: Vec<LatticeColoring>,
    /// Search nodes visited.
    pub nodes: usize,
    /// More colourings exist than the limit allowed.
    pub truncated: bool,
}

/// All total colourings of the patch extending `seed` that violate no rule.
/// Branches on the lexicographically first undecided point, blue first.
pub fn enumerate(
    patch: &Patch,
    seed: &LatticeColoring,
    rules: &LatticeRules,
    limit: usize,
) -> Result<Enumeration, LatticeError> {
    if limit == 0 {
        return Err(LatticeError::ZeroLimit);
    }
    let engine = Engine::new(patch, rules)?;
    let (state, pending) = engine.seed_state(seed)?;
    let mut out = Enumeration { colorings: Vec::new(), nodes: 0, truncated: false };
    search(&engine, state, pending, limit, &mut out);
    Ok(out)
}

fn search(engine: &Engine, mut state: State, pending: Vec<usize>, limit: usize, out: &mut Enumeration) {
    if out.truncated {
        return;
    }
    out.nodes += 1;
    if engine.run(&mut state, pending, &mut fifo).is_err() {
        return;
    }
    match state.iter().position(Option::is_none) {
        None => {
            if out.colorings.len() == limit {
                out.truncated = true;
            } else {
                out.colorings.push(engine.coloring(&state));
            }
        }
        Some(i) => {
            for c in [Color::Blue, Color::Red] {
                let mut next = state.clone();
                next[i] = Some(c);
                search(engine, next, vec![i], limit, out);
            }
        }
    }
}

/// A point of the core where `coloring` disagrees with `pattern`.
pub fn core_mismatch(
    coloring: &LatticeColoring,
    patch: &Patch,
    margin: i64,
    pattern: impl Fn(LatticePoint) -> Color,
) -> Option<LatticePoint> {
    patch.core(margin).into_iter().find(|&p| coloring.get(&p) != Some(&pattern(p)))
}
