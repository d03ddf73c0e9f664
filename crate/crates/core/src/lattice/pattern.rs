use std::fmt;

use crate::color::Color;

use super::{sqdist_lattice, LatticePoint, LatticeRules, DIRECTIONS};

/// Red exactly on the residue class `2a + b ≡ 0 (mod 5)`.
pub fn pattern_mod5(p: LatticePoint) -> Color {
    if (2 * p.a + p.b).rem_euclid(5) == 0 {
        Color::Red
    } else {
        Color::Blue
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternViolation {
    RedPair { p: LatticePoint, q: LatticePoint, sq_dist: i64 },
    BlueWindow { start: LatticePoint, direction: (i64, i64), len: usize },
}

impl fmt::Display for PatternViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternViolation::RedPair { p, q, sq_dist } => {
                write!(f, "red pair {p} {q} at squared distance {sq_dist}")
            }
            PatternViolation::BlueWindow { start, direction, len } => {
                write!(f, "{len} blue points from {start} along ({}, {})", direction.0, direction.1)
            }
        }
    }
}

fn offsets_at(sq_dist: i64) -> Vec<(i64, i64)> {
    let reach = (1..).find(|r: &i64| r * r > 2 * sq_dist).unwrap_or(1);
    let mut out = Vec::new();
    for da in -reach..=reach {
        for db in -reach..=reach {
            if da * da + da * db + db * db == sq_dist {
                out.push((da, db));
            }
        }
    }
    out
}

fn domain(period: i64) -> impl Iterator<Item = LatticePoint> {
    (0..period).flat_map(move |a| (0..period).map(move |b| LatticePoint::new(a, b)))
}

/// Checks a colouring that is periodic with `period` in both coordinates over
/// one fundamental domain, which covers the whole infinite colouring.
pub fn check_periodic(
    pattern: impl Fn(LatticePoint) -> Color,
    period: i64,
    sq_dists: &[i64],
    ap_len: usize,
) -> Result<(), PatternViolation> {
    for &d in sq_dists {
        if let Some((p, q)) = red_pairs_at(&pattern, period, d).into_iter().next() {
            return Err(PatternViolation::RedPair { p, q, sq_dist: d });
        }
    }
    for start in domain(period) {
        for direction in DIRECTIONS {
            let has_red =
                (0..ap_len as i64).any(|i| pattern(start.offset(i * direction.0, i * direction.1)) == Color::Red);
            if !has_red {
                return Err(PatternViolation::BlueWindow { start, direction, len: ap_len });
            }
        }
    }
    Ok(())
}

/// Red pairs at the given squared distance with the first point in the
/// fundamental domain.
pub fn red_pairs_at(
    pattern: impl Fn(LatticePoint) -> Color,
    period: i64,
    sq_dist: i64,
) -> Vec<(LatticePoint, LatticePoint)> {
    let offsets = offsets_at(sq_dist);
    let mut out = Vec::new();
    for p in domain(period).filter(|&p| pattern(p) == Color::Red) {
        for &(da, db) in &offsets {
            let q = p.offset(da, db);
            debug_assert_eq!(sqdist_lattice(p, q), sq_dist);
            if pattern(q) == Color::Red {
                out.push((p, q));
            }
        }
    }
    out
}

/// [`check_periodic`] for the period-5 pattern under the given rules.
pub fn check_pattern(rules: &LatticeRules, ap_len: usize) -> bool {
    let dists: Vec<i64> = rules.sq_dists().collect();
    check_periodic(pattern_mod5, 5, &dists, ap_len).is_ok()
}
