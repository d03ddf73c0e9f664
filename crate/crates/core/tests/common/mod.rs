#![allow(dead_code)]

pub mod mutation;
pub mod oracle;

use ramsey_core::algebra::AlgExpr;
use rand::rngs::StdRng;
use rand::Rng;

/// Radicands of one to three nested square-root levels.
pub const RADICANDS: [&str; 8] =
    ["2", "3", "5", "7", "1 + sqrt(2)", "6 + 3 * sqrt(3)", "2 + sqrt(3 + sqrt(2))", "5 - sqrt(7)"];

fn small_rational(rng: &mut StdRng) -> AlgExpr {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=6);
    AlgExpr::parse(&format!("{}/{d}", n.abs())).map(|e| if n < 0 { AlgExpr::Neg(Box::new(e)) } else { e }).unwrap()
}

fn atom(rng: &mut StdRng) -> AlgExpr {
    if rng.gen_bool(0.3) {
        return small_rational(rng);
    }
    let r = RADICANDS[rng.gen_range(0..RADICANDS.len())];
    let root = AlgExpr::Sqrt(Box::new(AlgExpr::parse(r).unwrap()));
    AlgExpr::Mul(Box::new(small_rational(rng)), Box::new(root))
}

/// A random expression over small rationals and the radicand pool, built
/// from up to `terms` atoms with +, −, × and occasionally ÷.
pub fn random_expr(rng: &mut StdRng, terms: usize) -> AlgExpr {
    let mut e = atom(rng);
    for _ in 1..rng.gen_range(1..=terms) {
        let b = Box::new(atom(rng));
        e = match rng.gen_range(0..10) {
            0..=3 => AlgExpr::Add(Box::new(e), b),
            4..=6 => AlgExpr::Sub(Box::new(e), b),
            7..=8 => AlgExpr::Mul(Box::new(e), b),
            _ => AlgExpr::Div(Box::new(e), b),
        };
    }
    e
}
