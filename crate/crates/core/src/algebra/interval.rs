//! Dyadic interval enclosures for decimal reporting.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::tower::{Node, Rat, Tower, TowerElem};

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

fn ceil_sqrt(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &r * &r == *n {
        r
    } else {
        r + 1
    }
}

/// Integers `(lo, hi)` with `lo ≤ x·2^prec ≤ hi`.
pub(crate) fn enclose(t: &Tower, x: &Node, prec: u32) -> (BigInt, BigInt) {
    let scale = BigInt::from(1) << prec;
    match x {
        Node::Rat(q) => {
            let n = q.numer() * &scale;
            (floor_div(&n, q.denom()), ceil_div(&n, q.denom()))
        }
        Node::Ext(e) => {
            let (alo, ahi) = enclose(t, &e.a, prec);
            let (blo, bhi) = enclose(t, &e.b, prec);
            let (rlo, rhi) = enclose(t, t.radicand(e.level), prec);
            let zero = BigInt::zero();
            let rlo = rlo.max(zero.clone());
            let rhi = rhi.max(zero);
            // √(r/2^p)·2^p = √(r·2^p)
            let slo = (rlo << prec).sqrt();
            let shi = ceil_sqrt(&(rhi << prec));
            let products = [&blo * &slo, &blo * &shi, &bhi * &slo, &bhi * &shi];
            let pmin = products.iter().min().expect("nonempty");
            let pmax = products.iter().max().expect("nonempty");
            (alo + floor_div(pmin, &scale), ahi + ceil_div(pmax, &scale))
        }
    }
}

/// Rational bounds `lo ≤ x ≤ hi` with `hi − lo < 10^-digits`.
pub fn bounds(x: &TowerElem, digits: u32) -> (Rat, Rat) {
    let ten = BigInt::from(10).pow(digits);
    let mut prec = 64 + 4 * digits;
    loop {
        let (lo, hi) = enclose(x.tower(), x.node(), prec);
        let scale = BigInt::from(1) << prec;
        if (&hi - &lo) * &ten < scale {
            return (Rat::new(lo, scale.clone()), Rat::new(hi, scale));
        }
        prec *= 2;
    }
}

/// Decimal string with exactly `digits` fractional digits, truncated toward
/// zero. The final digit is settled by an exact sign test, so the result never
/// depends on where an enclosure happened to land.
pub fn approx_decimal(x: &TowerElem, digits: u32) -> String {
    let sign = x.sign();
    if sign == Ordering::Equal {
        return format_scaled(false, &BigInt::zero(), digits);
    }
    let ax = x.abs();
    let ten = BigInt::from(10).pow(digits);
    let (lo, _) = bounds(&ax, digits);
    let m = (lo * Rat::from_integer(ten.clone())).floor().to_integer();
    // floor(|x|·10^d) is m or m + 1
    let candidate: BigInt = &m + 1;
    let test =
        &ax * TowerElem::from_rat(Rat::from_integer(ten)) - TowerElem::from_rat(Rat::from_integer(candidate.clone()));
    let floor = if test.sign() != Ordering::Less { candidate } else { m };
    let floor = if floor.is_negative() { BigInt::zero() } else { floor };
    format_scaled(sign == Ordering::Less && !floor.is_zero(), &floor, digits)
}

fn format_scaled(negative: bool, n: &BigInt, digits: u32) -> String {
    let s = n.to_string();
    let d = digits as usize;
    let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if negative { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}
