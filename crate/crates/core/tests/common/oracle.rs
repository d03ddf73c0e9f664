//! Interval evaluation of expression trees with dyadic outward rounding.
//! Shares nothing with the tower arithmetic it is used to check.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use ramsey_core::algebra::AlgExpr;

#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn scale(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn down(x: &BigRational, bits: u32) -> BigRational {
    let s = scale(bits);
    BigRational::new((x * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

fn up(x: &BigRational, bits: u32) -> BigRational {
    let s = scale(bits);
    BigRational::new((x * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    n.sqrt()
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let s = isqrt_floor(n);
    if &(&s * &s) < n {
        s + 1
    } else {
        s
    }
}

fn sqrt_down(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let n = (x * BigRational::from_integer(scale(2 * bits))).floor().to_integer();
    BigRational::new(isqrt_floor(&n), scale(bits))
}

fn sqrt_up(x: &BigRational, bits: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let n = (x * BigRational::from_integer(scale(2 * bits))).ceil().to_integer();
    BigRational::new(isqrt_ceil(&n), scale(bits))
}

fn hull(vals: [BigRational; 4], bits: u32) -> Interval {
    let lo = vals.iter().min().unwrap();
    let hi = vals.iter().max().unwrap();
    Interval { lo: down(lo, bits), hi: up(hi, bits) }
}

/// An enclosure of the value of `e`, or `None` when a divisor interval
/// straddles zero or a square root's argument is certainly negative.
pub fn eval(e: &AlgExpr, bits: u32) -> Option<Interval> {
    Some(match e {
        AlgExpr::Rational(q) => Interval { lo: down(q, bits), hi: up(q, bits) },
        AlgExpr::Neg(a) => {
            let a = eval(a, bits)?;
            Interval { lo: -a.hi, hi: -a.lo }
        }
        AlgExpr::Add(a, b) => {
            let (a, b) = (eval(a, bits)?, eval(b, bits)?);
            Interval { lo: a.lo + b.lo, hi: a.hi + b.hi }
        }
        AlgExpr::Sub(a, b) => {
            let (a, b) = (eval(a, bits)?, eval(b, bits)?);
            Interval { lo: a.lo - b.hi, hi: a.hi - b.lo }
        }
        AlgExpr::Mul(a, b) => {
            let (a, b) = (eval(a, bits)?, eval(b, bits)?);
            hull([&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi], bits)
        }
        AlgExpr::Div(a, b) => {
            let (a, b) = (eval(a, bits)?, eval(b, bits)?);
            if !b.lo.is_positive() && !b.hi.is_negative() {
                return None;
            }
            let (r0, r1) = (b.hi.recip(), b.lo.recip());
            hull([&a.lo * &r0, &a.lo * &r1, &a.hi * &r0, &a.hi * &r1], bits)
        }
        AlgExpr::Sqrt(a) => {
            let a = eval(a, bits)?;
            if a.hi.is_negative() {
                return None;
            }
            Interval { lo: sqrt_down(&a.lo, bits), hi: sqrt_up(&a.hi, bits) }
        }
    })
}

/// The sign of `e` once its enclosure is narrower than 10^-digits, or `None`
/// if the enclosure still contains zero (or never gets that narrow).
pub fn sign(e: &AlgExpr, digits: u32) -> Option<Ordering> {
    let width = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize));
    let mut bits = 128;
    while bits <= 8192 {
        if let Some(iv) = eval(e, bits) {
            if &iv.hi - &iv.lo < width {
                return if iv.lo.is_positive() {
                    Some(Ordering::Greater)
                } else if iv.hi.is_negative() {
                    Some(Ordering::Less)
                } else {
                    None
                };
            }
        }
        bits *= 2;
    }
    None
}

/// Decimal digits of `e` truncated toward zero; `None` if the enclosure
/// straddles a digit boundary.
pub fn truncated_decimal(e: &AlgExpr, digits: u32) -> Option<String> {
    let ten = BigRational::from_integer(num_traits::pow(BigInt::from(10), digits as usize));
    let iv = eval(e, 64 + 4 * digits)?;
    let (lo, hi) = ((&iv.lo * &ten).trunc(), (&iv.hi * &ten).trunc());
    if lo != hi {
        return None;
    }
    let n = lo.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{s:0>width$}", width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    Some(format!("{}{int}.{frac}", if neg { "-" } else { "" }))
}

pub fn expr(text: &str) -> AlgExpr {
    AlgExpr::parse(text).expect("test expression parses")
}
