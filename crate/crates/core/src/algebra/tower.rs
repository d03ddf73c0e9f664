//! Real numbers in towers of real quadratic extensions of the rationals.
//!
//! An element is a tree of `a + b·√r` nodes over a shared tower of radicands
//! `r₁, …, rₙ`, where each `rₖ` is itself an element over `r₁, …, rₖ₋₁` and is
//! known to be nonnegative. Towers are not required to be canonical: a radicand
//! may be a perfect square in its subfield. [`TowerElem::sign`] is exact anyway,
//! so equality and ordering are always decided by the sign of a difference and
//! never by comparing representations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expr::AlgExpr;
use super::AlgebraError;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Rat(Rat),
    Ext(Box<Ext>),
}

/// `a + b·√r[level]`, where `a` and `b` only use levels below `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Ext {
    pub(crate) level: usize,
    pub(crate) a: Node,
    pub(crate) b: Node,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Tower {
    radicands: Vec<Node>,
    // radicand_zero[k] caches sign(radicands[k]) == 0
    radicand_zero: Vec<bool>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.radicands == other.radicands
    }
}

impl Tower {
    pub(crate) fn len(&self) -> usize {
        self.radicands.len()
    }

    pub(crate) fn radicand(&self, level: usize) -> &Node {
        &self.radicands[level]
    }

    fn push(&mut self, radicand: Node) -> usize {
        let zero = sign(self, &radicand) == Ordering::Equal;
        self.radicands.push(radicand);
        self.radicand_zero.push(zero);
        self.radicands.len() - 1
    }

    fn is_prefix_of(&self, other: &Tower) -> bool {
        self.len() <= other.len() && self.radicands[..] == other.radicands[..self.len()]
    }

    /// Finds a level whose radicand equals `r`, structurally first and then by
    /// value.
    fn find_radicand(&self, r: &Node) -> Option<usize> {
        self.radicands
            .iter()
            .position(|s| s == r)
            .or_else(|| (0..self.len()).find(|&k| sign(self, &sub(&self.radicands[k], r)) == Ordering::Equal))
    }
}

impl Node {
    fn zero() -> Node {
        Node::Rat(Rat::zero())
    }

    fn one() -> Node {
        Node::Rat(Rat::one())
    }

    fn is_structural_zero(&self) -> bool {
        matches!(self, Node::Rat(r) if r.is_zero())
    }

    fn level(&self) -> Option<usize> {
        match self {
            Node::Rat(_) => None,
            Node::Ext(e) => Some(e.level),
        }
    }

    fn ext(level: usize, a: Node, b: Node) -> Node {
        if b.is_structural_zero() {
            a
        } else {
            Node::Ext(Box::new(Ext { level, a, b }))
        }
    }

    fn generator(level: usize) -> Node {
        Node::ext(level, Node::zero(), Node::one())
    }
}

pub(crate) fn add(x: &Node, y: &Node) -> Node {
    match (x, y) {
        (Node::Rat(p), Node::Rat(q)) => Node::Rat(p + q),
        (Node::Ext(e), _) if x.level() > y.level() => Node::ext(e.level, add(&e.a, y), e.b.clone()),
        (_, Node::Ext(f)) if y.level() > x.level() => Node::ext(f.level, add(x, &f.a), f.b.clone()),
        (Node::Ext(e), Node::Ext(f)) => Node::ext(e.level, add(&e.a, &f.a), add(&e.b, &f.b)),
        _ => unreachable!("levels are totally ordered"),
    }
}

pub(crate) fn neg(x: &Node) -> Node {
    match x {
        Node::Rat(p) => Node::Rat(-p),
        Node::Ext(e) => Node::ext(e.level, neg(&e.a), neg(&e.b)),
    }
}

pub(crate) fn sub(x: &Node, y: &Node) -> Node {
    add(x, &neg(y))
}

pub(crate) fn mul(t: &Tower, x: &Node, y: &Node) -> Node {
    match (x, y) {
        (Node::Rat(p), Node::Rat(q)) => Node::Rat(p * q),
        (Node::Ext(e), _) if x.level() > y.level() => Node::ext(e.level, mul(t, &e.a, y), mul(t, &e.b, y)),
        (_, Node::Ext(f)) if y.level() > x.level() => Node::ext(f.level, mul(t, x, &f.a), mul(t, x, &f.b)),
        (Node::Ext(e), Node::Ext(f)) => {
            let r = t.radicand(e.level);
            let bb = mul(t, &e.b, &f.b);
            let a = add(&mul(t, &e.a, &f.a), &mul(t, &bb, r));
            let b = add(&mul(t, &e.a, &f.b), &mul(t, &e.b, &f.a));
            Node::ext(e.level, a, b)
        }
        _ => unreachable!("levels are totally ordered"),
    }
}

/// Exact sign, recursive on the tower level.
///
/// For `a + b√d`: equal signs of `a` and `b` decide it; opposite signs are
/// settled by the sign of `a² − b²d`.
pub(crate) fn sign(t: &Tower, x: &Node) -> Ordering {
    match x {
        Node::Rat(p) => p.cmp(&Rat::zero()),
        Node::Ext(e) => {
            let sb = sign(t, &e.b);
            if sb == Ordering::Equal || t.radicand_zero[e.level] {
                return sign(t, &e.a);
            }
            let sa = sign(t, &e.a);
            if sa == Ordering::Equal {
                return sb;
            }
            if sa == sb {
                return sa;
            }
            let d = t.radicand(e.level);
            let norm = sub(&mul(t, &e.a, &e.a), &mul(t, &mul(t, &e.b, &e.b), d));
            match sign(t, &norm) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
            }
        }
    }
}

/// Multiplicative inverse by conjugate rationalization, or `None` for zero.
pub(crate) fn inv(t: &Tower, x: &Node) -> Option<Node> {
    match x {
        Node::Rat(p) if p.is_zero() => None,
        Node::Rat(p) => Some(Node::Rat(p.recip())),
        Node::Ext(e) => {
            if t.radicand_zero[e.level] || sign(t, &e.b) == Ordering::Equal {
                return inv(t, &e.a);
            }
            let d = t.radicand(e.level);
            let norm = sub(&mul(t, &e.a, &e.a), &mul(t, &mul(t, &e.b, &e.b), d));
            if sign(t, &norm) == Ordering::Equal {
                // a² = b²d, so √d = |a/b| already lives one level down and the
                // element collapses to 2a or 0.
                let sa = sign(t, &e.a);
                return if sa == sign(t, &e.b) { inv(t, &add(&e.a, &e.a)) } else { None };
            }
            let ni = inv(t, &norm).expect("norm has nonzero sign");
            Some(Node::ext(e.level, mul(t, &e.a, &ni), neg(&mul(t, &e.b, &ni))))
        }
    }
}

/// Re-expresses `x` (over some other tower) in `t`, mapping that tower's level
/// `j` onto `t`'s level `map[j]`.
fn substitute(t: &Tower, x: &Node, map: &[usize]) -> Node {
    match x {
        Node::Rat(_) => x.clone(),
        Node::Ext(e) => {
            let a = substitute(t, &e.a, map);
            let b = substitute(t, &e.b, map);
            add(&a, &mul(t, &b, &Node::generator(map[e.level])))
        }
    }
}

/// Merges `y` into `x`, adjoining `y`'s missing radicands in order.
fn merge(x: &Tower, y: &Tower) -> (Tower, Vec<usize>) {
    let mut t = x.clone();
    let mut map = Vec::with_capacity(y.len());
    for r in &y.radicands {
        let lifted = substitute(&t, r, &map);
        let level = match t.find_radicand(&lifted) {
            Some(k) => k,
            None => t.push(lifted),
        };
        map.push(level);
    }
    (t, map)
}

/// Splits a positive rational `q` into `c·√m` with integer `m` stripped of
/// small square factors. `m = 1` means `q` is a perfect square.
fn rational_sqrt_parts(q: &Rat) -> (Rat, BigInt) {
    let n = q.numer() * q.denom();
    let mut rest = n;
    let mut square = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest && p < BigInt::from(10_000u32) {
        let pp = &p * &p;
        while rest.is_multiple_of(&pp) {
            rest /= &pp;
            square *= &p;
        }
        p += 1u32;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
        rest = BigInt::one();
    }
    (Rat::new(square, q.denom().clone()), rest)
}

/// An exact real number in a tower of real quadratic extensions of ℚ.
///
/// Values are immutable; towers are shared behind an [`Arc`], so elements are
/// cheap to clone and safe to send between threads. Equality and ordering are
/// by value.
#[derive(Clone)]
pub struct TowerElem {
    tower: Arc<Tower>,
    node: Node,
}

impl TowerElem {
    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        TowerElem { tower: Arc::new(Tower::default()), node: Node::Rat(q) }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rat(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    pub(crate) fn tower(&self) -> &Tower {
        &self.tower
    }

    pub(crate) fn node(&self) -> &Node {
        &self.node
    }

    /// Number of radicands in this element's tower context.
    pub fn tower_height(&self) -> usize {
        self.tower.len()
    }

    /// The rational value when the representation carries no radical.
    pub fn as_rational(&self) -> Option<&Rat> {
        match &self.node {
            Node::Rat(q) => Some(q),
            Node::Ext(_) => None,
        }
    }

    /// Exact sign of the represented real.
    pub fn sign(&self) -> Ordering {
        sign(&self.tower, &self.node)
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Lifts both operands to a common tower.
    fn unify(&self, other: &TowerElem) -> (Arc<Tower>, Node, Node) {
        if Arc::ptr_eq(&self.tower, &other.tower) || other.tower.is_prefix_of(&self.tower) {
            return (self.tower.clone(), self.node.clone(), other.node.clone());
        }
        if self.tower.is_prefix_of(&other.tower) {
            return (other.tower.clone(), self.node.clone(), other.node.clone());
        }
        let (t, map) = merge(&self.tower, &other.tower);
        let y = substitute(&t, &other.node, &map);
        (Arc::new(t), self.node.clone(), y)
    }

    pub fn checked_div(&self, other: &TowerElem) -> Result<TowerElem, AlgebraError> {
        let (t, x, y) = self.unify(other);
        let yi = inv(&t, &y).ok_or(AlgebraError::DivisionByZero)?;
        let node = mul(&t, &x, &yi);
        Ok(TowerElem { tower: t, node })
    }

    pub fn recip(&self) -> Result<TowerElem, AlgebraError> {
        TowerElem::one().checked_div(self)
    }

    /// Nonnegative square root, adjoining a radicand to the tower when needed.
    ///
    /// Rational radicands are stripped of small square factors first; other
    /// radicands are reused when the tower already holds an equal one.
    pub fn sqrt(&self) -> Result<TowerElem, AlgebraError> {
        match self.sign() {
            Ordering::Less => return Err(AlgebraError::NegativeSqrt),
            Ordering::Equal => return Ok(TowerElem { tower: self.tower.clone(), node: Node::zero() }),
            Ordering::Greater => {}
        }
        let (coef, radicand) = match &self.node {
            Node::Rat(q) => {
                let (c, m) = rational_sqrt_parts(q);
                if m.is_one() {
                    return Ok(TowerElem { tower: self.tower.clone(), node: Node::Rat(c) });
                }
                (c, Node::Rat(Rat::from_integer(m)))
            }
            Node::Ext(_) => (Rat::one(), self.node.clone()),
        };
        let (tower, level) = match self.tower.find_radicand(&radicand) {
            Some(k) => (self.tower.clone(), k),
            None => {
                let mut t = (*self.tower).clone();
                let k = t.push(radicand);
                (Arc::new(t), k)
            }
        };
        let node = Node::ext(level, Node::zero(), Node::Rat(coef));
        Ok(TowerElem { tower, node })
    }

    /// Radical expression denoting this value, built from its representation.
    pub fn to_expr(&self) -> AlgExpr {
        node_expr(&self.tower, &self.node)
    }

    /// Decimal rendering truncated toward zero to `digits` fractional digits.
    /// Reporting only; exact checks never look at it.
    pub fn approx_decimal(&self, digits: u32) -> String {
        super::interval::approx_decimal(self, digits)
    }

    /// `f64` approximation for diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.approx_decimal(17).parse::<f64>().unwrap_or(f64::NAN)
    }
}

fn node_expr(t: &Tower, x: &Node) -> AlgExpr {
    match x {
        Node::Rat(q) => AlgExpr::rational(q.clone()),
        Node::Ext(e) => {
            let root = AlgExpr::Sqrt(Box::new(node_expr(t, t.radicand(e.level))));
            let (negative, magnitude) = match &e.b {
                Node::Rat(q) if q.is_negative() => (true, Node::Rat(-q)),
                other => (false, other.clone()),
            };
            let term = match &magnitude {
                Node::Rat(q) if q.is_one() => root,
                other => AlgExpr::Mul(Box::new(node_expr(t, other)), Box::new(root)),
            };
            if e.a.is_structural_zero() {
                if negative {
                    AlgExpr::Neg(Box::new(term))
                } else {
                    term
                }
            } else if negative {
                AlgExpr::Sub(Box::new(node_expr(t, &e.a)), Box::new(term))
            } else {
                AlgExpr::Add(Box::new(node_expr(t, &e.a)), Box::new(term))
            }
        }
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElem({} ≈ {})", self.to_expr(), self.approx_decimal(6))
    }
}

impl From<i64> for TowerElem {
    fn from(n: i64) -> Self {
        TowerElem::from_int(n)
    }
}

impl From<Rat> for TowerElem {
    fn from(q: Rat) -> Self {
        TowerElem::from_rat(q)
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for TowerElem {}

impl PartialOrd for TowerElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerElem {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Node::Rat(p), Node::Rat(q)) = (&self.node, &other.node) {
            return p.cmp(q);
        }
        (self - other).sign()
    }
}

impl Neg for &TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        TowerElem { tower: self.tower.clone(), node: neg(&self.node) }
    }
}

impl Neg for TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: &TowerElem) -> TowerElem {
                let (t, x, y) = self.unify(rhs);
                let node = $body(&*t, &x, &y);
                TowerElem { tower: t, node }
            }
        }
        impl $trait<TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: TowerElem) -> TowerElem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: &TowerElem) -> TowerElem {
                (&self).$method(rhs)
            }
        }
        impl $trait<TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: TowerElem) -> TowerElem {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |_t: &Tower, x: &Node, y: &Node| add(x, y));
forward_binop!(Sub, sub, |_t: &Tower, x: &Node, y: &Node| sub(x, y));
forward_binop!(Mul, mul, |t: &Tower, x: &Node, y: &Node| mul(t, x, y));
