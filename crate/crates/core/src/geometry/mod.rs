//! Exact points and loci in 3-space.
//!
//! Every predicate is exposed twice: as a boolean and as the list of
//! [`Condition`]s it is made of, so a checker can report the exact comparison
//! that failed.

mod locus;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use crate::algebra::TowerElem;

pub use locus::{
    contains_unit_chord, invariance_conditions, is_invariant, membership_conditions, on_locus, orbit_of,
    same_locus_conditions, subset_conditions, subset_locus, sweep_of, unit_chord_condition, validity_conditions, Locus,
    RotationGroup,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("containment of a {inner} in a {outer} is not supported")]
    UnsupportedSubset { inner: &'static str, outer: &'static str },
    #[error("circle normal is not parallel to the rotation axis")]
    NotCoaxial,
    #[error("rotation axis needs two distinct points")]
    DegenerateAxis,
    #[error("{0} is not a circle")]
    NotACircle(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
    Lt,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Relation::Eq => ord == Ordering::Equal,
            Relation::Le => ord != Ordering::Greater,
            Relation::Ge => ord != Ordering::Less,
            Relation::Lt => ord == Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One exact comparison `lhs relation rhs`.
#[derive(Clone, Debug)]
pub struct Condition {
    pub label: String,
    pub lhs: TowerElem,
    pub relation: Relation,
    pub rhs: TowerElem,
}

impl Condition {
    pub fn new(label: impl Into<String>, lhs: TowerElem, relation: Relation, rhs: TowerElem) -> Self {
        Condition { label: label.into(), lhs, relation, rhs }
    }

    pub fn eq(label: impl Into<String>, lhs: TowerElem, rhs: TowerElem) -> Self {
        Self::new(label, lhs, Relation::Eq, rhs)
    }

    pub fn zero(label: impl Into<String>, lhs: TowerElem) -> Self {
        Self::new(label, lhs, Relation::Eq, TowerElem::zero())
    }

    pub fn holds(&self) -> bool {
        self.relation.holds(self.lhs.cmp(&self.rhs))
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.label = format!("{prefix}: {}", self.label);
        self
    }
}

pub fn all_hold(conditions: &[Condition]) -> bool {
    conditions.iter().all(Condition::holds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point3 {
    pub x: TowerElem,
    pub y: TowerElem,
    pub z: TowerElem,
}

impl Point3 {
    pub fn new(x: TowerElem, y: TowerElem, z: TowerElem) -> Self {
        Point3 { x, y, z }
    }

    pub fn origin() -> Self {
        Self::ints(0, 0, 0)
    }

    pub fn ints(x: i64, y: i64, z: i64) -> Self {
        Point3::new(x.into(), y.into(), z.into())
    }

    pub fn coords(&self) -> [&TowerElem; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn dot(&self, o: &Point3) -> TowerElem {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Point3) -> Point3 {
        Point3::new(&self.y * &o.z - &self.z * &o.y, &self.z * &o.x - &self.x * &o.z, &self.x * &o.y - &self.y * &o.x)
    }

    pub fn scale(&self, k: &TowerElem) -> Point3 {
        Point3::new(&self.x * k, &self.y * k, &self.z * k)
    }

    pub fn sqnorm(&self) -> TowerElem {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }
}

impl Add for &Point3 {
    type Output = Point3;
    fn add(self, o: &Point3) -> Point3 {
        Point3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }
}

impl Sub for &Point3 {
    type Output = Point3;
    fn sub(self, o: &Point3) -> Point3 {
        Point3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn sqdist(p: &Point3, q: &Point3) -> TowerElem {
    (p - q).sqnorm()
}

/// Componentwise `v = 0`.
pub(crate) fn zero_vector_conditions(label: &str, v: &Point3) -> Vec<Condition> {
    ["x", "y", "z"]
        .iter()
        .zip(v.coords())
        .map(|(axis, c)| Condition::zero(format!("{label} ({axis})"), c.clone()))
        .collect()
}

pub(crate) fn parallel_conditions(label: &str, u: &Point3, v: &Point3) -> Vec<Condition> {
    zero_vector_conditions(&format!("{label} cross product"), &u.cross(v))
}

/// Constant unit step between consecutive points.
pub fn unit_ap_conditions(points: &[Point3]) -> Vec<Condition> {
    let mut out = Vec::new();
    if points.len() < 2 {
        return out;
    }
    let step = &points[1] - &points[0];
    out.push(Condition::eq("squared step length", step.sqnorm(), TowerElem::one()));
    for i in 2..points.len() {
        let d = &points[i] - &points[i - 1];
        out.extend(zero_vector_conditions(&format!("step {i} equals step 1"), &(&d - &step)));
    }
    out
}

pub fn is_unit_ap(points: &[Point3]) -> bool {
    points.len() >= 2 && all_hold(&unit_ap_conditions(points))
}
