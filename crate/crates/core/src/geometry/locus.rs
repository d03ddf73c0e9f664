use crate::algebra::TowerElem;

use super::{
    all_hold, parallel_conditions, sqdist, zero_vector_conditions, Condition, GeometryError, Point3, Relation,
};

/// Point sets carried by colour facts. Disks and annuli are closed and lie in
/// the plane through `center` with the given (unnormalized) normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    Point(Point3),
    Sphere { center: Point3, sq_radius: TowerElem },
    Circle { center: Point3, normal: Point3, sq_radius: TowerElem },
    Disk { center: Point3, normal: Point3, sq_radius: TowerElem },
    Annulus { center: Point3, normal: Point3, r_inner: TowerElem, r_outer: TowerElem },
}

impl Locus {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Locus::Point(_) => "point",
            Locus::Sphere { .. } => "sphere",
            Locus::Circle { .. } => "circle",
            Locus::Disk { .. } => "disk",
            Locus::Annulus { .. } => "annulus",
        }
    }

    pub fn center(&self) -> &Point3 {
        match self {
            Locus::Point(p) => p,
            Locus::Sphere { center, .. }
            | Locus::Circle { center, .. }
            | Locus::Disk { center, .. }
            | Locus::Annulus { center, .. } => center,
        }
    }

    pub fn normal(&self) -> Option<&Point3> {
        match self {
            Locus::Circle { normal, .. } | Locus::Disk { normal, .. } | Locus::Annulus { normal, .. } => Some(normal),
            _ => None,
        }
    }
}

/// Rotations about the line through two distinct points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationGroup {
    base: Point3,
    direction: Point3,
}

impl RotationGroup {
    pub fn through(p: &Point3, q: &Point3) -> Result<Self, GeometryError> {
        let direction = q - p;
        if direction.is_zero() {
            return Err(GeometryError::DegenerateAxis);
        }
        Ok(RotationGroup { base: p.clone(), direction })
    }

    /// The axis through a planar locus' center along its normal.
    pub fn normal_to(locus: &Locus) -> Result<Self, GeometryError> {
        let normal = locus.normal().ok_or(GeometryError::DegenerateAxis)?;
        let c = locus.center();
        Self::through(c, &(c + normal))
    }

    pub fn direction(&self) -> &Point3 {
        &self.direction
    }

    /// Foot of the perpendicular from `p` to the axis.
    pub fn foot(&self, p: &Point3) -> Point3 {
        let u = &self.direction;
        let t = (p - &self.base).dot(u).checked_div(&u.sqnorm()).expect("axis direction is nonzero");
        &self.base + &u.scale(&t)
    }

    fn on_axis_conditions(&self, label: &str, p: &Point3) -> Vec<Condition> {
        parallel_conditions(label, &(p - &self.base), &self.direction)
    }
}

pub fn validity_conditions(locus: &Locus) -> Vec<Condition> {
    let nonneg = |label: &str, v: &TowerElem| Condition::new(label, v.clone(), Relation::Ge, TowerElem::zero());
    let mut out = Vec::new();
    if let Some(n) = locus.normal() {
        out.push(Condition::new("normal is nonzero", n.sqnorm(), Relation::Gt, TowerElem::zero()));
    }
    match locus {
        Locus::Point(_) => {}
        Locus::Sphere { sq_radius, .. } | Locus::Circle { sq_radius, .. } | Locus::Disk { sq_radius, .. } => {
            out.push(nonneg("squared radius", sq_radius))
        }
        Locus::Annulus { r_inner, r_outer, .. } => {
            out.push(nonneg("inner radius", r_inner));
            out.push(Condition::new("inner radius <= outer radius", r_inner.clone(), Relation::Le, r_outer.clone()));
        }
    }
    out
}

fn coplanar(p: &Point3, center: &Point3, normal: &Point3) -> Condition {
    Condition::zero("in plane", (p - center).dot(normal))
}

pub fn membership_conditions(p: &Point3, locus: &Locus) -> Vec<Condition> {
    match locus {
        Locus::Point(q) => zero_vector_conditions("same point", &(p - q)),
        Locus::Sphere { center, sq_radius } => {
            vec![Condition::eq("squared distance to center", sqdist(p, center), sq_radius.clone())]
        }
        Locus::Circle { center, normal, sq_radius } => vec![
            coplanar(p, center, normal),
            Condition::eq("squared distance to center", sqdist(p, center), sq_radius.clone()),
        ],
        Locus::Disk { center, normal, sq_radius } => vec![
            coplanar(p, center, normal),
            Condition::new("squared distance to center", sqdist(p, center), Relation::Le, sq_radius.clone()),
        ],
        Locus::Annulus { center, normal, r_inner, r_outer } => {
            let d = sqdist(p, center);
            vec![
                coplanar(p, center, normal),
                Condition::new("squared distance to center", d.clone(), Relation::Ge, r_inner * r_inner),
                Condition::new("squared distance to center", d, Relation::Le, r_outer * r_outer),
            ]
        }
    }
}

pub fn on_locus(p: &Point3, locus: &Locus) -> bool {
    all_hold(&membership_conditions(p, locus))
}

/// Supported pairs: a circle inside a sphere, or a point inside anything.
pub fn subset_conditions(inner: &Locus, outer: &Locus) -> Result<Vec<Condition>, GeometryError> {
    match (inner, outer) {
        (Locus::Point(p), _) => Ok(membership_conditions(p, outer)),
        (Locus::Circle { center, normal, sq_radius }, Locus::Sphere { center: sc, sq_radius: sr }) => {
            let mut out = parallel_conditions("circle axis passes through sphere center", &(center - sc), normal);
            out.push(Condition::eq(
                "squared center distance + squared radius",
                sqdist(center, sc) + sq_radius,
                sr.clone(),
            ));
            Ok(out)
        }
        _ => Err(GeometryError::UnsupportedSubset { inner: inner.kind_name(), outer: outer.kind_name() }),
    }
}

pub fn subset_locus(inner: &Locus, outer: &Locus) -> Result<bool, GeometryError> {
    Ok(all_hold(&subset_conditions(inner, outer)?))
}

/// Conditions under which every rotation of `g` maps the locus onto itself.
pub fn invariance_conditions(locus: &Locus, g: &RotationGroup) -> Vec<Condition> {
    let mut out = g.on_axis_conditions("center on axis", locus.center());
    if let Some(n) = locus.normal() {
        out.extend(parallel_conditions("normal along axis", n, g.direction()));
    }
    out
}

pub fn is_invariant(locus: &Locus, g: &RotationGroup) -> bool {
    all_hold(&invariance_conditions(locus, g))
}

pub fn orbit_of(p: &Point3, g: &RotationGroup) -> Locus {
    let center = g.foot(p);
    let sq_radius = sqdist(p, &center);
    if sq_radius.is_zero() {
        Locus::Point(p.clone())
    } else {
        Locus::Circle { center, normal: g.direction().clone(), sq_radius }
    }
}

/// Union of the rotated copies of a circle whose plane is perpendicular to the
/// axis.
pub fn sweep_of(circle: &Locus, g: &RotationGroup) -> Result<Locus, GeometryError> {
    let Locus::Circle { center, normal, sq_radius } = circle else {
        return Err(GeometryError::NotACircle(circle.kind_name()));
    };
    if !all_hold(&parallel_conditions("", normal, g.direction())) {
        return Err(GeometryError::NotCoaxial);
    }
    let foot = g.foot(center);
    let d = sqdist(center, &foot).sqrt().expect("squared distance is nonnegative");
    let r = sq_radius.sqrt().map_err(|_| GeometryError::NotACircle("negative squared radius"))?;
    let inner = &d - &r;
    let outer = &d + &r;
    if inner.is_zero() {
        Ok(Locus::Disk { center: foot, normal: normal.clone(), sq_radius: &outer * &outer })
    } else {
        Ok(Locus::Annulus { center: foot, normal: normal.clone(), r_inner: inner.abs(), r_outer: outer })
    }
}

pub fn unit_chord_condition(circle: &Locus) -> Result<Condition, GeometryError> {
    match circle {
        Locus::Circle { sq_radius, .. } => {
            Ok(Condition::new("squared radius", sq_radius.clone(), Relation::Ge, TowerElem::from_ratio(1, 4)))
        }
        other => Err(GeometryError::NotACircle(other.kind_name())),
    }
}

pub fn contains_unit_chord(circle: &Locus) -> bool {
    unit_chord_condition(circle).map(|c| c.holds()).unwrap_or(false)
}

/// Equality of two loci as point sets, for loci of the same kind.
pub fn same_locus_conditions(a: &Locus, b: &Locus) -> Option<Vec<Condition>> {
    let centers = |p: &Point3, q: &Point3| zero_vector_conditions("same center", &(p - q));
    Some(match (a, b) {
        (Locus::Point(p), Locus::Point(q)) => centers(p, q),
        (Locus::Sphere { center: c1, sq_radius: r1 }, Locus::Sphere { center: c2, sq_radius: r2 }) => {
            let mut out = centers(c1, c2);
            out.push(Condition::eq("same squared radius", r1.clone(), r2.clone()));
            out
        }
        (
            Locus::Circle { center: c1, normal: n1, sq_radius: r1 },
            Locus::Circle { center: c2, normal: n2, sq_radius: r2 },
        )
        | (
            Locus::Disk { center: c1, normal: n1, sq_radius: r1 },
            Locus::Disk { center: c2, normal: n2, sq_radius: r2 },
        ) => {
            let mut out = centers(c1, c2);
            out.extend(parallel_conditions("same plane orientation", n1, n2));
            out.push(Condition::eq("same squared radius", r1.clone(), r2.clone()));
            out
        }
        (
            Locus::Annulus { center: c1, normal: n1, r_inner: i1, r_outer: o1 },
            Locus::Annulus { center: c2, normal: n2, r_inner: i2, r_outer: o2 },
        ) => {
            let mut out = centers(c1, c2);
            out.extend(parallel_conditions("same plane orientation", n1, n2));
            out.push(Condition::eq("same inner radius", i1.clone(), i2.clone()));
            out.push(Condition::eq("same outer radius", o1.clone(), o2.clone()));
            out
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_value;

    fn v(s: &str) -> TowerElem {
        parse_value(s).unwrap()
    }

    fn pt(x: &str, y: &str, z: &str) -> Point3 {
        Point3::new(v(x), v(y), v(z))
    }

    fn x_axis() -> RotationGroup {
        RotationGroup::through(&Point3::origin(), &Point3::ints(1, 0, 0)).unwrap()
    }

    fn x_normal() -> Point3 {
        Point3::ints(1, 0, 0)
    }

    #[test]
    fn membership_examples() {
        let disk = Locus::Disk { center: Point3::origin(), normal: Point3::ints(0, 0, 1), sq_radius: v("3") };
        assert!(on_locus(&pt("sqrt(6 + 3*sqrt(3)) - 2", "0", "0"), &disk));
        let sphere = Locus::Sphere { center: Point3::origin(), sq_radius: v("4") };
        assert!(on_locus(&Point3::ints(2, 0, 0), &sphere));
        let annulus = Locus::Annulus {
            center: Point3::origin(),
            normal: Point3::ints(0, 0, 1),
            r_inner: v("1"),
            r_outer: v("2"),
        };
        assert!(!on_locus(&Point3::origin(), &annulus));
        assert!(on_locus(&pt("3/2", "0", "0"), &annulus));
    }

    #[test]
    fn subset_examples() {
        let circle = Locus::Circle { center: pt("-1/2", "0", "0"), normal: x_normal(), sq_radius: v("3/4") };
        let unit = Locus::Sphere { center: Point3::origin(), sq_radius: v("1") };
        let big = Locus::Sphere { center: Point3::origin(), sq_radius: v("4") };
        assert!(subset_locus(&circle, &unit).unwrap());
        assert!(!subset_locus(&circle, &big).unwrap());
        let degenerate =
            Locus::Circle { center: Point3::ints(0, 0, 1), normal: Point3::ints(0, 0, 1), sq_radius: v("0") };
        assert!(subset_locus(&degenerate, &unit).unwrap());
        assert!(matches!(subset_locus(&unit, &circle), Err(GeometryError::UnsupportedSubset { .. })));
    }

    #[test]
    fn orbit_examples() {
        let p5 = pt("5/sqrt(7)", "-5*sqrt(3)/(2*sqrt(7))", "0");
        let expected = Locus::Circle { center: pt("5/sqrt(7)", "0", "0"), normal: x_normal(), sq_radius: v("75/28") };
        let got = orbit_of(&p5, &x_axis());
        assert!(all_hold(&same_locus_conditions(&got, &expected).unwrap()));
        assert_eq!(orbit_of(&Point3::ints(3, 0, 0), &x_axis()), Locus::Point(Point3::ints(3, 0, 0)));
        let p3 = pt("0", "sqrt(2)", "1");
        match orbit_of(&p3, &x_axis()) {
            Locus::Circle { sq_radius, .. } => assert_eq!(sq_radius, v("3")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_examples() {
        let c = Locus::Circle { center: pt("4", "-sqrt(3)/2", "0"), normal: x_normal(), sq_radius: v("3/4") };
        let disk = Locus::Disk { center: Point3::ints(4, 0, 0), normal: x_normal(), sq_radius: v("3") };
        assert!(all_hold(&same_locus_conditions(&sweep_of(&c, &x_axis()).unwrap(), &disk).unwrap()));

        let c = Locus::Circle { center: pt("5/2", "-sqrt(3)", "0"), normal: x_normal(), sq_radius: v("55/4") };
        let annulus = Locus::Annulus {
            center: pt("5/2", "0", "0"),
            normal: x_normal(),
            r_inner: v("sqrt(55)/2 - sqrt(3)"),
            r_outer: v("sqrt(55)/2 + sqrt(3)"),
        };
        assert!(all_hold(&same_locus_conditions(&sweep_of(&c, &x_axis()).unwrap(), &annulus).unwrap()));

        let coaxial = Locus::Circle { center: Point3::ints(1, 0, 0), normal: x_normal(), sq_radius: v("2") };
        match sweep_of(&coaxial, &x_axis()).unwrap() {
            Locus::Annulus { r_inner, r_outer, .. } => {
                assert_eq!(r_inner, v("sqrt(2)"));
                assert_eq!(r_outer, v("sqrt(2)"));
            }
            other => panic!("{other:?}"),
        }

        let tilted = Locus::Circle { center: Point3::ints(1, 1, 0), normal: Point3::ints(0, 1, 0), sq_radius: v("1") };
        assert_eq!(sweep_of(&tilted, &x_axis()).unwrap_err(), GeometryError::NotCoaxial);
    }

    #[test]
    fn unit_chord_boundary() {
        let circle = |r: &str| Locus::Circle { center: Point3::origin(), normal: x_normal(), sq_radius: v(r) };
        assert!(contains_unit_chord(&circle("3/4")));
        assert!(contains_unit_chord(&circle("1/4")));
        assert!(!contains_unit_chord(&circle("1/5")));
    }

    #[test]
    fn invariance_of_coaxial_loci() {
        let g = x_axis();
        assert!(is_invariant(&Locus::Point(Point3::ints(2, 0, 0)), &g));
        assert!(!is_invariant(&Locus::Point(Point3::ints(2, 1, 0)), &g));
        let coaxial =
            Locus::Circle { center: Point3::ints(1, 0, 0), normal: Point3::ints(-2, 0, 0), sq_radius: v("2") };
        assert!(is_invariant(&coaxial, &g));
        let sphere = Locus::Sphere { center: Point3::ints(0, 1, 0), sq_radius: v("1") };
        assert!(!is_invariant(&sphere, &g));
    }
}
