//! Certificate documents as parsed from JSON.

use std::fmt;

use indexmap::IndexMap;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{AlgExpr, TowerElem};
use crate::color::Color;
use crate::geometry::{Locus, Point3};
use crate::lattice::{LatticeColoring, LatticePoint, LatticeRules, Patch};

/// An exact value together with the expression it was written as.
#[derive(Clone, Debug)]
pub struct Quantity {
    pub expr: AlgExpr,
    pub value: TowerElem,
}

impl Quantity {
    pub fn parse(text: &str) -> Result<Self, crate::algebra::AlgebraError> {
        let expr = AlgExpr::parse(text)?;
        let value = expr.eval()?;
        Ok(Quantity { expr, value })
    }
}

impl PartialEq for Quantity {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.expr.to_string())
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Quantity;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a radical expression string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Quantity, E> {
                Quantity::parse(v).map_err(|e| E::custom(format!("{e} in {v:?}")))
            }
        }
        d.deserialize_str(V)
    }
}

pub type Coords = [Quantity; 3];

fn point(c: &Coords) -> Point3 {
    Point3::new(c[0].value.clone(), c[1].value.clone(), c[2].value.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SphereSpec {
    pub center: Coords,
    pub sq_radius: Quantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PlanarSpec {
    pub center: Coords,
    pub normal: Coords,
    pub sq_radius: Quantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AnnulusSpec {
    pub center: Coords,
    pub normal: Coords,
    pub r_inner: Quantity,
    pub r_outer: Quantity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SceneEntry {
    Point(Coords),
    Sphere(SphereSpec),
    Circle(PlanarSpec),
    Disk(PlanarSpec),
    Annulus(AnnulusSpec),
}

impl SceneEntry {
    pub fn locus(&self) -> Locus {
        match self {
            SceneEntry::Point(c) => Locus::Point(point(c)),
            SceneEntry::Sphere(s) => Locus::Sphere { center: point(&s.center), sq_radius: s.sq_radius.value.clone() },
            SceneEntry::Circle(s) => Locus::Circle {
                center: point(&s.center),
                normal: point(&s.normal),
                sq_radius: s.sq_radius.value.clone(),
            },
            SceneEntry::Disk(s) => {
                Locus::Disk { center: point(&s.center), normal: point(&s.normal), sq_radius: s.sq_radius.value.clone() }
            }
            SceneEntry::Annulus(s) => Locus::Annulus {
                center: point(&s.center),
                normal: point(&s.normal),
                r_inner: s.r_inner.value.clone(),
                r_outer: s.r_outer.value.clone(),
            },
        }
    }
}

/// Named scene entries in file order; duplicate names are rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene(pub IndexMap<String, SceneEntry>);

impl Scene {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for Scene {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scene {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Scene;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map of scene names to loci")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Scene, A::Error> {
                let mut out = IndexMap::new();
                while let Some(name) = map.next_key::<String>()? {
                    if out.contains_key(&name) {
                        return Err(de::Error::custom(format!("duplicate scene name {name:?}")));
                    }
                    let entry: SceneEntry = map.next_value()?;
                    out.insert(name, entry);
                }
                Ok(Scene(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Euclidean,
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    Contradiction,
    Holds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactSpec {
    pub fact: String,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContextSpec {
    /// Length of the forbidden blue progression.
    pub ap_len: usize,
    pub hypotheses: Vec<FactSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keyword {
    Contradiction,
}

/// What a step claims to establish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Produces {
    Keyword(Keyword),
    Facts(Vec<FactSpec>),
}

impl Default for Produces {
    fn default() -> Self {
        Produces::Facts(Vec::new())
    }
}

impl Produces {
    fn is_nothing(&self) -> bool {
        matches!(self, Produces::Facts(f) if f.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub rule: String,
    pub args: Value,
    #[serde(default, skip_serializing_if = "Produces::is_nothing")]
    pub produces: Produces,
}

pub type LatticeCoords = [i64; 2];

pub fn lattice_point(c: &LatticeCoords) -> LatticePoint {
    LatticePoint::new(c[0], c[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhombusSpec {
    pub a: [i64; 2],
    pub b: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PatchSpec {
    Rhombus(RhombusSpec),
    Points(Vec<LatticeCoords>),
}

impl PatchSpec {
    pub fn patch(&self) -> Patch {
        match self {
            PatchSpec::Rhombus(r) => Patch::rhombus((r.a[0], r.a[1]), (r.b[0], r.b[1])),
            PatchSpec::Points(pts) => Patch::from_points(pts.iter().map(lattice_point)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    pub at: LatticeCoords,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SqDistRule {
    pub sq_dist: i64,
    pub sources: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GadgetSpec {
    pub patch: PatchSpec,
    pub seed: Vec<SeedSpec>,
    pub forbidden_red_sq_dists: Vec<SqDistRule>,
}

impl GadgetSpec {
    pub fn seed_coloring(&self) -> LatticeColoring {
        self.seed.iter().map(|s| (lattice_point(&s.at), s.color)).collect()
    }

    pub fn rules(&self, ap_len: usize) -> LatticeRules {
        LatticeRules {
            forbidden_red_sq_dists: self
                .forbidden_red_sq_dists
                .iter()
                .map(|r| (r.sq_dist, r.sources.clone()))
                .collect(),
            ap_len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Certificate {
    pub id: String,
    pub kind: CertKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub dependencies: Vec<String>,
    pub context: ContextSpec,
    #[serde(default, skip_serializing_if = "Scene::is_empty")]
    pub scene: Scene,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gadget: Option<GadgetSpec>,
    pub steps: Vec<Step>,
    pub goal: Goal,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantity_rejects_decimals() {
        let err = serde_json::from_str::<Quantity>(r#""0.75""#).unwrap_err();
        assert!(err.to_string().contains("decimal"), "{err}");
        let q: Quantity = serde_json::from_str(r#""sqrt(3)/2""#).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), r#""sqrt(3) / 2""#);
    }

    #[test]
    fn scene_rejects_duplicate_names() {
        let text = r#"{"A": {"point": ["0","0","0"]}, "A": {"point": ["1","0","0"]}}"#;
        let err = serde_json::from_str::<Scene>(text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn produces_forms() {
        let p: Produces = serde_json::from_str(r#""contradiction""#).unwrap();
        assert_eq!(p, Produces::Keyword(Keyword::Contradiction));
        let p: Produces = serde_json::from_str(r#"[{"fact": "P", "color": "red"}]"#).unwrap();
        assert_eq!(p, Produces::Facts(vec![FactSpec { fact: "P".into(), color: Color::Red }]));
    }
}
