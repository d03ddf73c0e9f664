//! Rule names and their argument shapes.

use serde::Deserialize;
use serde_json::Value;

use super::certificate::{CertKind, LatticeCoords, Quantity};
use crate::color::Color;

pub const EUCLIDEAN_RULES: [&str; 7] = [
    "neighbor_blue",
    "point_from_locus",
    "ap_force_red",
    "ap_witness_blue",
    "orbit_lift",
    "chord_contradiction",
    "disk_contradiction",
];

pub const LATTICE_RULES: [&str; 6] = [
    "lattice_forces",
    "lattice_sqdist",
    "lattice_unsat",
    "lattice_pattern_check",
    "lattice_pattern_red_pair",
    "lattice_matches_pattern",
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeighborTarget {
    pub locus: String,
    pub red: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeighborBlue {
    pub distance: Quantity,
    pub targets: Vec<NeighborTarget>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFromLocus {
    pub point: String,
    pub locus: String,
}

/// `blue` lists, for each progression point other than the missing ones and
/// in order, a blue fact whose locus contains it.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApForceRed {
    pub ap: Vec<String>,
    pub missing: String,
    pub blue: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissingPoint {
    pub point: String,
    pub distance: Quantity,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApWitnessBlue {
    pub target: String,
    pub ap: Vec<String>,
    pub missing: Vec<MissingPoint>,
    pub blue: Vec<String>,
}

/// The axis is two point names, or one planar locus (its normal line).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitLift {
    pub fact: String,
    pub axis: Vec<String>,
    pub image: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactArg {
    pub fact: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeForces {
    pub at: LatticeCoords,
    pub color: Color,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LatticePair {
    pub p: LatticeCoords,
    pub q: LatticeCoords,
    pub sq_dist: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeUnsat {
    pub limit: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LatticePatternCheck {
    pub ap_len: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeMatchesPattern {
    pub margin: i64,
    pub limit: usize,
}

#[derive(Clone, Debug)]
pub enum Rule {
    NeighborBlue(NeighborBlue),
    PointFromLocus(PointFromLocus),
    ApForceRed(ApForceRed),
    ApWitnessBlue(ApWitnessBlue),
    OrbitLift(OrbitLift),
    ChordContradiction(FactArg),
    DiskContradiction(FactArg),
    LatticeForces(LatticeForces),
    LatticeSqdist(LatticePair),
    LatticeUnsat(LatticeUnsat),
    LatticePatternCheck(LatticePatternCheck),
    LatticePatternRedPair(LatticePair),
    LatticeMatchesPattern(LatticeMatchesPattern),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("unknown rule {0:?}")]
    Unknown(String),
    #[error("rule {rule:?} is not available in {kind} certificates")]
    WrongKind { rule: String, kind: &'static str },
    #[error("args.{path}: {message}")]
    Args { path: String, message: String },
}

fn args<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, RuleError> {
    serde_path_to_error::deserialize(v)
        .map_err(|e| RuleError::Args { path: e.path().to_string(), message: e.inner().to_string() })
}

/// Resolves a step's rule name and arguments.
pub fn parse_rule(rule: &str, kind: CertKind, v: &Value) -> Result<Rule, RuleError> {
    let euclidean = EUCLIDEAN_RULES.contains(&rule);
    let lattice = LATTICE_RULES.contains(&rule);
    if !euclidean && !lattice {
        return Err(RuleError::Unknown(rule.to_string()));
    }
    match kind {
        CertKind::Euclidean if lattice => {
            return Err(RuleError::WrongKind { rule: rule.to_string(), kind: "euclidean" })
        }
        CertKind::Lattice if euclidean => return Err(RuleError::WrongKind { rule: rule.to_string(), kind: "lattice" }),
        _ => {}
    }
    Ok(match rule {
        "neighbor_blue" => Rule::NeighborBlue(args(v)?),
        "point_from_locus" => Rule::PointFromLocus(args(v)?),
        "ap_force_red" => Rule::ApForceRed(args(v)?),
        "ap_witness_blue" => Rule::ApWitnessBlue(args(v)?),
        "orbit_lift" => Rule::OrbitLift(args(v)?),
        "chord_contradiction" => Rule::ChordContradiction(args(v)?),
        "disk_contradiction" => Rule::DiskContradiction(args(v)?),
        "lattice_forces" => Rule::LatticeForces(args(v)?),
        "lattice_sqdist" => Rule::LatticeSqdist(args(v)?),
        "lattice_unsat" => Rule::LatticeUnsat(args(v)?),
        "lattice_pattern_check" => Rule::LatticePatternCheck(args(v)?),
        "lattice_pattern_red_pair" => Rule::LatticePatternRedPair(args(v)?),
        "lattice_matches_pattern" => Rule::LatticeMatchesPattern(args(v)?),
        _ => unreachable!("checked against the rule tables"),
    })
}
