use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BasedRing, Dim, FusionTable, RingKind};
use crate::basis::BasisId;
use crate::constructions::{self, ActionSpec, CharacterTableSpec, GroupSpec};
use crate::error::{invalid, Result};

/// A dimension value in a definition file: an integer, or a string `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DimValue {
    Int(i64),
    Text(String),
}

impl DimValue {
    pub fn parse(&self) -> Result<Dim> {
        match self {
            DimValue::Int(n) => Ok(Dim::from_integer(*n)),
            DimValue::Text(s) => {
                let s = s.trim();
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: i64 = num.parse().map_err(|_| invalid(format!("bad dimension `{s}`")))?;
                let den: i64 = den.parse().map_err(|_| invalid(format!("bad dimension `{s}`")))?;
                if den == 0 {
                    return Err(invalid(format!("bad dimension `{s}`")));
                }
                Ok(Dim::new(num, den))
            }
        }
    }

    pub fn from_dim(d: Dim) -> DimValue {
        if d.is_integer() {
            DimValue::Int(*d.numer())
        } else {
            DimValue::Text(format!("{}/{}", d.numer(), d.denom()))
        }
    }
}

/// An explicitly tabulated finite based ring. Products with the unit are
/// implied; every other ordered pair must be listed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitRingSpec {
    pub basis: Vec<BasisId>,
    pub unit: BasisId,
    pub conj: BTreeMap<BasisId, BasisId>,
    pub dim: BTreeMap<BasisId, DimValue>,
    pub fusion: Vec<(BasisId, BasisId, BTreeMap<BasisId, i64>)>,
}

/// Serializable description of how a ring is built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingExpr {
    Explicit {
        ring: ExplicitRingSpec,
    },
    GroupRing {
        group: GroupSpec,
    },
    RepRing {
        table: CharacterTableSpec,
    },
    Su2 {},
    So3 {},
    DirectProduct {
        left: Box<RingExpr>,
        right: Box<RingExpr>,
    },
    FreeProduct {
        left: Box<RingExpr>,
        right: Box<RingExpr>,
    },
    SemidirectProduct {
        group: GroupSpec,
        target: Box<RingExpr>,
        #[serde(default)]
        action: ActionSpec,
    },
}

impl RingExpr {
    pub fn name(&self) -> &'static str {
        match self {
            RingExpr::Explicit { .. } => "explicit",
            RingExpr::GroupRing { .. } => "group_ring",
            RingExpr::RepRing { .. } => "rep_ring",
            RingExpr::Su2 {} => "su2",
            RingExpr::So3 {} => "so3",
            RingExpr::DirectProduct { .. } => "direct_product",
            RingExpr::FreeProduct { .. } => "free_product",
            RingExpr::SemidirectProduct { .. } => "semidirect_product",
        }
    }

    pub fn build(&self) -> Result<BasedRing> {
        match self {
            RingExpr::Explicit { ring } => {
                let table = FusionTable::from_spec(ring)?;
                // rebuild from the table so the stored expression is normalised
                let expr = RingExpr::Explicit { ring: table.to_spec() };
                Ok(BasedRing::from_kind(expr, RingKind::Table(table)))
            }
            RingExpr::GroupRing { group } => constructions::group_ring_from_spec(group),
            RingExpr::RepRing { table } => constructions::rep_ring_from_spec(table),
            RingExpr::Su2 {} => Ok(constructions::su2_ring()),
            RingExpr::So3 {} => Ok(constructions::so3_ring()),
            RingExpr::DirectProduct { left, right } => {
                Ok(constructions::direct_product(&left.build()?, &right.build()?).ring)
            }
            RingExpr::FreeProduct { left, right } => {
                Ok(constructions::free_product(&left.build()?, &right.build()?).ring)
            }
            RingExpr::SemidirectProduct { group: spec, target, action } => {
                let group = spec.build()?;
                let target = target.build()?;
                let action = action.build(&group, &target)?;
                Ok(constructions::semidirect_with_spec(spec, &group, &target, &action)?.ring)
            }
        }
    }
}
