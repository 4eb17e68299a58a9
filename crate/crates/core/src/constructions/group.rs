//! Finite groups given by multiplication tables, and their group rings.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::basis::{is_simple_label, BasisId};
use crate::element::NNElement;
use crate::error::{invalid, Error, Result};
use crate::ring::{BasedRing, Dim, FusionTable, RingExpr, RingKind};

/// A finite group: element labels plus a total multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupPresentation {
    labels: Vec<BasisId>,
    index: HashMap<BasisId, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupPresentation {
    /// Builds a group from `table[i][j] = elements[i]·elements[j]`, verifying
    /// closure, associativity, the identity and inverses.
    pub fn from_table(elements: Vec<BasisId>, table: Vec<Vec<BasisId>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(invalid("a group needs at least one element"));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if !is_simple_label(e.as_str()) {
                return Err(invalid(format!("`{e}` is not a valid group element label")));
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(invalid(format!("duplicate group element `{e}`")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(invalid(format!("multiplication table must be {n}×{n}")));
        }
        let table = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        index
                            .get(x)
                            .copied()
                            .ok_or_else(|| invalid(format!("table entry `{x}` is not a group element")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(elements, index, table)
    }

    fn from_indices(labels: Vec<BasisId>, index: HashMap<BasisId, usize>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| invalid("group axiom violated: no identity element"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(invalid(format!(
                            "group axiom violated: ({}·{})·{} ≠ {}·({}·{})",
                            labels[a], labels[b], labels[c], labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| invalid(format!("group axiom violated: `{}` has no inverse", labels[a])))?;
            inverse.push(inv);
        }
        Ok(FiniteGroupPresentation { labels, index, table, identity, inverse })
    }

    /// Z/n with elements `e, g, g2, …`.
    pub fn cyclic(n: usize, generator: &str) -> Result<Self> {
        if n == 0 {
            return Err(invalid("cyclic group order must be positive"));
        }
        let labels: Vec<BasisId> = (0..n)
            .map(|k| match k {
                0 => BasisId::new("e"),
                1 => BasisId::new(generator),
                k => BasisId::new(format!("{generator}{k}")),
            })
            .collect();
        let index = labels.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_indices(labels, index, table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1, "g").expect("trivial group")
    }

    /// The symmetric group on three letters with elements `e, r, r2, s, sr,
    /// sr2`, where `r` is a 3-cycle and `s` a transposition (`s r s = r2`).
    pub fn symmetric3() -> Self {
        type Perm = [usize; 3];
        let compose = |p: Perm, q: Perm| -> Perm { [p[q[0]], p[q[1]], p[q[2]]] };
        let e: Perm = [0, 1, 2];
        let r: Perm = [1, 2, 0];
        let s: Perm = [0, 2, 1];
        let r2 = compose(r, r);
        let named = [("e", e), ("r", r), ("r2", r2), ("s", s), ("sr", compose(s, r)), ("sr2", compose(s, r2))];
        let labels: Vec<BasisId> = named.iter().map(|(l, _)| BasisId::new(l)).collect();
        let find = |p: Perm| named.iter().position(|(_, q)| *q == p).expect("closed");
        let table = named.iter().map(|(_, p)| named.iter().map(|(_, q)| find(compose(*p, *q))).collect()).collect();
        let index = labels.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Self::from_indices(labels, index, table).expect("S3 is a group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> &[BasisId] {
        &self.labels
    }

    pub fn identity(&self) -> &BasisId {
        &self.labels[self.identity]
    }

    pub fn index_of(&self, g: &BasisId) -> Result<usize> {
        self.index.get(g).copied().ok_or_else(|| Error::UnknownBasis(g.to_string()))
    }

    pub fn contains(&self, g: &BasisId) -> bool {
        self.index.contains_key(g)
    }

    pub fn mul(&self, a: &BasisId, b: &BasisId) -> Result<&BasisId> {
        Ok(&self.labels[self.table[self.index_of(a)?][self.index_of(b)?]])
    }

    pub fn inv(&self, a: &BasisId) -> Result<&BasisId> {
        Ok(&self.labels[self.inverse[self.index_of(a)?]])
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec::Table {
            elements: self.labels.clone(),
            table: self.table.iter().map(|row| row.iter().map(|&k| self.labels[k].clone()).collect()).collect(),
        }
    }
}

/// How a finite group is written in a definition file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        cyclic: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<String>,
    },
    /// `"S3"` or `"trivial"`.
    Named {
        named: String,
    },
    Table {
        elements: Vec<BasisId>,
        table: Vec<Vec<BasisId>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroupPresentation> {
        match self {
            GroupSpec::Cyclic { cyclic, generator } => {
                FiniteGroupPresentation::cyclic(*cyclic, generator.as_deref().unwrap_or("a"))
            }
            GroupSpec::Named { named } => match named.as_str() {
                "S3" => Ok(FiniteGroupPresentation::symmetric3()),
                "trivial" => Ok(FiniteGroupPresentation::trivial()),
                other => Err(invalid(format!("unknown named group `{other}`"))),
            },
            GroupSpec::Table { elements, table } => {
                FiniteGroupPresentation::from_table(elements.clone(), table.clone())
            }
        }
    }
}

fn group_ring_with_expr(g: &FiniteGroupPresentation, expr: RingExpr) -> Result<BasedRing> {
    let one = Dim::from_integer(1);
    let conj = g.labels.iter().map(|a| Ok((a.clone(), g.inv(a)?.clone()))).collect::<Result<HashMap<_, _>>>()?;
    let dim = g.labels.iter().map(|a| (a.clone(), one)).collect();
    let mut fusion = HashMap::new();
    for a in &g.labels {
        for b in &g.labels {
            fusion.insert((a.clone(), b.clone()), NNElement::basis(g.mul(a, b)?.clone()));
        }
    }
    let table = FusionTable::new(g.labels.clone(), g.identity().clone(), conj, dim, fusion)?;
    Ok(BasedRing::from_kind(expr, RingKind::Table(table)))
}

/// The group ring Z[Γ]: basis Γ, `a⊗b = ab`, `conj(a) = a⁻¹`, `d ≡ 1`.
pub fn group_ring(g: &FiniteGroupPresentation) -> Result<BasedRing> {
    group_ring_with_expr(g, RingExpr::GroupRing { group: g.to_spec() })
}

pub(crate) fn group_ring_from_spec(spec: &GroupSpec) -> Result<BasedRing> {
    group_ring_with_expr(&spec.build()?, RingExpr::GroupRing { group: spec.clone() })
}

/// Group multiplication table keyed by labels, for oracles and reports.
pub fn multiplication_table(g: &FiniteGroupPresentation) -> BTreeMap<(BasisId, BasisId), BasisId> {
    let mut out = BTreeMap::new();
    for a in g.elements() {
        for b in g.elements() {
            out.insert((a.clone(), b.clone()), g.mul(a, b).expect("element").clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{check_dimension, check_ring_axioms};

    fn b(s: &str) -> BasisId {
        BasisId::new(s)
    }

    #[test]
    fn z2_group_ring() {
        let r = group_ring(&FiniteGroupPresentation::cyclic(2, "g").unwrap()).unwrap();
        assert_eq!(r.basis_up_to_depth(0).unwrap(), vec![b("e"), b("g")]);
        assert_eq!(r.fuse(&b("g"), &b("g")).unwrap().as_basis(), Some(&b("e")));
    }

    #[test]
    fn z4_conjugation_is_inversion() {
        let r = group_ring(&FiniteGroupPresentation::cyclic(4, "a").unwrap()).unwrap();
        assert_eq!(r.basis_up_to_depth(3).unwrap(), vec![b("e"), b("a"), b("a2"), b("a3")]);
        assert_eq!(r.conj(&b("a")).unwrap(), b("a3"));
    }

    #[test]
    fn s3_table_is_a_group_and_its_ring_is_based() {
        let g = FiniteGroupPresentation::symmetric3();
        assert_eq!(g.order(), 6);
        // s r s⁻¹ = r⁻¹
        let srs = g.mul(g.mul(&b("s"), &b("r")).unwrap(), &b("s")).unwrap();
        assert_eq!(srs, &b("r2"));
        let r = group_ring(&g).unwrap();
        assert_eq!(r.basis_up_to_depth(1).unwrap().len(), 6);
        assert!(check_ring_axioms(&r, 1).unwrap().holds());
        assert!(check_dimension(&r, 1).unwrap().holds());
    }

    #[test]
    fn non_groups_are_rejected_with_the_axiom() {
        // {e, x} with x·x = x has no inverse for x
        let err =
            FiniteGroupPresentation::from_table(vec![b("e"), b("x")], vec![vec![b("e"), b("x")], vec![b("x"), b("x")]])
                .unwrap_err();
        assert!(err.to_string().contains("no inverse"), "{err}");
        let err = FiniteGroupPresentation::from_table(vec![b("e")], vec![vec![b("q")]]).unwrap_err();
        assert!(err.to_string().contains("not a group element"));
    }
}
