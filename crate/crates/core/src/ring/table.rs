use std::collections::{BTreeMap, HashMap};

use super::{Dim, DimValue, ExplicitRingSpec, Rules};
use crate::basis::{is_simple_label, BasisId};
use crate::element::NNElement;
use crate::error::{invalid, Error, Result};

/// Fully tabulated fusion rules of a finite ring.
pub(crate) struct FusionTable {
    basis: Vec<BasisId>,
    unit: BasisId,
    conj: HashMap<BasisId, BasisId>,
    dim: HashMap<BasisId, Dim>,
    fusion: HashMap<(BasisId, BasisId), NNElement>,
}

impl FusionTable {
    /// Validates labels, totality and support; the ring axioms themselves
    /// are left to `check_ring_axioms`.
    pub(crate) fn new(
        basis: Vec<BasisId>,
        unit: BasisId,
        conj: HashMap<BasisId, BasisId>,
        dim: HashMap<BasisId, Dim>,
        mut fusion: HashMap<(BasisId, BasisId), NNElement>,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for b in &basis {
            if !is_simple_label(b.as_str()) {
                return Err(invalid(format!("`{b}` is not a valid basis label")));
            }
            if !seen.insert(b.clone()) {
                return Err(invalid(format!("duplicate basis label `{b}`")));
            }
        }
        if !seen.contains(&unit) {
            return Err(invalid(format!("unit `{unit}` is not in the basis")));
        }
        for b in &basis {
            match conj.get(b) {
                Some(c) if seen.contains(c) => {}
                Some(c) => return Err(invalid(format!("conj({b}) = `{c}` is not in the basis"))),
                None => return Err(invalid(format!("conj({b}) is undefined"))),
            }
            if !dim.contains_key(b) {
                return Err(invalid(format!("dim({b}) is undefined")));
            }
        }
        if let Some(extra) = conj.keys().chain(dim.keys()).find(|k| !seen.contains(*k)) {
            return Err(Error::UnknownBasis(extra.to_string()));
        }
        for ((a, b), v) in &fusion {
            for x in [a, b].into_iter().chain(v.support()) {
                if !seen.contains(x) {
                    return Err(Error::UnknownBasis(x.to_string()));
                }
            }
            if (a == &unit || b == &unit) && v.as_basis() != Some(if a == &unit { b } else { a }) {
                return Err(invalid(format!("product {a}⊗{b} contradicts the unit")));
            }
        }
        for a in &basis {
            for b in &basis {
                if a == &unit || b == &unit {
                    let v = if a == &unit { b } else { a };
                    fusion.entry((a.clone(), b.clone())).or_insert_with(|| NNElement::basis(v.clone()));
                } else if !fusion.contains_key(&(a.clone(), b.clone())) {
                    return Err(invalid(format!("fusion {a}⊗{b} is undefined")));
                }
            }
        }
        Ok(FusionTable { basis, unit, conj, dim, fusion })
    }

    pub(crate) fn from_spec(spec: &ExplicitRingSpec) -> Result<Self> {
        let dim = spec.dim.iter().map(|(k, v)| Ok((k.clone(), v.parse()?))).collect::<Result<HashMap<_, _>>>()?;
        let mut fusion = HashMap::new();
        for (a, b, terms) in &spec.fusion {
            let v = NNElement::from_terms(terms.iter().map(|(k, c)| (k.clone(), *c)))?;
            if fusion.insert((a.clone(), b.clone()), v).is_some() {
                return Err(invalid(format!("fusion {a}⊗{b} listed twice")));
            }
        }
        let conj = spec.conj.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        Self::new(spec.basis.clone(), spec.unit.clone(), conj, dim, fusion)
    }

    /// Normalised spec: basis unit-first in label order, unit products
    /// omitted.
    pub(crate) fn to_spec(&self) -> ExplicitRingSpec {
        let mut basis = self.basis.clone();
        basis.sort_by(|a, b| (a != &self.unit, a).cmp(&(b != &self.unit, b)));
        let mut fusion = Vec::new();
        for a in basis.iter().filter(|a| *a != &self.unit) {
            for b in basis.iter().filter(|b| *b != &self.unit) {
                let v = &self.fusion[&(a.clone(), b.clone())];
                let terms: BTreeMap<BasisId, i64> = v.iter().map(|(k, c)| (k.clone(), c)).collect();
                fusion.push((a.clone(), b.clone(), terms));
            }
        }
        ExplicitRingSpec {
            unit: self.unit.clone(),
            conj: self.conj.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            dim: self.dim.iter().map(|(k, v)| (k.clone(), DimValue::from_dim(*v))).collect(),
            fusion,
            basis,
        }
    }
}

impl Rules for FusionTable {
    fn unit(&self) -> BasisId {
        self.unit.clone()
    }

    fn contains(&self, b: &BasisId) -> bool {
        self.conj.contains_key(b)
    }

    fn conj(&self, b: &BasisId) -> Result<BasisId> {
        self.conj.get(b).cloned().ok_or_else(|| Error::UnknownBasis(b.to_string()))
    }

    fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement> {
        self.fusion.get(&(a.clone(), b.clone())).cloned().ok_or_else(|| Error::UnknownBasis(format!("{a}⊗{b}")))
    }

    fn dim(&self, b: &BasisId) -> Result<Dim> {
        self.dim.get(b).copied().ok_or_else(|| Error::UnknownBasis(b.to_string()))
    }

    fn finite_basis(&self) -> Option<Vec<BasisId>> {
        Some(self.basis.clone())
    }

    fn generators(&self) -> Vec<BasisId> {
        self.basis.iter().filter(|b| **b != self.unit).cloned().collect()
    }
}
