//! Based modules over based rings.

mod checks;
mod iso;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::BasisId;
use crate::element::{Element, NNElement};
use crate::error::{invalid, Error, Result};
use crate::ring::{BasedRing, Dim, DimValue};
use crate::subring::SubringEmbedding;

pub use checks::{
    check_module_axioms, check_module_dimension, cofinite_support_counts, connected_components, is_cofinite,
    is_standard, is_torsion, Standardness,
};
pub use iso::{modules_isomorphic, IsomorphismWitness};

/// Elements of the free abelian group on a module basis.
pub type ModuleElement = Element;

/// How a module computes `α ⊗ j`.
pub(crate) trait ModuleRules: Send + Sync {
    /// The basis, when finite, in a fixed order.
    fn basis(&self) -> Option<Vec<BasisId>>;
    /// Basis elements reachable within `depth` (the whole basis when
    /// finite).
    fn basis_up_to_depth(&self, depth: usize) -> Result<Vec<BasisId>>;
    fn contains(&self, j: &BasisId) -> bool;
    /// `α ⊗ j` for a ring basis element `α` and module basis element `j`.
    fn act(&self, a: &BasisId, j: &BasisId) -> Result<NNElement>;
    fn describe(&self) -> String;
    /// True only for the ring acting on itself.
    fn is_regular(&self) -> bool {
        false
    }
    /// True when the basis was cut off (induction over a lazy ring).
    fn truncated(&self) -> bool {
        false
    }
    /// A dimension function supplied with the definition, if any.
    fn dim(&self) -> Option<HashMap<BasisId, Dim>> {
        None
    }
}

/// A based module: a ring together with a basis it acts on with
/// non-negative integer coefficients.
#[derive(Clone)]
pub struct BasedModule {
    ring: BasedRing,
    rules: Arc<dyn ModuleRules>,
    basis: Option<Arc<[BasisId]>>,
}

impl fmt::Debug for BasedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasedModule")
            .field("ring", &self.ring)
            .field("module", &self.rules.describe())
            .field("rank", &self.rank())
            .finish()
    }
}

impl BasedModule {
    pub(crate) fn from_rules(ring: BasedRing, rules: Arc<dyn ModuleRules>) -> Self {
        let basis = rules.basis().map(Arc::from);
        BasedModule { ring, rules, basis }
    }

    /// The ring acting on itself by multiplication.
    pub fn standard(ring: &BasedRing) -> Self {
        Self::from_rules(ring.clone(), Arc::new(StandardRules { ring: ring.clone() }))
    }

    /// A finite module given by its full action table. Products with the
    /// unit are implied; every other (ring basis, module basis) pair must be
    /// listed. Only finite rings are accepted.
    pub fn explicit(
        ring: &BasedRing,
        basis: Vec<BasisId>,
        action: HashMap<(BasisId, BasisId), NNElement>,
        dim: Option<HashMap<BasisId, Dim>>,
    ) -> Result<Self> {
        let rules = ExplicitRules::new(ring, basis, action, dim)?;
        Ok(Self::from_rules(ring.clone(), Arc::new(rules)))
    }

    pub fn ring(&self) -> &BasedRing {
        &self.ring
    }

    pub fn is_finite(&self) -> bool {
        self.basis.is_some()
    }

    pub fn basis(&self) -> Option<&[BasisId]> {
        self.basis.as_deref()
    }

    pub fn rank(&self) -> Option<usize> {
        self.basis.as_ref().map(|b| b.len())
    }

    pub fn basis_up_to_depth(&self, depth: usize) -> Result<Vec<BasisId>> {
        match &self.basis {
            Some(b) => Ok(b.to_vec()),
            None => self.rules.basis_up_to_depth(depth),
        }
    }

    pub fn contains(&self, j: &BasisId) -> bool {
        match &self.basis {
            Some(b) => b.contains(j),
            None => self.rules.contains(j),
        }
    }

    pub fn is_regular(&self) -> bool {
        self.rules.is_regular()
    }

    pub fn is_truncated(&self) -> bool {
        self.rules.truncated()
    }

    pub fn describe(&self) -> String {
        self.rules.describe()
    }

    pub(crate) fn require(&self, j: &BasisId) -> Result<()> {
        if self.contains(j) {
            Ok(())
        } else {
            Err(Error::UnknownBasis(j.to_string()))
        }
    }

    /// `α ⊗ j` on basis elements.
    pub fn act_basis(&self, a: &BasisId, j: &BasisId) -> Result<NNElement> {
        self.ring.require(a)?;
        self.require(j)?;
        self.rules.act(a, j)
    }

    /// Bilinear extension of [`act_basis`](Self::act_basis).
    pub fn act(&self, a: &Element, v: &ModuleElement) -> Result<ModuleElement> {
        let mut out = Element::zero();
        for (x, cx) in a.iter() {
            for (j, cj) in v.iter() {
                let c = cx.checked_mul(cj).ok_or(Error::Overflow("module coefficient"))?;
                let p = self.act_basis(x, j)?;
                out.add_scaled(&p, c)?;
            }
        }
        Ok(out)
    }

    /// The full action table of a finite module over a finite ring,
    /// omitting the unit.
    pub fn action_table(&self) -> Result<BTreeMap<(BasisId, BasisId), NNElement>> {
        let (Some(ring_basis), Some(basis)) = (self.ring.finite_basis(), self.basis()) else {
            return Err(invalid("only finite modules over finite rings have a full action table"));
        };
        let mut out = BTreeMap::new();
        for a in &ring_basis[1..] {
            for j in basis {
                out.insert((a.clone(), j.clone()), self.act_basis(a, j)?);
            }
        }
        Ok(out)
    }

    /// A finite module re-expressed as an explicit table over the same
    /// ring.
    pub fn materialize(&self) -> Result<BasedModule> {
        let table = self.action_table()?;
        let basis = self.basis().expect("finite").to_vec();
        BasedModule::explicit(&self.ring, basis, table.into_iter().collect(), None)
    }

    /// Serializable description of a finite module.
    pub fn to_spec(&self) -> Result<ModuleSpec> {
        if self.is_regular() {
            return Ok(ModuleSpec { standard: true, ..ModuleSpec::default() });
        }
        let table = self.action_table()?;
        let dim = self.dim_function();
        Ok(ModuleSpec {
            standard: false,
            basis: Some(self.basis().expect("finite").to_vec()),
            action: Some(
                table.into_iter().map(|((a, j), v)| (a, j, v.iter().map(|(k, c)| (k.clone(), c)).collect())).collect(),
            ),
            dim: dim.map(|d| d.into_iter().map(|(k, v)| (k, DimValue::from_dim(v))).collect()),
        })
    }

    /// The module dimension function, when the definition supplied one.
    pub fn dim_function(&self) -> Option<HashMap<BasisId, Dim>> {
        self.rules.dim()
    }
}

/// `(α, j, α⊗j)` entries of an action table.
pub type ActionTriples = Vec<(BasisId, BasisId, BTreeMap<BasisId, i64>)>;

/// How a module is written in a definition file: either `standard: true`,
/// or a basis with action triples `(α, j, α⊗j)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub standard: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<BasisId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionTriples>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<BTreeMap<BasisId, DimValue>>,
}

impl ModuleSpec {
    pub fn build(&self, ring: &BasedRing) -> Result<BasedModule> {
        match (self.standard, &self.basis, &self.action) {
            (true, None, None) if self.dim.is_none() => Ok(BasedModule::standard(ring)),
            (true, _, _) => Err(invalid("a standard module takes no basis, action or dim")),
            (false, Some(basis), Some(triples)) => {
                let mut action = HashMap::new();
                for (a, j, v) in triples {
                    let v = NNElement::from_terms(v.iter().map(|(k, c)| (k.clone(), *c)))?;
                    if action.insert((a.clone(), j.clone()), v).is_some() {
                        return Err(invalid(format!("action {a}⊗{j} is listed twice")));
                    }
                }
                let dim = match &self.dim {
                    Some(d) => {
                        Some(d.iter().map(|(k, v)| Ok((k.clone(), v.parse()?))).collect::<Result<HashMap<_, _>>>()?)
                    }
                    None => None,
                };
                BasedModule::explicit(ring, basis.clone(), action, dim)
            }
            _ => Err(invalid("a module needs `standard: true` or both `basis` and `action`")),
        }
    }
}

pub(crate) fn is_module_label(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

struct StandardRules {
    ring: BasedRing,
}

impl ModuleRules for StandardRules {
    fn basis(&self) -> Option<Vec<BasisId>> {
        self.ring.finite_basis().map(<[BasisId]>::to_vec)
    }

    fn basis_up_to_depth(&self, depth: usize) -> Result<Vec<BasisId>> {
        self.ring.basis_up_to_depth(depth)
    }

    fn contains(&self, j: &BasisId) -> bool {
        self.ring.contains(j)
    }

    fn act(&self, a: &BasisId, j: &BasisId) -> Result<NNElement> {
        self.ring.fuse(a, j)
    }

    fn describe(&self) -> String {
        "standard".into()
    }

    fn is_regular(&self) -> bool {
        true
    }
}

pub(crate) struct ExplicitRules {
    basis: Vec<BasisId>,
    set: HashSet<BasisId>,
    unit: BasisId,
    action: HashMap<(BasisId, BasisId), NNElement>,
    dim: Option<HashMap<BasisId, Dim>>,
}

impl ExplicitRules {
    fn new(
        ring: &BasedRing,
        basis: Vec<BasisId>,
        mut action: HashMap<(BasisId, BasisId), NNElement>,
        dim: Option<HashMap<BasisId, Dim>>,
    ) -> Result<Self> {
        let Some(ring_basis) = ring.finite_basis() else {
            return Err(invalid("explicit modules need a finite ring"));
        };
        if basis.is_empty() {
            return Err(invalid("the zero module is not a based module of interest (empty basis)"));
        }
        let mut set = HashSet::new();
        for j in &basis {
            if !is_module_label(j.as_str()) {
                return Err(invalid(format!("`{j}` is not a valid module label")));
            }
            if !set.insert(j.clone()) {
                return Err(invalid(format!("duplicate module basis element `{j}`")));
            }
        }
        for ((a, j), v) in &action {
            ring.require(a)?;
            if !set.contains(j) {
                return Err(Error::UnknownBasis(j.to_string()));
            }
            if let Some(k) = v.support().find(|k| !set.contains(*k)) {
                return Err(Error::UnknownBasis(k.to_string()));
            }
        }
        let unit = ring.unit();
        for j in &basis {
            let key = (unit.clone(), j.clone());
            match action.get(&key) {
                Some(v) if v.as_basis() != Some(j) => {
                    return Err(invalid(format!("the unit must act trivially, but {unit}⊗{j} = {v}")));
                }
                Some(_) => {}
                None => {
                    action.insert(key, NNElement::basis(j.clone()));
                }
            }
            for a in &ring_basis[1..] {
                if !action.contains_key(&(a.clone(), j.clone())) {
                    return Err(invalid(format!("action {a}⊗{j} is undefined")));
                }
            }
        }
        if let Some(d) = &dim {
            for j in &basis {
                match d.get(j) {
                    Some(x) if *x > Dim::from_integer(0) => {}
                    Some(x) => return Err(invalid(format!("module dimension d({j}) = {x} is not positive"))),
                    None => return Err(invalid(format!("module dimension of `{j}` is missing"))),
                }
            }
        }
        let mut basis = basis;
        basis.sort();
        Ok(ExplicitRules { basis, set, unit, action, dim })
    }
}

impl ModuleRules for ExplicitRules {
    fn basis(&self) -> Option<Vec<BasisId>> {
        Some(self.basis.clone())
    }

    fn basis_up_to_depth(&self, _depth: usize) -> Result<Vec<BasisId>> {
        Ok(self.basis.clone())
    }

    fn contains(&self, j: &BasisId) -> bool {
        self.set.contains(j)
    }

    fn act(&self, a: &BasisId, j: &BasisId) -> Result<NNElement> {
        if *a == self.unit {
            return Ok(NNElement::basis(j.clone()));
        }
        self.action.get(&(a.clone(), j.clone())).cloned().ok_or_else(|| invalid(format!("action {a}⊗{j} is undefined")))
    }

    fn describe(&self) -> String {
        format!("explicit rank {}", self.basis.len())
    }

    fn dim(&self) -> Option<HashMap<BasisId, Dim>> {
        self.dim.clone()
    }
}

struct RestrictedRules {
    inner: BasedModule,
    embedding: SubringEmbedding,
}

impl ModuleRules for RestrictedRules {
    fn basis(&self) -> Option<Vec<BasisId>> {
        self.inner.basis().map(<[BasisId]>::to_vec)
    }

    fn basis_up_to_depth(&self, depth: usize) -> Result<Vec<BasisId>> {
        self.inner.basis_up_to_depth(depth)
    }

    fn contains(&self, j: &BasisId) -> bool {
        self.inner.contains(j)
    }

    fn act(&self, a: &BasisId, j: &BasisId) -> Result<NNElement> {
        self.inner.act_basis(&self.embedding.image(a)?, j)
    }

    fn describe(&self) -> String {
        format!("restriction of {}", self.inner.describe())
    }
}

struct SummandRules {
    inner: BasedModule,
    basis: Vec<BasisId>,
    set: HashSet<BasisId>,
}

impl ModuleRules for SummandRules {
    fn basis(&self) -> Option<Vec<BasisId>> {
        Some(self.basis.clone())
    }

    fn basis_up_to_depth(&self, _depth: usize) -> Result<Vec<BasisId>> {
        Ok(self.basis.clone())
    }

    fn contains(&self, j: &BasisId) -> bool {
        self.set.contains(j)
    }

    fn act(&self, a: &BasisId, j: &BasisId) -> Result<NNElement> {
        let v = self.inner.act_basis(a, j)?;
        let outside = v.support().find(|k| !self.set.contains(*k)).cloned();
        match outside {
            Some(k) => Err(invalid(format!("{a}⊗{j} leaves the summand through {k}"))),
            None => Ok(v),
        }
    }

    fn describe(&self) -> String {
        format!("summand of rank {} of {}", self.basis.len(), self.inner.describe())
    }

    fn truncated(&self) -> bool {
        self.inner.is_truncated()
    }
}

impl BasedModule {
    /// The same basis with the subring acting through the embedding.
    pub fn restrict(&self, e: &SubringEmbedding) -> Result<BasedModule> {
        if !e.ambient().same_ring(&self.ring) {
            return Err(invalid("the embedding's ambient ring is not the module's ring"));
        }
        let rules = RestrictedRules { inner: self.clone(), embedding: e.clone() };
        Ok(Self::from_rules(e.sub().clone(), Arc::new(rules)))
    }

    /// The submodule spanned by `basis`, which must be closed under the
    /// action (checked lazily, on every product).
    pub fn summand(&self, basis: Vec<BasisId>) -> Result<BasedModule> {
        for j in &basis {
            self.require(j)?;
        }
        if basis.is_empty() {
            return Err(invalid("a summand needs a non-empty basis"));
        }
        let set = basis.iter().cloned().collect();
        let rules = SummandRules { inner: self.clone(), basis, set };
        Ok(Self::from_rules(self.ring.clone(), Arc::new(rules)))
    }

    /// Direct sum of two finite modules over the same finite ring, with
    /// labels prefixed by `1_`/`2_` when they collide.
    pub fn direct_sum(&self, other: &BasedModule) -> Result<BasedModule> {
        if !self.ring.same_ring(&other.ring) {
            return Err(invalid("direct sums need a common ring"));
        }
        let (t1, t2) = (self.action_table()?, other.action_table()?);
        let (b1, b2) = (self.basis().expect("finite"), other.basis().expect("finite"));
        let clash = b1.iter().any(|j| b2.contains(j));
        let rename = |side: u8, j: &BasisId| if clash { BasisId::new(format!("{side}_{j}")) } else { j.clone() };
        let mut basis: Vec<BasisId> = b1.iter().map(|j| rename(1, j)).collect();
        basis.extend(b2.iter().map(|j| rename(2, j)));
        let mut action = HashMap::new();
        for (side, table) in [(1u8, t1), (2, t2)] {
            for ((a, j), v) in table {
                let v = NNElement::new(v.map_labels(|k| Ok(rename(side, k)))?)?;
                action.insert((a, rename(side, &j)), v);
            }
        }
        BasedModule::explicit(&self.ring, basis, action, None)
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::constructions::{group_ring, FiniteGroupPresentation};

    pub fn b(s: &str) -> BasisId {
        BasisId::new(s)
    }

    pub fn z(n: usize, g: &str) -> BasedRing {
        group_ring(&FiniteGroupPresentation::cyclic(n, g).unwrap()).unwrap()
    }

    /// Rank-1 module over a group ring with every element acting trivially.
    pub fn trivial_module(ring: &BasedRing) -> BasedModule {
        let action =
            ring.finite_basis().unwrap()[1..].iter().map(|a| ((a.clone(), b("j")), NNElement::basis(b("j")))).collect();
        BasedModule::explicit(ring, vec![b("j")], action, None).unwrap()
    }
}
