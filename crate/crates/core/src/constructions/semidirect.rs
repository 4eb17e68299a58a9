//! Semidirect products `Γ ⋉ R` of a finite group acting on a based ring by
//! automorphisms.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::direct::ProductConstruction;
use super::group::{group_ring_from_spec, FiniteGroupPresentation, GroupSpec};
use crate::basis::{pair_label, parse_pair, BasisId};
use crate::element::NNElement;
use crate::error::{invalid, Error, Result};
use crate::ring::{BasedRing, Dim, RingExpr, RingKind, Rules};
use crate::subring::{EmbeddingMap, SubringEmbedding};
use crate::verdict::Witness;

/// Depth to which actions on lazy target rings are verified.
const LAZY_ACTION_DEPTH: usize = 4;

/// For each group element, the basis permutation it induces on the target.
/// Unlisted group elements and unlisted basis elements act trivially.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionSpec(pub BTreeMap<BasisId, BTreeMap<BasisId, BasisId>>);

impl ActionSpec {
    pub fn build(&self, group: &FiniteGroupPresentation, target: &BasedRing) -> Result<RingAutomorphismAction> {
        RingAutomorphismAction::new(group, target, self.0.clone())
    }
}

/// A verified action of a finite group on a based ring by fusion-ring
/// automorphisms, composed as a left action: `α_{ab} = α_a ∘ α_b`.
#[derive(Clone, Debug)]
pub struct RingAutomorphismAction {
    perms: HashMap<BasisId, HashMap<BasisId, BasisId>>,
    spec: ActionSpec,
}

impl RingAutomorphismAction {
    pub fn new(
        group: &FiniteGroupPresentation,
        target: &BasedRing,
        perms: BTreeMap<BasisId, BTreeMap<BasisId, BasisId>>,
    ) -> Result<Self> {
        let mut spec = BTreeMap::new();
        for (g, map) in perms {
            group.index_of(&g)?;
            for (x, y) in &map {
                target.require(x)?;
                target.require(y)?;
            }
            let map: BTreeMap<BasisId, BasisId> = map.into_iter().filter(|(x, y)| x != y).collect();
            if !map.is_empty() {
                spec.insert(g, map);
            }
        }
        let action = RingAutomorphismAction {
            perms: spec
                .iter()
                .map(|(g, m)| (g.clone(), m.iter().map(|(a, b)| (a.clone(), b.clone())).collect()))
                .collect(),
            spec: ActionSpec(spec),
        };
        if let Some(w) = action.violation(group, target)? {
            return Err(invalid(format!("not an action by fusion-ring automorphisms: {w}")));
        }
        Ok(action)
    }

    /// The trivial action.
    pub fn trivial() -> Self {
        RingAutomorphismAction { perms: HashMap::new(), spec: ActionSpec::default() }
    }

    pub fn to_spec(&self) -> ActionSpec {
        self.spec.clone()
    }

    /// `α_γ(x)`
    pub fn apply(&self, g: &BasisId, x: &BasisId) -> BasisId {
        self.perms.get(g).and_then(|m| m.get(x)).unwrap_or(x).clone()
    }

    fn apply_element(&self, g: &BasisId, e: &NNElement) -> Result<NNElement> {
        NNElement::new(e.map_labels(|x| Ok(self.apply(g, x)))?)
    }

    /// First violated automorphism or action law, checked on the whole
    /// basis of a finite target and within a fixed depth otherwise.
    fn violation(&self, group: &FiniteGroupPresentation, target: &BasedRing) -> Result<Option<Witness>> {
        let basis = target.basis_up_to_depth(LAZY_ACTION_DEPTH)?;
        let unit = target.unit();
        for g in group.elements() {
            let fail = |prop: &str, items: Vec<BasisId>, detail: String| Ok(Some(Witness::new(prop, items, detail)));
            if let Some(m) = self.perms.get(g) {
                let mut images: Vec<&BasisId> = m.values().collect();
                images.sort();
                let mut sources: Vec<&BasisId> = m.keys().collect();
                sources.sort();
                if images != sources {
                    return fail("bijective", vec![g.clone()], format!("α_{g} does not permute its listed labels"));
                }
            }
            if self.apply(g, &unit) != unit {
                return fail("unit", vec![g.clone()], format!("α_{g}(𝟙) = {}", self.apply(g, &unit)));
            }
            for x in &basis {
                let gx = self.apply(g, x);
                if target.conj(&gx)? != self.apply(g, &target.conj(x)?) {
                    return fail(
                        "conjugation",
                        vec![g.clone(), x.clone()],
                        format!("α_{g} does not commute with conj at {x}"),
                    );
                }
                if target.dim(&gx)? != target.dim(x)? {
                    return fail("dimension", vec![g.clone(), x.clone()], format!("d(α_{g}({x})) ≠ d({x})"));
                }
                for y in &basis {
                    let lhs = target.fuse(&gx, &self.apply(g, y))?;
                    let rhs = self.apply_element(g, &target.fuse(x, y)?)?;
                    if lhs != rhs {
                        return fail(
                            "fusion",
                            vec![g.clone(), x.clone(), y.clone()],
                            format!("α_{g}({x})⊗α_{g}({y}) = {lhs} but α_{g}({x}⊗{y}) = {rhs}"),
                        );
                    }
                }
            }
            for h in group.elements() {
                let gh = group.mul(g, h)?;
                for x in &basis {
                    let lhs = self.apply(gh, x);
                    let rhs = self.apply(g, &self.apply(h, x));
                    if lhs != rhs {
                        return fail(
                            "homomorphism",
                            vec![g.clone(), h.clone(), x.clone()],
                            format!("α_{gh}({x}) = {lhs} but α_{g}(α_{h}({x})) = {rhs}"),
                        );
                    }
                }
            }
        }
        Ok(None)
    }
}

pub(crate) struct SemidirectRules {
    pub(crate) group: FiniteGroupPresentation,
    pub(crate) target: BasedRing,
    action: RingAutomorphismAction,
}

impl SemidirectRules {
    pub(crate) fn split(&self, b: &BasisId) -> Result<(BasisId, BasisId)> {
        let unknown = || Error::UnknownBasis(b.to_string());
        let (g, x) = parse_pair(b.as_str()).ok_or_else(unknown)?;
        let (g, x) = (BasisId::new(g), BasisId::new(x));
        if self.group.contains(&g) && self.target.contains(&x) {
            Ok((g, x))
        } else {
            Err(unknown())
        }
    }
}

impl Rules for SemidirectRules {
    fn unit(&self) -> BasisId {
        pair_label(self.group.identity(), &self.target.unit())
    }

    fn contains(&self, b: &BasisId) -> bool {
        self.split(b).is_ok()
    }

    /// `conj(γ,x) = (γ⁻¹, α_γ(conj x))`
    fn conj(&self, b: &BasisId) -> Result<BasisId> {
        let (g, x) = self.split(b)?;
        Ok(pair_label(self.group.inv(&g)?, &self.action.apply(&g, &self.target.conj(&x)?)))
    }

    /// `(γ,x)⊗(γ',x') = (γγ', α_{γ'⁻¹}(x)⊗x')`
    fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement> {
        let (g, x) = self.split(a)?;
        let (h, y) = self.split(b)?;
        let gh = self.group.mul(&g, &h)?;
        let twisted = self.action.apply(self.group.inv(&h)?, &x);
        let prod = self.target.fuse(&twisted, &y)?;
        NNElement::new(prod.map_labels(|z| Ok(pair_label(gh, z)))?)
    }

    fn dim(&self, b: &BasisId) -> Result<Dim> {
        let (_, x) = self.split(b)?;
        self.target.dim(&x)
    }

    fn finite_basis(&self) -> Option<Vec<BasisId>> {
        let t = self.target.finite_basis()?;
        Some(self.group.elements().iter().flat_map(|g| t.iter().map(move |x| pair_label(g, x))).collect())
    }

    fn generators(&self) -> Vec<BasisId> {
        let (e, one) = (self.group.identity(), self.target.unit());
        let mut gens: Vec<BasisId> =
            self.group.elements().iter().filter(|g| *g != e).map(|g| pair_label(g, &one)).collect();
        gens.extend(self.target.generators().iter().map(|x| pair_label(e, x)));
        gens
    }
}

/// A semidirect product with the canonical embeddings `γ ↦ (γ,𝟙)` of Z[Γ]
/// and `x ↦ (e,x)` of the target.
#[derive(Clone, Debug)]
pub struct SemidirectConstruction {
    pub ring: BasedRing,
    pub group: SubringEmbedding,
    pub target: SubringEmbedding,
}

impl From<SemidirectConstruction> for ProductConstruction {
    fn from(c: SemidirectConstruction) -> Self {
        ProductConstruction { ring: c.ring, left: c.group, right: c.target }
    }
}

pub(crate) fn semidirect_with_spec(
    spec: &GroupSpec,
    group: &FiniteGroupPresentation,
    target: &BasedRing,
    action: &RingAutomorphismAction,
) -> Result<SemidirectConstruction> {
    let expr = RingExpr::SemidirectProduct {
        group: spec.clone(),
        target: Box::new(target.expr().clone()),
        action: action.to_spec(),
    };
    let rules = SemidirectRules { group: group.clone(), target: target.clone(), action: action.clone() };
    let ring = BasedRing::from_kind(expr, RingKind::Semidirect(rules));
    let acting = group_ring_from_spec(spec)?;
    Ok(SemidirectConstruction {
        group: SubringEmbedding::new(acting, ring.clone(), EmbeddingMap::ActingGroup),
        target: SubringEmbedding::new(target.clone(), ring.clone(), EmbeddingMap::Target),
        ring,
    })
}

/// `Γ ⋉ R` for a verified automorphism action.
pub fn semidirect_product(
    group: &FiniteGroupPresentation,
    target: &BasedRing,
    action: &RingAutomorphismAction,
) -> Result<SemidirectConstruction> {
    semidirect_with_spec(&group.to_spec(), group, target, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::group_ring;
    use crate::ring::{check_dimension, check_ring_axioms};

    fn b(s: &str) -> BasisId {
        BasisId::new(s)
    }

    fn inversion() -> (FiniteGroupPresentation, BasedRing, RingAutomorphismAction) {
        let z2 = FiniteGroupPresentation::cyclic(2, "g").unwrap();
        let z3 = group_ring(&FiniteGroupPresentation::cyclic(3, "a").unwrap()).unwrap();
        let perms = BTreeMap::from([(b("g"), BTreeMap::from([(b("a"), b("a2")), (b("a2"), b("a"))]))]);
        let act = RingAutomorphismAction::new(&z2, &z3, perms).unwrap();
        (z2, z3, act)
    }

    #[test]
    fn twisted_product() {
        let (z2, z3, act) = inversion();
        let p = semidirect_product(&z2, &z3, &act).unwrap().ring;
        assert_eq!(p.unit(), b("(e,e)"));
        assert_eq!(p.fuse(&b("(g,a)"), &b("(g,e)")).unwrap().as_basis(), Some(&b("(e,a2)")));
        assert_eq!(p.conj(&b("(g,a)")).unwrap(), b("(g,a)"));
        assert!(check_ring_axioms(&p, 4).unwrap().holds());
        assert!(check_dimension(&p, 4).unwrap().holds());
    }

    #[test]
    fn agrees_with_the_symmetric_group() {
        // (γ, a^k) ↦ γ·r^k with γ ∈ {e, s}
        let (z2, z3, act) = inversion();
        let p = semidirect_product(&z2, &z3, &act).unwrap().ring;
        let s3 = FiniteGroupPresentation::symmetric3();
        let phi = |label: &BasisId| -> BasisId {
            let (g, x) = parse_pair(label.as_str()).unwrap();
            let g = if g == "e" { b("e") } else { b("s") };
            let r = match x {
                "e" => b("e"),
                "a" => b("r"),
                _ => b("r2"),
            };
            s3.mul(&g, &r).unwrap().clone()
        };
        let basis = p.finite_basis().unwrap().to_vec();
        for x in &basis {
            for y in &basis {
                let z = p.fuse(x, y).unwrap().as_basis().unwrap().clone();
                assert_eq!(&phi(&z), s3.mul(&phi(x), &phi(y)).unwrap(), "{x}⊗{y}");
            }
            assert_eq!(&phi(&p.conj(x).unwrap()), s3.inv(&phi(x)).unwrap());
        }
    }

    #[test]
    fn non_automorphisms_are_rejected() {
        let z2 = FiniteGroupPresentation::cyclic(2, "g").unwrap();
        let z4 = group_ring(&FiniteGroupPresentation::cyclic(4, "a").unwrap()).unwrap();
        // a ↔ a2 does not respect a⊗a = a2
        let perms = BTreeMap::from([(b("g"), BTreeMap::from([(b("a"), b("a2")), (b("a2"), b("a"))]))]);
        let err = RingAutomorphismAction::new(&z2, &z4, perms).unwrap_err();
        assert!(err.to_string().contains("automorphisms"), "{err}");
        // an automorphism of order 2 assigned to an element of order 3 is not an action
        let z3 = FiniteGroupPresentation::cyclic(3, "c").unwrap();
        let perms = BTreeMap::from([(b("c"), BTreeMap::from([(b("a"), b("a3")), (b("a3"), b("a"))]))]);
        assert!(RingAutomorphismAction::new(&z3, &z4, perms).is_err());
    }
}
