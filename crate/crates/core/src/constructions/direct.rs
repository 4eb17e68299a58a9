//! Direct products of based rings: pairs with componentwise rules.

use num_traits::CheckedMul;

use crate::basis::{pair_label, parse_pair, BasisId};
use crate::element::NNElement;
use crate::error::{Error, Result};
use crate::ring::{BasedRing, Dim, RingExpr, RingKind, Rules};
use crate::subring::{EmbeddingMap, SubringEmbedding};

pub(crate) struct DirectRules {
    pub(crate) left: BasedRing,
    pub(crate) right: BasedRing,
}

impl DirectRules {
    pub(crate) fn split(&self, b: &BasisId) -> Result<(BasisId, BasisId)> {
        let unknown = || Error::UnknownBasis(b.to_string());
        let (x, z) = parse_pair(b.as_str()).ok_or_else(unknown)?;
        let (x, z) = (BasisId::new(x), BasisId::new(z));
        if self.left.contains(&x) && self.right.contains(&z) {
            Ok((x, z))
        } else {
            Err(unknown())
        }
    }
}

impl Rules for DirectRules {
    fn unit(&self) -> BasisId {
        pair_label(&self.left.unit(), &self.right.unit())
    }

    fn contains(&self, b: &BasisId) -> bool {
        self.split(b).is_ok()
    }

    fn conj(&self, b: &BasisId) -> Result<BasisId> {
        let (x, z) = self.split(b)?;
        Ok(pair_label(&self.left.conj(&x)?, &self.right.conj(&z)?))
    }

    fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement> {
        let (x, z) = self.split(a)?;
        let (x2, z2) = self.split(b)?;
        let left = self.left.fuse(&x, &x2)?;
        let right = self.right.fuse(&z, &z2)?;
        let mut terms = Vec::new();
        for (p, cp) in left.iter() {
            for (q, cq) in right.iter() {
                let c = cp.checked_mul(cq).ok_or(Error::Overflow("direct product coefficient"))?;
                terms.push((pair_label(p, q), c));
            }
        }
        NNElement::from_terms(terms)
    }

    fn dim(&self, b: &BasisId) -> Result<Dim> {
        let (x, z) = self.split(b)?;
        self.left.dim(&x)?.checked_mul(&self.right.dim(&z)?).ok_or(Error::Overflow("dimension"))
    }

    fn finite_basis(&self) -> Option<Vec<BasisId>> {
        let (l, r) = (self.left.finite_basis()?, self.right.finite_basis()?);
        Some(l.iter().flat_map(|x| r.iter().map(move |z| pair_label(x, z))).collect())
    }

    fn generators(&self) -> Vec<BasisId> {
        let (e1, e2) = (self.left.unit(), self.right.unit());
        let mut g: Vec<BasisId> = self.left.generators().iter().map(|x| pair_label(x, &e2)).collect();
        g.extend(self.right.generators().iter().map(|z| pair_label(&e1, z)));
        g
    }
}

/// A two-factor construction together with the canonical embeddings of
/// its factors.
#[derive(Clone, Debug)]
pub struct ProductConstruction {
    pub ring: BasedRing,
    pub left: SubringEmbedding,
    pub right: SubringEmbedding,
}

/// `R1 × R2`: basis of pairs `(x,z)`, componentwise fusion and involution,
/// multiplicative dimension; factors embed as `x ↦ (x,𝟙)` and `z ↦ (𝟙,z)`.
pub fn direct_product(r1: &BasedRing, r2: &BasedRing) -> ProductConstruction {
    let expr = RingExpr::DirectProduct { left: Box::new(r1.expr().clone()), right: Box::new(r2.expr().clone()) };
    let ring = BasedRing::from_kind(expr, RingKind::Direct(DirectRules { left: r1.clone(), right: r2.clone() }));
    ProductConstruction {
        left: SubringEmbedding::new(r1.clone(), ring.clone(), EmbeddingMap::LeftFactor),
        right: SubringEmbedding::new(r2.clone(), ring.clone(), EmbeddingMap::RightFactor),
        ring,
    }
}
