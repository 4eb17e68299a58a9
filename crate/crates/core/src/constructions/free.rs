//! Free products of based rings: alternating words in the non-trivial
//! basis elements of the two factors.
//!
//! Word labels join letters with `.`; the empty word is `ε`. A letter is
//! wrapped in `[...]` when its own label contains `.` or `:`, and is prefixed
//! with `1:` or `2:` when both factors have a basis element of that name.

use std::collections::BTreeMap;

use num_traits::CheckedMul;

use crate::basis::{split_top_level, strip_wrapping, BasisId, EMPTY_WORD};
use crate::element::NNElement;
use crate::error::{Error, Result};
use crate::ring::{BasedRing, Dim, RingExpr, RingKind, Rules};
use crate::subring::{EmbeddingMap, SubringEmbedding};

use super::direct::ProductConstruction;

/// Longest chain of boundary contractions before giving up.
const RECURSION_GUARD: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Side {
    Left,
    Right,
}

type Letter = (Side, BasisId);
type Word = Vec<Letter>;

pub(crate) struct FreeRules {
    pub(crate) left: BasedRing,
    pub(crate) right: BasedRing,
}

impl FreeRules {
    fn factor(&self, side: Side) -> &BasedRing {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn ambiguous(&self, b: &BasisId) -> bool {
        self.left.contains(b) && self.right.contains(b)
    }

    fn render_letter(&self, (side, b): &Letter) -> String {
        let s = b.as_str();
        let body = if s.contains(['.', ':']) || s.starts_with('[') { format!("[{s}]") } else { s.to_string() };
        if self.ambiguous(b) {
            let tag = if *side == Side::Left { 1 } else { 2 };
            format!("{tag}:{body}")
        } else {
            body
        }
    }

    pub(crate) fn render(&self, w: &[Letter]) -> BasisId {
        if w.is_empty() {
            return BasisId::new(EMPTY_WORD);
        }
        let parts: Vec<String> = w.iter().map(|l| self.render_letter(l)).collect();
        BasisId::new(parts.join("."))
    }

    fn parse_letter(&self, text: &str) -> Option<Letter> {
        let (tag, rest) = match text.split_once(':') {
            Some(("1", rest)) => (Some(Side::Left), rest),
            Some(("2", rest)) => (Some(Side::Right), rest),
            _ => (None, text),
        };
        let label = BasisId::new(strip_wrapping(rest, '[', ']').unwrap_or(rest));
        let side = match tag {
            Some(side) => side,
            None if self.left.contains(&label) => Side::Left,
            None if self.right.contains(&label) => Side::Right,
            None => return None,
        };
        let ring = self.factor(side);
        (ring.contains(&label) && label != ring.unit()).then_some((side, label))
    }

    /// Parses a word label, accepting only the canonical rendering of an
    /// alternating word.
    pub(crate) fn parse(&self, b: &BasisId) -> Result<Word> {
        let unknown = || Error::UnknownBasis(b.to_string());
        if b.as_str() == EMPTY_WORD {
            return Ok(Vec::new());
        }
        let parts = split_top_level(b.as_str(), '.').ok_or_else(unknown)?;
        let word: Word = parts.iter().map(|p| self.parse_letter(p)).collect::<Option<_>>().ok_or_else(unknown)?;
        if word.windows(2).any(|w| w[0].0 == w[1].0) || &self.render(&word) != b {
            return Err(unknown());
        }
        Ok(word)
    }

    /// Product of alternating words. Letters from different factors
    /// concatenate; otherwise the boundary letters fuse, non-trivial
    /// constituents are spliced in, and the unit constituent recurses on
    /// the shorter words.
    fn multiply(
        &self,
        a: &[Letter],
        b: &[Letter],
        out: &mut BTreeMap<Word, i64>,
        scale: i64,
        guard: usize,
    ) -> Result<()> {
        if guard > RECURSION_GUARD {
            return Err(Error::RecursionGuard("contracting free-product words"));
        }
        let (Some((x, zeta)), Some((x2, zeta2))) = (a.split_last(), b.split_first()) else {
            let mut w = a.to_vec();
            w.extend_from_slice(b);
            return add(out, w, scale);
        };
        if x.0 != x2.0 {
            let mut w = a.to_vec();
            w.extend_from_slice(b);
            return add(out, w, scale);
        }
        let ring = self.factor(x.0);
        let unit = ring.unit();
        for (t, c) in ring.fuse(&x.1, &x2.1)?.iter() {
            let c = c.checked_mul(scale).ok_or(Error::Overflow("free product coefficient"))?;
            if *t == unit {
                self.multiply(zeta, zeta2, out, c, guard + 1)?;
            } else {
                let mut w = zeta.to_vec();
                w.push((x.0, t.clone()));
                w.extend_from_slice(zeta2);
                add(out, w, c)?;
            }
        }
        Ok(())
    }
}

fn add(out: &mut BTreeMap<Word, i64>, w: Word, c: i64) -> Result<()> {
    let slot = out.entry(w).or_insert(0);
    *slot = slot.checked_add(c).ok_or(Error::Overflow("free product coefficient"))?;
    Ok(())
}

impl Rules for FreeRules {
    fn unit(&self) -> BasisId {
        BasisId::new(EMPTY_WORD)
    }

    fn contains(&self, b: &BasisId) -> bool {
        self.parse(b).is_ok()
    }

    fn conj(&self, b: &BasisId) -> Result<BasisId> {
        let w = self.parse(b)?;
        let rev = w.iter().rev().map(|(s, l)| Ok((*s, self.factor(*s).conj(l)?))).collect::<Result<Word>>()?;
        Ok(self.render(&rev))
    }

    fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement> {
        let (wa, wb) = (self.parse(a)?, self.parse(b)?);
        let mut out = BTreeMap::new();
        self.multiply(&wa, &wb, &mut out, 1, 0)?;
        NNElement::from_terms(out.into_iter().map(|(w, c)| (self.render(&w), c)))
    }

    fn dim(&self, b: &BasisId) -> Result<Dim> {
        self.parse(b)?.iter().try_fold(Dim::from_integer(1), |acc, (s, l)| {
            acc.checked_mul(&self.factor(*s).dim(l)?).ok_or(Error::Overflow("dimension"))
        })
    }

    fn finite_basis(&self) -> Option<Vec<BasisId>> {
        // finite only when one factor is trivial
        let (l, r) = (self.left.finite_basis(), self.right.finite_basis());
        let (side, other) = match (l, r) {
            (Some(l), _) if l.len() == 1 => (Side::Right, r?),
            (_, Some(r)) if r.len() == 1 => (Side::Left, l?),
            _ => return None,
        };
        let unit = self.factor(side).unit();
        let mut basis = vec![BasisId::new(EMPTY_WORD)];
        basis.extend(other.iter().filter(|x| **x != unit).map(|x| self.render(&[(side, x.clone())])));
        Some(basis)
    }

    fn generators(&self) -> Vec<BasisId> {
        let mut g: Vec<BasisId> = self.left.generators().into_iter().map(|x| self.render(&[(Side::Left, x)])).collect();
        g.extend(self.right.generators().into_iter().map(|x| self.render(&[(Side::Right, x)])));
        g
    }
}

impl FreeRules {
    /// The one-letter word of a factor element (the empty word for its unit).
    pub(crate) fn letter(&self, side: Side, x: &BasisId) -> Result<BasisId> {
        let ring = self.factor(side);
        ring.require(x)?;
        Ok(if *x == ring.unit() { BasisId::new(EMPTY_WORD) } else { self.render(&[(side, x.clone())]) })
    }

    /// Inverse of [`letter`](Self::letter).
    pub(crate) fn unletter(&self, side: Side, b: &BasisId) -> Option<BasisId> {
        match self.parse(b).ok()?.as_slice() {
            [] => Some(self.factor(side).unit()),
            [(s, x)] if *s == side => Some(x.clone()),
            _ => None,
        }
    }
}

/// `R1 ✻ R2`: the free product, with both factors embedded as one-letter
/// words.
pub fn free_product(r1: &BasedRing, r2: &BasedRing) -> ProductConstruction {
    let expr = RingExpr::FreeProduct { left: Box::new(r1.expr().clone()), right: Box::new(r2.expr().clone()) };
    let ring = BasedRing::from_kind(expr, RingKind::Free(FreeRules { left: r1.clone(), right: r2.clone() }));
    ProductConstruction {
        left: SubringEmbedding::new(r1.clone(), ring.clone(), EmbeddingMap::LeftFactor),
        right: SubringEmbedding::new(r2.clone(), ring.clone(), EmbeddingMap::RightFactor),
        ring,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{group_ring, su2_ring, FiniteGroupPresentation};
    use crate::ring::{check_dimension, check_ring_axioms};

    fn b(s: &str) -> BasisId {
        BasisId::new(s)
    }

    fn z(n: usize, g: &str) -> BasedRing {
        group_ring(&FiniteGroupPresentation::cyclic(n, g).unwrap()).unwrap()
    }

    /// Reduced words of Z/2 ✻ Z/2 = ⟨g, h | g², h²⟩: cancel equal adjacent
    /// letters.
    fn dihedral_reduce(word: &str) -> String {
        let mut out: Vec<char> = Vec::new();
        for c in word.chars() {
            if out.last() == Some(&c) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        out.into_iter().collect()
    }

    fn dotted(w: &str) -> BasisId {
        if w.is_empty() {
            b(EMPTY_WORD)
        } else {
            b(&w.chars().map(String::from).collect::<Vec<_>>().join("."))
        }
    }

    #[test]
    fn infinite_dihedral_products_match_word_reduction() {
        let r = free_product(&z(2, "g"), &z(2, "h")).ring;
        assert_eq!(r.fuse(&b("g.h.g"), &b("g.h.g")).unwrap().as_basis(), Some(&b(EMPTY_WORD)));
        assert_eq!(r.fuse(&b("g"), &b("h")).unwrap().as_basis(), Some(&b("g.h")));
        let words = r.basis_up_to_depth(4).unwrap();
        assert_eq!(words.len(), 1 + 2 * 4);
        for x in &words {
            for y in &words {
                let xs = x.as_str().replace(['.', 'ε'], "");
                let ys = y.as_str().replace(['.', 'ε'], "");
                let want = dotted(&dihedral_reduce(&format!("{xs}{ys}")));
                assert_eq!(r.fuse(x, y).unwrap().as_basis(), Some(&want), "{x}⊗{y}");
            }
        }
    }

    #[test]
    fn boundary_contraction_keeps_the_unit_term() {
        let z2 = z(2, "g");
        let r = free_product(&su2_ring(), &z2).ring;
        assert_eq!(r.fuse(&b("x1"), &b("x1")).unwrap().to_string(), "x2 ⊕ ε");
        assert_eq!(r.fuse(&b("x1.g"), &b("g.x1")).unwrap().to_string(), "x2 ⊕ ε");
        assert_eq!(r.fuse(&b("g.x1"), &b("x2.g")).unwrap().to_string(), "g.x1.g ⊕ g.x3.g");
        assert_eq!(r.dim(&b("x2.g.x1")).unwrap(), Dim::from_integer(6));
        assert_eq!(r.conj(&b("x2.g.x1")).unwrap(), b("x1.g.x2"));
    }

    #[test]
    fn shared_labels_are_tagged() {
        let r = free_product(&z(2, "g"), &z(3, "g")).ring;
        let w = r.fuse(&b("1:g"), &b("2:g")).unwrap();
        assert_eq!(w.to_string(), "1:g.2:g");
        assert!(!r.contains(&b("g")));
        assert!(!r.contains(&b("1:g.1:g")));
        assert_eq!(r.conj(&b("1:g.2:g")).unwrap(), b("g2.1:g"));
    }

    #[test]
    fn axioms_hold_within_depth() {
        let r = free_product(&z(2, "g"), &z(3, "a")).ring;
        assert!(check_ring_axioms(&r, 4).unwrap().holds());
        assert!(check_dimension(&r, 4).unwrap().holds());
    }

    #[test]
    fn trivial_factor_gives_a_finite_ring() {
        let triv = group_ring(&FiniteGroupPresentation::trivial()).unwrap();
        let r = free_product(&triv, &z(3, "a")).ring;
        assert_eq!(r.finite_basis().unwrap(), [b(EMPTY_WORD), b("a"), b("a2")]);
    }
}
