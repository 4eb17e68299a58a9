//! Clebsch-Gordan fusion rules of SU(2) and its SO(3) subring.

use crate::basis::BasisId;
use crate::element::NNElement;
use crate::error::{Error, Result};
use crate::ring::{BasedRing, Dim, RingExpr, RingKind, Rules};
use crate::subring::{EmbeddingMap, SubringEmbedding};

/// `x_m ⊗ x_n = x_{|m−n|} ⊕ x_{|m−n|+2} ⊕ … ⊕ x_{m+n}`; with `even_only`
/// the basis is restricted to even spins (SO(3)).
pub(crate) struct Su2Rules {
    even_only: bool,
}

pub(crate) fn spin_of(b: &BasisId) -> Option<u64> {
    let digits = b.as_str().strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    digits.parse().ok()
}

fn spin(n: u64) -> BasisId {
    BasisId::new(format!("x{n}"))
}

impl Su2Rules {
    fn spin(&self, b: &BasisId) -> Result<u64> {
        spin_of(b).filter(|n| !self.even_only || n % 2 == 0).ok_or_else(|| Error::UnknownBasis(b.to_string()))
    }
}

impl Rules for Su2Rules {
    fn unit(&self) -> BasisId {
        spin(0)
    }

    fn contains(&self, b: &BasisId) -> bool {
        self.spin(b).is_ok()
    }

    fn conj(&self, b: &BasisId) -> Result<BasisId> {
        self.spin(b)?;
        Ok(b.clone())
    }

    fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement> {
        let (m, n) = (self.spin(a)?, self.spin(b)?);
        let top = m.checked_add(n).ok_or(Error::Overflow("SU(2) spin"))?;
        let terms = (m.abs_diff(n)..=top).step_by(2).map(|k| (spin(k), 1));
        NNElement::from_terms(terms)
    }

    fn dim(&self, b: &BasisId) -> Result<Dim> {
        let n = i64::try_from(self.spin(b)?).map_err(|_| Error::Overflow("SU(2) dimension"))?;
        Ok(Dim::from_integer(n + 1))
    }

    fn finite_basis(&self) -> Option<Vec<BasisId>> {
        None
    }

    fn generators(&self) -> Vec<BasisId> {
        vec![spin(if self.even_only { 2 } else { 1 })]
    }
}

/// The fusion ring of SU(2): basis `x0, x1, x2, …`, `conj = id`,
/// `d(x_n) = n + 1`.
pub fn su2_ring() -> BasedRing {
    BasedRing::from_kind(RingExpr::Su2 {}, RingKind::Su2(Su2Rules { even_only: false }))
}

/// The fusion ring of SO(3): the even spins `x0, x2, x4, …`.
pub fn so3_ring() -> BasedRing {
    BasedRing::from_kind(RingExpr::So3 {}, RingKind::Su2(Su2Rules { even_only: true }))
}

/// SO(3) inside SU(2) as the even labels.
pub fn so3_subring() -> SubringEmbedding {
    SubringEmbedding::new(so3_ring(), su2_ring(), EmbeddingMap::Identity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(n: u64) -> BasisId {
        spin(n)
    }

    /// Character of x_n at angle θ: Σ_k cos((n − 2k)θ), the independent
    /// oracle for the Clebsch-Gordan rule.
    fn character(n: u64, theta: f64) -> f64 {
        (0..=n).map(|k| ((n as f64 - 2.0 * k as f64) * theta).cos()).sum()
    }

    #[test]
    fn small_products() {
        let r = su2_ring();
        assert_eq!(r.fuse(&x(1), &x(2)).unwrap().to_string(), "x1 ⊕ x3");
        assert_eq!(r.fuse(&x(0), &x(5)).unwrap().to_string(), "x5");
        let sq = r.fuse(&x(3), &x(3)).unwrap();
        assert_eq!(sq.to_string(), "x0 ⊕ x2 ⊕ x4 ⊕ x6");
        let total: Dim = sq.iter().map(|(b, c)| r.dim(b).unwrap() * c).sum();
        assert_eq!(total, Dim::from_integer(16));
    }

    #[test]
    fn labels_are_canonical() {
        let r = su2_ring();
        assert!(r.contains(&x(12)));
        for bad in ["x", "x01", "y1", "x-1", "x1.5"] {
            assert!(!r.contains(&BasisId::new(bad)), "{bad}");
        }
        assert!(!so3_ring().contains(&x(3)));
    }

    #[test]
    fn so3_is_closed_under_products() {
        let s = so3_ring();
        assert_eq!(s.fuse(&x(2), &x(2)).unwrap().to_string(), "x0 ⊕ x2 ⊕ x4");
        assert_eq!(s.basis_up_to_depth(2).unwrap(), vec![x(0), x(2), x(4)]);
    }

    proptest! {
        #[test]
        fn characters_multiply(m in 0u64..12, n in 0u64..12, theta in 0.1f64..3.0) {
            let prod = su2_ring().fuse(&x(m), &x(n)).unwrap();
            let rhs: f64 = prod.iter().map(|(b, c)| c as f64 * character(spin_of(b).unwrap(), theta)).sum();
            prop_assert!((character(m, theta) * character(n, theta) - rhs).abs() < 1e-9);
        }
    }
}
