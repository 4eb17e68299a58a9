//! Based rings and fusion rings.
//!
//! A [`BasedRing`] is a cheap, shareable handle. Finite rings carry their
//! whole basis; lazy rings (SU(2), free products, ...) enumerate their basis
//! by product closure of a generator set and compute products on demand.
//! Products of lazy rings are memoised; the memo is a pure cache and never
//! changes an answer.

mod checks;
mod expr;
mod table;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_rational::Ratio;

use crate::basis::BasisId;
use crate::canonical::content_hash;
use crate::constructions::direct::DirectRules;
use crate::constructions::free::FreeRules;
use crate::constructions::semidirect::SemidirectRules;
use crate::constructions::su2::Su2Rules;
use crate::element::{Element, NNElement};
use crate::error::{Error, Result};

pub use checks::{check_dimension, check_frobenius_reciprocity, check_ring_axioms};
pub use expr::{DimValue, ExplicitRingSpec, RingExpr};
pub(crate) use table::FusionTable;

/// Exact dimension values.
pub type Dim = Ratio<i64>;

/// The operations every family of fusion rules provides.
pub(crate) trait Rules: Send + Sync {
    fn unit(&self) -> BasisId;
    fn contains(&self, b: &BasisId) -> bool;
    fn conj(&self, b: &BasisId) -> Result<BasisId>;
    fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement>;
    fn dim(&self, b: &BasisId) -> Result<Dim>;
    /// `Some` iff the basis is finite.
    fn finite_basis(&self) -> Option<Vec<BasisId>>;
    /// Generators whose product closure is the whole basis (lazy rings).
    fn generators(&self) -> Vec<BasisId>;
}

pub(crate) enum RingKind {
    Table(FusionTable),
    Su2(Su2Rules),
    Direct(DirectRules),
    Free(FreeRules),
    Semidirect(SemidirectRules),
}

impl RingKind {
    fn rules(&self) -> &dyn Rules {
        match self {
            RingKind::Table(r) => r,
            RingKind::Su2(r) => r,
            RingKind::Direct(r) => r,
            RingKind::Free(r) => r,
            RingKind::Semidirect(r) => r,
        }
    }
}

struct RingInner {
    expr: RingExpr,
    fingerprint: String,
    kind: RingKind,
    finite_basis: Option<Vec<BasisId>>,
    products: RwLock<HashMap<(BasisId, BasisId), NNElement>>,
    // product-closure levels S_0, S_1, ... of a lazy ring
    levels: Mutex<Vec<BTreeSet<BasisId>>>,
}

/// A based ring with a dimension function.
#[derive(Clone)]
pub struct BasedRing {
    inner: Arc<RingInner>,
}

impl fmt::Debug for BasedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasedRing")
            .field("construct", &self.inner.expr.name())
            .field("fingerprint", &&self.inner.fingerprint[..12])
            .finish()
    }
}

impl BasedRing {
    pub(crate) fn from_kind(expr: RingExpr, kind: RingKind) -> BasedRing {
        let finite_basis = kind.rules().finite_basis().map(|mut basis| {
            let unit = kind.rules().unit();
            basis.sort_by(|a, b| (a != &unit, a).cmp(&(b != &unit, b)));
            basis
        });
        let fingerprint = content_hash(&expr);
        BasedRing {
            inner: Arc::new(RingInner {
                expr,
                fingerprint,
                kind,
                finite_basis,
                products: RwLock::new(HashMap::new()),
                levels: Mutex::new(Vec::new()),
            }),
        }
    }

    /// Builds the ring described by a construction expression.
    pub fn from_expr(expr: &RingExpr) -> Result<BasedRing> {
        expr.build()
    }

    pub(crate) fn kind(&self) -> &RingKind {
        &self.inner.kind
    }

    /// The construction expression this ring was built from.
    pub fn expr(&self) -> &RingExpr {
        &self.inner.expr
    }

    /// SHA-256 of the canonical construction expression.
    pub fn fingerprint(&self) -> &str {
        &self.inner.fingerprint
    }

    pub fn same_ring(&self, other: &BasedRing) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.fingerprint() == other.fingerprint()
    }

    pub fn unit(&self) -> BasisId {
        self.inner.kind.rules().unit()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.finite_basis.is_some()
    }

    /// Full basis of a finite ring, unit first.
    pub fn finite_basis(&self) -> Option<&[BasisId]> {
        self.inner.finite_basis.as_deref()
    }

    pub fn contains(&self, b: &BasisId) -> bool {
        match &self.inner.finite_basis {
            Some(basis) => basis.binary_search_by(|x| self.basis_order(x, b)).is_ok(),
            None => self.inner.kind.rules().contains(b),
        }
    }

    fn basis_order(&self, a: &BasisId, b: &BasisId) -> std::cmp::Ordering {
        let unit = self.unit();
        (a != &unit, a).cmp(&(b != &unit, b))
    }

    pub(crate) fn require(&self, b: &BasisId) -> Result<()> {
        if self.contains(b) {
            Ok(())
        } else {
            Err(Error::UnknownBasis(b.to_string()))
        }
    }

    pub fn conj(&self, b: &BasisId) -> Result<BasisId> {
        self.require(b)?;
        self.inner.kind.rules().conj(b)
    }

    pub fn dim(&self, b: &BasisId) -> Result<Dim> {
        self.require(b)?;
        self.inner.kind.rules().dim(b)
    }

    /// Fusion rule `a ⊗ b = Σ N^c_{a,b} c` on basis elements.
    pub fn fuse(&self, a: &BasisId, b: &BasisId) -> Result<NNElement> {
        self.require(a)?;
        self.require(b)?;
        if let RingKind::Table(t) = &self.inner.kind {
            return t.fuse(a, b);
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.inner.products.read().expect("product cache").get(&key) {
            return Ok(hit.clone());
        }
        let value = self.inner.kind.rules().fuse(a, b)?;
        self.inner.products.write().expect("product cache").entry(key).or_insert_with(|| value.clone());
        Ok(value)
    }

    /// Bilinear extension of [`fuse`](Self::fuse).
    pub fn tensor(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (x, cx) in a.iter() {
            for (y, cy) in b.iter() {
                let c = cx.checked_mul(cy).ok_or(Error::Overflow("tensor coefficient"))?;
                let p = self.fuse(x, y)?;
                out.add_scaled(&p, c)?;
            }
        }
        Ok(out)
    }

    /// Coefficient-preserving relabelling by the involution.
    pub fn conjugate(&self, a: &Element) -> Result<Element> {
        a.map_labels(|b| self.conj(b))
    }

    /// Generators of the product closure. For finite rings, every non-unit
    /// basis element.
    pub fn generators(&self) -> Vec<BasisId> {
        match &self.inner.finite_basis {
            Some(basis) => basis[1..].to_vec(),
            None => {
                let mut g = self.inner.kind.rules().generators();
                g.sort();
                g.dedup();
                g
            }
        }
    }

    /// Basis elements together with the number of generators needed to
    /// reach them, ordered by (depth, label). Finite rings return their whole
    /// basis for every depth.
    pub fn graded_basis(&self, depth: usize) -> Result<Vec<(BasisId, usize)>> {
        if let Some(basis) = &self.inner.finite_basis {
            return Ok(basis.iter().enumerate().map(|(i, b)| (b.clone(), usize::from(i > 0))).collect());
        }
        let levels = self.closure_levels(depth)?;
        let mut first: HashMap<&BasisId, usize> = HashMap::new();
        for (k, level) in levels.iter().enumerate().take(depth + 1) {
            for b in level {
                first.entry(b).or_insert(k);
            }
        }
        let mut out: Vec<(BasisId, usize)> = first.into_iter().map(|(b, k)| (b.clone(), k)).collect();
        out.sort_by(|(a, ka), (b, kb)| (ka, a).cmp(&(kb, b)));
        Ok(out)
    }

    /// All basis elements appearing in products of at most `depth`
    /// generators, ordered by (depth of first appearance, label).
    pub fn basis_up_to_depth(&self, depth: usize) -> Result<Vec<BasisId>> {
        Ok(self.graded_basis(depth)?.into_iter().map(|(b, _)| b).collect())
    }

    /// Generation depth of `b`, if it appears within `max_depth`.
    pub fn depth_of(&self, b: &BasisId, max_depth: usize) -> Result<Option<usize>> {
        if self.is_finite() {
            self.require(b)?;
            return Ok(Some(usize::from(b != &self.unit())));
        }
        let levels = self.closure_levels(max_depth)?;
        Ok(levels.iter().take(max_depth + 1).position(|l| l.contains(b)))
    }

    fn closure_levels(&self, depth: usize) -> Result<Vec<BTreeSet<BasisId>>> {
        let mut levels = self.inner.levels.lock().expect("closure levels");
        if levels.is_empty() {
            levels.push(BTreeSet::from([self.unit()]));
        }
        let gens = self.generators();
        while levels.len() <= depth {
            let prev = levels.last().expect("non-empty");
            let mut next = BTreeSet::new();
            for g in &gens {
                for x in prev {
                    next.extend(self.fuse(g, x)?.support().cloned());
                }
            }
            levels.push(next);
        }
        Ok(levels[..=depth].to_vec())
    }

    /// Snapshot of memoised products, for persistence.
    pub fn cached_products(&self) -> Vec<((BasisId, BasisId), NNElement)> {
        let map = self.inner.products.read().expect("product cache");
        let mut v: Vec<_> = map.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Seeds the product memo. Entries for labels outside the basis are
    /// ignored.
    pub fn prefill_products<I>(&self, entries: I)
    where
        I: IntoIterator<Item = ((BasisId, BasisId), NNElement)>,
    {
        if self.is_finite() {
            return;
        }
        let mut map = self.inner.products.write().expect("product cache");
        for ((a, b), v) in entries {
            if self.contains(&a) && self.contains(&b) && v.support().all(|c| self.contains(c)) {
                map.entry((a, b)).or_insert(v);
            }
        }
    }
}
