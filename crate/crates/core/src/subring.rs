//! Fusion-subring embeddings, the coset relation they induce on the ambient
//! basis, and divisibility certificates.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{pair_label, BasisId};
use crate::constructions::free::Side;
use crate::element::Element;
use crate::error::{invalid, Error, Result};
use crate::ring::{BasedRing, RingKind};
use crate::verdict::{Verdict, Witness};

/// How sub basis labels are sent into the ambient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMap {
    /// Labels are kept as they are.
    Identity,
    /// First factor of a direct or free product.
    LeftFactor,
    /// Second factor of a direct or free product.
    RightFactor,
    /// `γ ↦ (γ,𝟙)` into a semidirect product.
    ActingGroup,
    /// `x ↦ (e,x)` into a semidirect product.
    Target,
    /// An explicit label table.
    Table(BTreeMap<BasisId, BasisId>),
}

/// A based ring `S` together with a map of its basis into the basis of `R`.
/// Nothing is checked on construction; see [`verify_subring`].
#[derive(Clone, Debug)]
pub struct SubringEmbedding {
    sub: BasedRing,
    ambient: BasedRing,
    map: EmbeddingMap,
}

fn wrong_kind(map: &EmbeddingMap) -> Error {
    invalid(format!("{map:?} embedding does not fit the ambient construction"))
}

impl SubringEmbedding {
    pub fn new(sub: BasedRing, ambient: BasedRing, map: EmbeddingMap) -> Self {
        SubringEmbedding { sub, ambient, map }
    }

    /// `S ⊂ S`
    pub fn identity(ring: &BasedRing) -> Self {
        Self::new(ring.clone(), ring.clone(), EmbeddingMap::Identity)
    }

    pub fn sub(&self) -> &BasedRing {
        &self.sub
    }

    pub fn ambient(&self) -> &BasedRing {
        &self.ambient
    }

    pub fn map(&self) -> &EmbeddingMap {
        &self.map
    }

    /// Image of a sub basis element.
    pub fn image(&self, s: &BasisId) -> Result<BasisId> {
        self.sub.require(s)?;
        let kind = self.ambient.kind();
        match (&self.map, kind) {
            (EmbeddingMap::Identity, _) => Ok(s.clone()),
            (EmbeddingMap::Table(m), _) => {
                m.get(s).cloned().ok_or_else(|| invalid(format!("no image given for `{s}`")))
            }
            (EmbeddingMap::LeftFactor, RingKind::Direct(r)) => Ok(pair_label(s, &r.right.unit())),
            (EmbeddingMap::RightFactor, RingKind::Direct(r)) => Ok(pair_label(&r.left.unit(), s)),
            (EmbeddingMap::LeftFactor, RingKind::Free(r)) => r.letter(Side::Left, s),
            (EmbeddingMap::RightFactor, RingKind::Free(r)) => r.letter(Side::Right, s),
            (EmbeddingMap::ActingGroup, RingKind::Semidirect(r)) => Ok(pair_label(s, &r.target.unit())),
            (EmbeddingMap::Target, RingKind::Semidirect(r)) => Ok(pair_label(r.group.identity(), s)),
            (map, _) => Err(wrong_kind(map)),
        }
    }

    /// The sub basis element mapped to `i`, if any.
    pub fn preimage(&self, i: &BasisId) -> Option<BasisId> {
        let kind = self.ambient.kind();
        let s = match (&self.map, kind) {
            (EmbeddingMap::Identity, _) => Some(i.clone()),
            (EmbeddingMap::Table(m), _) => m.iter().find(|(_, v)| *v == i).map(|(k, _)| k.clone()),
            (EmbeddingMap::LeftFactor, RingKind::Direct(r)) => {
                r.split(i).ok().filter(|(_, z)| *z == r.right.unit()).map(|(x, _)| x)
            }
            (EmbeddingMap::RightFactor, RingKind::Direct(r)) => {
                r.split(i).ok().filter(|(x, _)| *x == r.left.unit()).map(|(_, z)| z)
            }
            (EmbeddingMap::LeftFactor, RingKind::Free(r)) => r.unletter(Side::Left, i),
            (EmbeddingMap::RightFactor, RingKind::Free(r)) => r.unletter(Side::Right, i),
            (EmbeddingMap::ActingGroup, RingKind::Semidirect(r)) => {
                r.split(i).ok().filter(|(_, x)| *x == r.target.unit()).map(|(g, _)| g)
            }
            (EmbeddingMap::Target, RingKind::Semidirect(r)) => {
                r.split(i).ok().filter(|(g, _)| g == r.group.identity()).map(|(_, x)| x)
            }
            _ => None,
        }?;
        (self.sub.contains(&s) && self.image(&s).ok().as_ref() == Some(i)).then_some(s)
    }

    pub fn in_image(&self, i: &BasisId) -> bool {
        self.preimage(i).is_some()
    }

    pub fn image_element(&self, e: &Element) -> Result<Element> {
        e.map_labels(|s| self.image(s))
    }
}

/// Checks that the map is total and injective on the sub basis within
/// `depth`, preserves unit, involution and dimension, and that the image is
/// closed under fusion with coefficients matching the subring.
pub fn verify_subring(e: &SubringEmbedding, depth: usize) -> Result<Verdict> {
    let (sub, ambient) = (&e.sub, &e.ambient);
    let basis = sub.basis_up_to_depth(depth)?;
    let mut images = Vec::with_capacity(basis.len());
    for s in &basis {
        let i = match e.image(s) {
            Ok(i) => i,
            Err(Error::Invalid(msg)) => return Ok(Verdict::fails("total", vec![s.clone()], msg)),
            Err(err) => return Err(err),
        };
        if !ambient.contains(&i) {
            return Ok(Verdict::fails(
                "total",
                vec![s.clone()],
                format!("{s} ↦ {i}, which is not an ambient basis element"),
            ));
        }
        images.push(i);
    }
    let mut seen: HashMap<&BasisId, &BasisId> = HashMap::new();
    for (s, i) in basis.iter().zip(&images) {
        if let Some(prev) = seen.insert(i, s) {
            return Ok(Verdict::fails(
                "injective",
                vec![prev.clone(), s.clone()],
                format!("{prev} and {s} both map to {i}"),
            ));
        }
    }
    let unit = e.image(&sub.unit())?;
    if unit != ambient.unit() {
        return Ok(Verdict::fails("unit", vec![sub.unit()], format!("𝟙 ↦ {unit} ≠ {}", ambient.unit())));
    }
    for (a, ia) in basis.iter().zip(&images) {
        for (b, ib) in basis.iter().zip(&images) {
            let prod = ambient.fuse(ia, ib)?;
            if let Some(out) = prod.support().find(|c| !e.in_image(c)) {
                return Ok(Verdict::fails(
                    "closure",
                    vec![a.clone(), b.clone()],
                    format!("{ia}⊗{ib} = {prod} has {out} outside the image"),
                ));
            }
            let sp = sub.fuse(a, b)?;
            let expected = e.image_element(&sp)?;
            if *prod != expected {
                return Ok(Verdict::fails(
                    "closure",
                    vec![a.clone(), b.clone()],
                    format!("{ia}⊗{ib} = {prod} but the subring gives {expected}"),
                ));
            }
        }
    }
    for (s, i) in basis.iter().zip(&images) {
        let lhs = e.image(&sub.conj(s)?)?;
        let rhs = ambient.conj(i)?;
        if lhs != rhs {
            return Ok(Verdict::fails(
                "conjugation",
                vec![s.clone()],
                format!("image of conj({s}) is {lhs}, conj({i}) is {rhs}"),
            ));
        }
        if sub.dim(s)? != ambient.dim(i)? {
            return Ok(Verdict::fails(
                "dimension",
                vec![s.clone()],
                format!("d({s}) = {} but d({i}) = {}", sub.dim(s)?, ambient.dim(i)?),
            ));
        }
    }
    Ok(Verdict::Holds)
}

/// The partition of the ambient basis (within depth) into classes of
/// `x ~ y ⇔ y⊗x̄ meets the image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetClasses {
    /// Unit class first; members ordered by (depth, label).
    pub classes: Vec<Vec<BasisId>>,
    /// `Fails` when the relation is not an equivalence, or the cross-check
    /// disagrees, on the enumerated basis.
    pub verdict: Verdict,
}

impl CosetClasses {
    pub fn class_of(&self, i: &BasisId) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(i))
    }
}

fn related(e: &SubringEmbedding, x: &BasisId, y: &BasisId, right: bool) -> Result<bool> {
    let ambient = &e.ambient;
    let prod = if right { ambient.fuse(y, &ambient.conj(x)?)? } else { ambient.fuse(&ambient.conj(x)?, y)? };
    let meets = prod.support().any(|c| e.in_image(c));
    Ok(meets)
}

fn partition(e: &SubringEmbedding, basis: &[BasisId], right: bool) -> Result<(Vec<Vec<usize>>, Option<Witness>)> {
    let n = basis.len();
    let rows: Vec<Vec<bool>> = basis
        .par_iter()
        .map(|x| basis.iter().map(|y| related(e, x, y, right)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut uf = UnionFind::<usize>::new(n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r {
                uf.union(i, j);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, root) in labels.iter().enumerate() {
        let k = *slot.entry(*root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    // the relation must already be an equivalence: every pair inside a
    // connected class has to be related directly
    for class in &classes {
        for &i in class {
            for &j in class {
                if !rows[i][j] {
                    let (x, y) = (&basis[i], &basis[j]);
                    let w = Witness::new(
                        "transitivity",
                        vec![x.clone(), y.clone()],
                        format!("{x} and {y} are linked through their class but {y}⊗conj({x}) misses the image"),
                    );
                    return Ok((classes, Some(w)));
                }
            }
        }
    }
    Ok((classes, None))
}

/// Classes of the coset relation on the ambient basis within `depth`.
/// With `cross_check`, the left-quotient relation `x̄⊗y` is computed as
/// well and must give the conjugate partition.
pub fn coset_classes(e: &SubringEmbedding, depth: usize, cross_check: bool) -> Result<CosetClasses> {
    let basis = e.ambient.basis_up_to_depth(depth)?;
    let (idx, failure) = partition(e, &basis, true)?;
    let classes: Vec<Vec<BasisId>> = idx.iter().map(|c| c.iter().map(|&i| basis[i].clone()).collect()).collect();
    if let Some(w) = failure {
        return Ok(CosetClasses { classes, verdict: Verdict::Fails(w) });
    }
    if cross_check {
        if let Some(w) = cross_check_left(e, &basis, &classes)? {
            return Ok(CosetClasses { classes, verdict: Verdict::Fails(w) });
        }
    }
    Ok(CosetClasses { classes, verdict: Verdict::Holds })
}

fn cross_check_left(e: &SubringEmbedding, basis: &[BasisId], classes: &[Vec<BasisId>]) -> Result<Option<Witness>> {
    let (left, failure) = partition(e, basis, false)?;
    if failure.is_some() {
        return Ok(failure);
    }
    // x ~ y on the right iff x̄ ~ ȳ on the left; compare where both
    // conjugates were enumerated
    let pos: HashMap<&BasisId, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut left_class = vec![0; basis.len()];
    for (k, c) in left.iter().enumerate() {
        for &i in c {
            left_class[i] = k;
        }
    }
    let mut right_class: HashMap<&BasisId, usize> = HashMap::new();
    for (k, c) in classes.iter().enumerate() {
        for b in c {
            right_class.insert(b, k);
        }
    }
    for x in basis {
        for y in basis {
            let (Some(&cx), Some(&cy)) = (pos.get(&e.ambient.conj(x)?), pos.get(&e.ambient.conj(y)?)) else {
                continue;
            };
            let same_right = right_class[x] == right_class[y];
            let same_left = left_class[cx] == left_class[cy];
            if same_right != same_left {
                return Ok(Some(Witness::new(
                    "coset cross-check",
                    vec![x.clone(), y.clone()],
                    format!(
                        "right quotient says {same_right} for ({x}, {y}), left quotient of conjugates says {same_left}"
                    ),
                )));
            }
        }
    }
    Ok(None)
}

/// Coset representatives `l_t` and the factorization `i = s_i ⊗ l_{t_i}`
/// exhibiting the ambient ring as a direct sum of copies of the subring.
#[derive(Clone, Debug)]
pub struct DivisibilityCertificate {
    embedding: SubringEmbedding,
    representatives: Vec<BasisId>,
    factorization: BTreeMap<BasisId, (usize, BasisId)>,
    verified_depth: usize,
}

impl DivisibilityCertificate {
    /// Assembles a certificate without checking it; see
    /// [`verify_certificate`].
    pub fn new(
        embedding: SubringEmbedding,
        representatives: Vec<BasisId>,
        factorization: BTreeMap<BasisId, (usize, BasisId)>,
        verified_depth: usize,
    ) -> Self {
        DivisibilityCertificate { embedding, representatives, factorization, verified_depth }
    }

    pub fn embedding(&self) -> &SubringEmbedding {
        &self.embedding
    }

    /// `l_t` for each class `t`, unit class first.
    pub fn representatives(&self) -> &[BasisId] {
        &self.representatives
    }

    pub fn factorization(&self) -> &BTreeMap<BasisId, (usize, BasisId)> {
        &self.factorization
    }

    pub fn verified_depth(&self) -> usize {
        self.verified_depth
    }

    /// `(t_i, s_i)` with `i = s_i ⊗ l_{t_i}`, from the table or, beyond it,
    /// by expanding `i ⊗ l̄_t` for every class.
    pub fn factor(&self, i: &BasisId) -> Result<(usize, BasisId)> {
        if let Some(f) = self.factorization.get(i) {
            return Ok(f.clone());
        }
        let ambient = self.embedding.ambient();
        ambient.require(i)?;
        for (t, l) in self.representatives.iter().enumerate() {
            for c in ambient.fuse(i, &ambient.conj(l)?)?.support() {
                if let Some(s) = self.embedding.preimage(c) {
                    if ambient.fuse(&self.embedding.image(&s)?, l)?.as_basis() == Some(i) {
                        return Ok((t, s));
                    }
                }
            }
        }
        Err(Error::BeyondCertificate(i.to_string()))
    }

    /// `s ⊗ l_t` as a single ambient basis element.
    pub fn compose(&self, t: usize, s: &BasisId) -> Result<BasisId> {
        let l = self.representatives.get(t).ok_or_else(|| invalid(format!("no class {t}")))?;
        let prod = self.embedding.ambient().fuse(&self.embedding.image(s)?, l)?;
        prod.as_basis().cloned().ok_or_else(|| invalid(format!("{s}⊗{l} = {prod} is not a basis element")))
    }
}

/// Outcome of a certificate search.
#[derive(Clone, Debug)]
pub struct CertificateSearch {
    pub certificate: Option<DivisibilityCertificate>,
    pub classes: CosetClasses,
    /// Why each rejected candidate failed, in scan order.
    pub witnesses: Vec<Witness>,
    /// `Holds` with a certificate; otherwise `Fails` when both rings are
    /// finite and `UnknownWithinBound` when the search was truncated.
    pub verdict: Verdict,
}

/// Why `l` is not a valid representative, if it is not.
fn reject_candidate(e: &SubringEmbedding, sub_basis: &[BasisId], l: &BasisId) -> Result<Option<Witness>> {
    let ambient = e.ambient();
    let mut seen: HashMap<BasisId, BasisId> = HashMap::new();
    for s in sub_basis {
        let is = e.image(s)?;
        let prod = ambient.fuse(&is, l)?;
        let Some(i) = prod.as_basis() else {
            return Ok(Some(Witness::new("irreducible", vec![is.clone(), l.clone()], format!("{is}⊗{l} = {prod}"))));
        };
        if let Some(prev) = seen.insert(i.clone(), s.clone()) {
            return Ok(Some(Witness::new(
                "injective",
                vec![prev.clone(), s.clone(), l.clone()],
                format!("{}⊗{l} = {is}⊗{l} = {i}", e.image(&prev)?),
            )));
        }
    }
    Ok(None)
}

/// Scans each coset class in (depth, label) order for a representative `l`
/// with every `s ⊗ l` irreducible and `s ↦ s ⊗ l` injective, then assembles
/// the factorization of the ambient basis within `depth`.
pub fn find_divisibility_certificate(e: &SubringEmbedding, depth: usize) -> Result<CertificateSearch> {
    let sub_ok = verify_subring(e, depth)?;
    if !sub_ok.holds() {
        let classes = CosetClasses { classes: Vec::new(), verdict: sub_ok.clone() };
        return Ok(CertificateSearch { certificate: None, classes, witnesses: Vec::new(), verdict: sub_ok });
    }
    let classes = coset_classes(e, depth, false)?;
    if classes.verdict.is_fails() {
        let verdict = classes.verdict.clone();
        return Ok(CertificateSearch { certificate: None, classes, witnesses: Vec::new(), verdict });
    }
    let bounded = !(e.ambient().is_finite() && e.sub().is_finite());
    let sub_basis = e.sub().basis_up_to_depth(depth)?;
    let mut witnesses = Vec::new();
    let mut reps = Vec::new();
    for class in &classes.classes {
        let mut found = None;
        for l in class {
            match reject_candidate(e, &sub_basis, l)? {
                None => {
                    found = Some(l.clone());
                    break;
                }
                Some(w) => witnesses.push(w),
            }
        }
        match found {
            Some(l) => reps.push(l),
            None => {
                let verdict = if bounded {
                    Verdict::UnknownWithinBound(depth)
                } else {
                    Verdict::Fails(witnesses.last().cloned().expect("non-empty class"))
                };
                return Ok(CertificateSearch { certificate: None, classes, witnesses, verdict });
            }
        }
    }
    let mut cert = DivisibilityCertificate::new(e.clone(), reps, BTreeMap::new(), depth);
    let mut factorization = BTreeMap::new();
    for (t, class) in classes.classes.iter().enumerate() {
        for i in class {
            let (ti, s) = match cert.factor(i) {
                Ok(f) => f,
                Err(Error::BeyondCertificate(_)) if bounded => {
                    let verdict = Verdict::UnknownWithinBound(depth);
                    let w =
                        Witness::new("coverage", vec![i.clone()], format!("{i} is not s⊗l_t for any s within depth"));
                    witnesses.push(w);
                    return Ok(CertificateSearch { certificate: None, classes, witnesses, verdict });
                }
                Err(Error::BeyondCertificate(_)) => {
                    let w = Witness::new("coverage", vec![i.clone()], format!("{i} is not s⊗l_t for any s"));
                    witnesses.push(w.clone());
                    return Ok(CertificateSearch { certificate: None, classes, witnesses, verdict: Verdict::Fails(w) });
                }
                Err(err) => return Err(err),
            };
            debug_assert_eq!(ti, t);
            factorization.insert(i.clone(), (ti, s));
        }
    }
    cert.factorization = factorization;
    Ok(CertificateSearch { certificate: Some(cert), classes, witnesses, verdict: Verdict::Holds })
}

/// Re-derives every certificate invariant within `depth`: subring checks,
/// unit representative, irreducibility and injectivity of `s ↦ s⊗l_t`,
/// separation of classes, the factorization table, and that the left
/// action of the subring is block-diagonal regular through it.
pub fn verify_certificate(c: &DivisibilityCertificate, depth: usize) -> Result<Verdict> {
    let e = c.embedding();
    let (sub, ambient) = (e.sub(), e.ambient());
    let sub_check = verify_subring(e, depth)?;
    if !sub_check.holds() {
        return Ok(sub_check);
    }
    let reps = c.representatives();
    if reps.first() != Some(&ambient.unit()) {
        let first = reps.first().cloned().into_iter().collect();
        return Ok(Verdict::fails("unit representative", first, "the first class must be represented by 𝟙"));
    }
    for l in reps {
        if !ambient.contains(l) {
            return Ok(Verdict::fails(
                "representative",
                vec![l.clone()],
                format!("{l} is not an ambient basis element"),
            ));
        }
    }
    let sub_basis = sub.basis_up_to_depth(depth)?;
    for l in reps {
        if let Some(w) = reject_candidate(e, &sub_basis, l)? {
            return Ok(Verdict::Fails(w));
        }
    }
    for (t, lt) in reps.iter().enumerate() {
        for lu in &reps[..t] {
            if related(e, lu, lt, true)? {
                return Ok(Verdict::fails(
                    "separation",
                    vec![lu.clone(), lt.clone()],
                    format!("{lt}⊗conj({lu}) meets the image, so both represent one class"),
                ));
            }
        }
    }
    let ambient_basis = ambient.basis_up_to_depth(depth)?;
    for i in &ambient_basis {
        if !c.factorization().contains_key(i) {
            return Ok(Verdict::fails("coverage", vec![i.clone()], format!("{i} has no factorization")));
        }
    }
    let mut used: HashMap<&(usize, BasisId), &BasisId> = HashMap::new();
    for (i, ts) in c.factorization() {
        let (t, s) = ts;
        let bad = |detail: String| Ok(Verdict::fails("factorization", vec![i.clone(), s.clone()], detail));
        if *t >= reps.len() || !sub.contains(s) {
            return bad(format!("{i} ↦ ({t}, {s}) does not name a class and a sub basis element"));
        }
        let prod = ambient.fuse(&e.image(s)?, &reps[*t])?;
        if prod.as_basis() != Some(i) {
            return bad(format!("{i} ↦ (class {t}, {s}) but {}⊗{} = {prod}", e.image(s)?, reps[*t]));
        }
        if let Some(prev) = used.insert(ts, i) {
            return bad(format!("{prev} and {i} share the factorization ({t}, {s})"));
        }
    }
    // block-regular action: β⊗(s⊗l_t) = Σ N^{s'}_{β,s} s'⊗l_t
    for beta in &sub_basis {
        let ib = e.image(beta)?;
        for i in &ambient_basis {
            let (t, s) = &c.factorization()[i];
            let actual = ambient.fuse(&ib, i)?;
            let expected = sub.fuse(beta, s)?.map_labels(|s2| c.compose(*t, s2))?;
            if *actual != expected {
                return Ok(Verdict::fails(
                    "block action",
                    vec![beta.clone(), i.clone()],
                    format!("{ib}⊗{i} = {actual} but the block-regular action gives {expected}"),
                ));
            }
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::EMPTY_WORD;
    use crate::constructions::{
        direct_product, free_product, group_ring, rep_ring, so3_subring, CharacterTable, FiniteGroupPresentation,
    };

    fn b(s: &str) -> BasisId {
        BasisId::new(s)
    }

    fn z(n: usize, g: &str) -> BasedRing {
        group_ring(&FiniteGroupPresentation::cyclic(n, g).unwrap()).unwrap()
    }

    fn z2_in_z4(target: &str) -> SubringEmbedding {
        let map = BTreeMap::from([(b("e"), b("e")), (b("g"), b(target))]);
        SubringEmbedding::new(z(2, "g"), z(4, "a"), EmbeddingMap::Table(map))
    }

    #[test]
    fn subgroup_inclusion_is_a_subring() {
        assert_eq!(verify_subring(&z2_in_z4("a2"), 4).unwrap(), Verdict::Holds);
        let bad = verify_subring(&z2_in_z4("a"), 4).unwrap();
        let w = bad.witness().unwrap();
        assert_eq!(w.property, "closure");
        assert!(w.detail.contains("a⊗a = a2"), "{w}");
        let collide = verify_subring(&z2_in_z4("e"), 4).unwrap();
        assert_eq!(collide.witness().unwrap().property, "injective");
    }

    #[test]
    fn so3_in_su2() {
        let e = so3_subring();
        assert_eq!(verify_subring(&e, 6).unwrap(), Verdict::Holds);
        let classes = coset_classes(&e, 6, true).unwrap();
        assert_eq!(classes.verdict, Verdict::Holds);
        let labels: Vec<Vec<&str>> = classes.classes.iter().map(|c| c.iter().map(BasisId::as_str).collect()).collect();
        assert_eq!(labels, [vec!["x0", "x2", "x4", "x6"], vec!["x1", "x3", "x5"]]);
        let search = find_divisibility_certificate(&e, 6).unwrap();
        assert!(search.certificate.is_none());
        assert_eq!(search.verdict, Verdict::UnknownWithinBound(6));
        assert!(search.witnesses.iter().any(|w| w.detail == "x2⊗x1 = x1 ⊕ x3"), "{:?}", search.witnesses);
    }

    #[test]
    fn cosets_of_z2_in_z4() {
        let e = z2_in_z4("a2");
        let classes = coset_classes(&e, 1, true).unwrap();
        assert_eq!(classes.classes, vec![vec![b("e"), b("a2")], vec![b("a"), b("a3")]]);
        let cert = find_divisibility_certificate(&e, 1).unwrap().certificate.unwrap();
        assert_eq!(cert.representatives(), [b("e"), b("a")]);
        assert_eq!(cert.factorization()[&b("a3")], (1, b("g")));
        assert_eq!(verify_certificate(&cert, 1).unwrap(), Verdict::Holds);

        // a3 is an equally good representative
        let alt = DivisibilityCertificate::new(
            e.clone(),
            vec![b("e"), b("a3")],
            BTreeMap::from([
                (b("e"), (0, b("e"))),
                (b("a2"), (0, b("g"))),
                (b("a3"), (1, b("e"))),
                (b("a"), (1, b("g"))),
            ]),
            1,
        );
        assert_eq!(verify_certificate(&alt, 1).unwrap(), Verdict::Holds);

        // swapping the s-components on one element is caught
        let mut table = cert.factorization().clone();
        table.insert(b("a3"), (1, b("e")));
        let tampered = DivisibilityCertificate::new(e, cert.representatives().to_vec(), table, 1);
        let v = verify_certificate(&tampered, 1).unwrap();
        assert_eq!(v.witness().unwrap().property, "factorization");
    }

    #[test]
    fn identity_embedding_has_one_class() {
        let r = rep_ring(&CharacterTable::named("S3").unwrap()).unwrap();
        let e = SubringEmbedding::identity(&r);
        assert_eq!(coset_classes(&e, 2, true).unwrap().classes.len(), 1);
        let cert = find_divisibility_certificate(&e, 2).unwrap().certificate.unwrap();
        assert_eq!(cert.representatives(), [b("triv")]);
    }

    #[test]
    fn factors_of_products_are_divisible() {
        let rs3 = rep_ring(&CharacterTable::named("S3").unwrap()).unwrap();
        let p = direct_product(&rs3, &z(2, "g"));
        for e in [&p.left, &p.right] {
            let search = find_divisibility_certificate(e, 2).unwrap();
            let cert = search.certificate.expect("certificate");
            assert_eq!(verify_certificate(&cert, 2).unwrap(), Verdict::Holds);
        }
        let f = free_product(&z(2, "g"), &z(2, "h"));
        let cert = find_divisibility_certificate(&f.left, 5).unwrap().certificate.unwrap();
        let reps: Vec<&str> = cert.representatives().iter().map(BasisId::as_str).collect();
        assert_eq!(reps, [EMPTY_WORD, "h", "h.g", "h.g.h", "h.g.h.g", "h.g.h.g.h"]);
        assert_eq!(verify_certificate(&cert, 5).unwrap(), Verdict::Holds);
    }

    #[test]
    fn group_subrings_classes_are_cosets() {
        // Z/3 = {e, r, r2} inside S3: right cosets Hx
        let s3 = FiniteGroupPresentation::symmetric3();
        let map = BTreeMap::from([(b("e"), b("e")), (b("a"), b("r")), (b("a2"), b("r2"))]);
        let e = SubringEmbedding::new(z(3, "a"), group_ring(&s3).unwrap(), EmbeddingMap::Table(map));
        let classes = coset_classes(&e, 1, true).unwrap();
        let h = [b("e"), b("r"), b("r2")];
        for class in &classes.classes {
            let x = &class[0];
            let mut coset: Vec<BasisId> = h.iter().map(|y| s3.mul(y, x).unwrap().clone()).collect();
            coset.sort();
            let mut got = class.clone();
            got.sort();
            assert_eq!(got, coset);
        }
        assert!(find_divisibility_certificate(&e, 1).unwrap().certificate.is_some());
    }
}
