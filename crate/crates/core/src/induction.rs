//! Restriction of based modules along subring embeddings, induction along
//! divisibility certificates, and recovery of a standard structure from a
//! standard induced module.
//!
//! Induction is `R ⊗_S N`, which uses `R` as a right `S`-module. The
//! certificate describes `R` as a left `S`-module (`ī = s ⊗ l_t`);
//! conjugating gives the right-handed decomposition `i = r_t ⊗ s̄` with
//! `r_t = conj(l_t)`, and the basis element `1_t ⊙ j` stands for
//! `r_t ⊗_S j`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::basis::BasisId;
use crate::element::{Element, NNElement};
use crate::error::{Error, Result};
use crate::module::{check_module_axioms, connected_components, is_torsion, BasedModule, ModuleRules, Standardness};
use crate::ring::BasedRing;
use crate::subring::{verify_certificate, verify_subring, DivisibilityCertificate, SubringEmbedding};
use crate::verdict::Verdict;

/// Depth used to re-check modules whose ring is finite (any depth is
/// exhaustive there).
const FINITE_DEPTH: usize = 1;

fn refused(what: &str, v: &Verdict) -> Error {
    Error::Refused(format!("{what}: {v}"))
}

/// `m` with the subring acting through `e`. The embedding and the
/// restricted axioms are re-checked within `depth`.
pub fn restrict(m: &BasedModule, e: &SubringEmbedding, depth: usize) -> Result<BasedModule> {
    let v = verify_subring(e, depth)?;
    if !v.holds() {
        return Err(refused("not a fusion subring", &v));
    }
    let r = m.restrict(e)?;
    let v = check_module_axioms(&r, depth)?;
    if v.is_fails() {
        return Err(refused("restricted module violates the module axioms", &v));
    }
    Ok(r)
}

/// A restricted module split into connected summands.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<BasedModule>,
    /// Per summand: `Holds` when verified torsion, `UnknownWithinBound`
    /// where co-finiteness cannot be decided.
    pub verdicts: Vec<Verdict>,
}

/// Restricts a finite module and splits it along connected components;
/// each summand is re-checked to be connected, and torsion where
/// decidable.
pub fn restrict_and_decompose(m: &BasedModule, e: &SubringEmbedding, depth: usize) -> Result<Decomposition> {
    if !m.is_finite() {
        return Err(Error::Refused("decomposition needs a finite module".into()));
    }
    let r = restrict(m, e, depth)?;
    let mut summands = Vec::new();
    let mut verdicts = Vec::new();
    for component in connected_components(&r, depth)? {
        let mut s = r.summand(component)?;
        if s.ring().is_finite() {
            s = s.materialize()?;
        }
        let parts = connected_components(&s, depth)?;
        if parts.len() != 1 {
            return Err(Error::Invalid(format!("summand splits further into {} components", parts.len())));
        }
        verdicts.push(is_torsion(&s, depth)?);
        summands.push(s);
    }
    Ok(Decomposition { summands, verdicts })
}

/// `Ind^R_S(N)` with its provenance.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub module: BasedModule,
    pub source: BasedModule,
    pub certificate: DivisibilityCertificate,
    /// Number of classes `|Ω|` used (all classes found within the
    /// certificate depth).
    pub classes: usize,
    /// Whether `Ω` was cut off at the certificate depth.
    pub truncated: bool,
}

pub fn induced_label(t: usize, j: &BasisId) -> BasisId {
    BasisId::new(format!("1_{t}⊙{j}"))
}

struct InducedRules {
    cert: DivisibilityCertificate,
    source: BasedModule,
    right_reps: Vec<BasisId>,
    basis: Vec<BasisId>,
    index: HashMap<BasisId, (usize, BasisId)>,
    truncated: bool,
}

impl InducedRules {
    /// `i = r_t ⊗ s`, from the certificate's `ī = s̄ ⊗ l_t`.
    fn right_factor(&self, i: &BasisId) -> Result<(usize, BasisId)> {
        let e = self.cert.embedding();
        let (t, s) = self.cert.factor(&e.ambient().conj(i)?)?;
        Ok((t, e.sub().conj(&s)?))
    }
}

impl ModuleRules for InducedRules {
    fn basis(&self) -> Option<Vec<BasisId>> {
        Some(self.basis.clone())
    }

    fn basis_up_to_depth(&self, _depth: usize) -> Result<Vec<BasisId>> {
        Ok(self.basis.clone())
    }

    fn contains(&self, j: &BasisId) -> bool {
        self.index.contains_key(j)
    }

    /// `α ⊗ (1_{t'} ⊙ j') = Σ_{i ⊂ α⊗r_{t'}} N^i_{α,r_{t'}} · 1_{t_i} ⊙ (s_i ⊗ j')`
    fn act(&self, a: &BasisId, j: &BasisId) -> Result<NNElement> {
        let (t2, j2) = self.index.get(j).ok_or_else(|| Error::UnknownBasis(j.to_string()))?;
        let ambient = self.cert.embedding().ambient();
        let mut out = Element::zero();
        for (i, c) in ambient.fuse(a, &self.right_reps[*t2])?.iter() {
            let (t, s) = self.right_factor(i)?;
            if t >= self.right_reps.len() {
                return Err(Error::BeyondCertificate(i.to_string()));
            }
            for (k, ck) in self.source.act_basis(&s, j2)?.iter() {
                let coeff = c.checked_mul(ck).ok_or(Error::Overflow("induced coefficient"))?;
                out.add_term(induced_label(t, k), coeff)?;
            }
        }
        NNElement::new(out)
    }

    fn describe(&self) -> String {
        format!("induced from {} over {} classes", self.source.describe(), self.right_reps.len())
    }

    fn truncated(&self) -> bool {
        self.truncated
    }
}

/// Induces a finite `S`-module along a verified certificate. Refuses
/// depths beyond what the certificate covers on infinite rings, modules
/// failing their axioms, and certificates that do not verify.
pub fn induce(n: &BasedModule, c: &DivisibilityCertificate, depth: usize) -> Result<InducedModule> {
    let e = c.embedding();
    if !n.ring().same_ring(e.sub()) {
        return Err(Error::Refused("the module is not over the certificate's subring".into()));
    }
    let Some(js) = n.basis() else {
        return Err(Error::Refused("induction needs a finite module".into()));
    };
    let lazy = !e.ambient().is_finite();
    if lazy && depth > c.verified_depth() {
        return Err(Error::Refused(format!(
            "depth {depth} exceeds the certificate's verified depth {}",
            c.verified_depth()
        )));
    }
    let v = verify_certificate(c, if lazy { depth } else { FINITE_DEPTH })?;
    if !v.holds() {
        return Err(refused("certificate does not verify", &v));
    }
    let v = check_module_axioms(n, depth.max(1))?;
    if v.is_fails() {
        return Err(refused("source module violates the module axioms", &v));
    }
    let ambient = e.ambient();
    let right_reps = c.representatives().iter().map(|l| ambient.conj(l)).collect::<Result<Vec<_>>>()?;
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    for t in 0..right_reps.len() {
        for j in js {
            let label = induced_label(t, j);
            index.insert(label.clone(), (t, j.clone()));
            basis.push(label);
        }
    }
    let rules = InducedRules { cert: c.clone(), source: n.clone(), right_reps, basis, index, truncated: lazy };
    let classes = rules.right_reps.len();
    Ok(InducedModule {
        module: BasedModule::from_rules(ambient.clone(), Arc::new(rules)),
        source: n.clone(),
        certificate: c.clone(),
        classes,
        truncated: lazy,
    })
}

/// Given a standardness witness `w` (induced basis → ambient basis) for
/// `induce(n, c)`, recovers a based isomorphism `n ≅ S`. The element `u`
/// sent to the unit must be `1_{t₀} ⊙ j₀`; `r̄_{t₀} ⊗ u` is then `1_0 ⊙ j₀'`
/// and `s ↦ s ⊗ j₀'` is checked to be a bijection onto the basis of `n`
/// intertwining the regular action. Returns the bijection `J → S`.
pub fn standardize_from_induced(
    n: &BasedModule,
    c: &DivisibilityCertificate,
    w: &BTreeMap<BasisId, BasisId>,
    depth: usize,
) -> Result<Standardness> {
    let induced = induce(n, c, depth)?;
    let m = &induced.module;
    let ambient = c.embedding().ambient().clone();
    let sub = c.embedding().sub().clone();
    let fail = |property: &str, items: Vec<BasisId>, detail: String| {
        Ok(Standardness { verdict: Verdict::fails(property, items, detail), bijection: None })
    };
    if let Some(v) = invalid_witness(m, &ambient, w, depth)? {
        return Ok(Standardness { verdict: v, bijection: None });
    }
    let unit = ambient.unit();
    let Some(u) = w.iter().find(|(_, a)| **a == unit).map(|(j, _)| j.clone()) else {
        return fail("witness", vec![], "no induced basis element is sent to the unit".into());
    };

    // sweep: α ⊗ u over the ambient basis must run through the induced basis
    let mut swept = HashSet::new();
    for a in ambient.basis_up_to_depth(depth)? {
        let v = m.act_basis(&a, &u)?;
        match v.as_basis() {
            Some(j) => {
                swept.insert(j.clone());
            }
            None => return fail("sweep", vec![a.clone(), u.clone()], format!("{a}⊗{u} = {v}")),
        }
    }
    let basis = m.basis().expect("finite");
    if swept.len() != basis.len() {
        if ambient.is_finite() {
            return fail("sweep", vec![u], format!("α⊗u reaches {} of {} basis elements", swept.len(), basis.len()));
        }
        return Ok(Standardness { verdict: Verdict::UnknownWithinBound(depth), bijection: None });
    }

    let Some(sub_basis) = sub.finite_basis() else {
        return Ok(Standardness { verdict: Verdict::UnknownWithinBound(depth), bijection: None });
    };
    let (t0, _) = m_index(&u)?;
    let back = m.act_basis(&c.representatives()[t0], &u)?;
    let j0 = match back.as_basis().map(m_index).transpose()? {
        Some((0, j)) => j,
        _ => return fail("sweep", vec![u.clone()], format!("l_{t0}⊗{u} = {back} is not in the unit class")),
    };
    // ψ(s) = s ⊗ j₀ inside n, checked against the regular action of S
    let mut psi: HashMap<BasisId, BasisId> = HashMap::new();
    let mut inverse: BTreeMap<BasisId, BasisId> = BTreeMap::new();
    for s in sub_basis {
        let v = n.act_basis(s, &j0)?;
        let Some(j) = v.as_basis() else {
            return fail("standard", vec![s.clone(), j0.clone()], format!("{s}⊗{j0} = {v}"));
        };
        if let Some(prev) = inverse.insert(j.clone(), s.clone()) {
            return fail("standard", vec![prev.clone(), s.clone()], format!("{prev}⊗{j0} = {s}⊗{j0} = {j}"));
        }
        psi.insert(s.clone(), j.clone());
    }
    if inverse.len() != n.rank().unwrap_or(0) {
        return fail(
            "standard",
            vec![j0],
            format!("s⊗j₀ reaches {} of {} basis elements", inverse.len(), n.rank().unwrap_or(0)),
        );
    }
    for beta in sub_basis {
        for s in sub_basis {
            let lhs = n.act_basis(beta, &psi[s])?;
            let rhs = sub.fuse(beta, s)?.map_labels(|x| Ok(psi[x].clone()))?;
            if *lhs != rhs {
                return fail(
                    "standard",
                    vec![beta.clone(), s.clone()],
                    format!("{beta}⊗{} = {lhs} but {rhs} expected", psi[s]),
                );
            }
        }
    }
    Ok(Standardness { verdict: Verdict::Holds, bijection: Some(inverse) })
}

fn m_index(label: &BasisId) -> Result<(usize, BasisId)> {
    let bad = || Error::UnknownBasis(label.to_string());
    let rest = label.as_str().strip_prefix("1_").ok_or_else(bad)?;
    let (t, j) = rest.split_once('⊙').ok_or_else(bad)?;
    Ok((t.parse().map_err(|_| bad())?, BasisId::new(j)))
}

/// `Some(Fails)` unless `w` is a bijection onto the ambient basis (within
/// depth) intertwining the induced action with the regular one.
fn invalid_witness(
    m: &BasedModule,
    ambient: &BasedRing,
    w: &BTreeMap<BasisId, BasisId>,
    depth: usize,
) -> Result<Option<Verdict>> {
    let basis = m.basis().expect("finite");
    let fail = |items: Vec<BasisId>, detail: String| Ok(Some(Verdict::fails("witness", items, detail)));
    if w.len() != basis.len() || basis.iter().any(|j| !w.contains_key(j)) {
        return fail(vec![], "the witness is not defined on the whole induced basis".into());
    }
    let targets: HashSet<&BasisId> = w.values().collect();
    if targets.len() != w.len() || targets.iter().any(|a| !ambient.contains(a)) {
        return fail(vec![], "the witness is not injective into the ambient basis".into());
    }
    if let Some(all) = ambient.finite_basis() {
        if all.len() != w.len() {
            return fail(vec![], format!("rank {} ≠ rank {}", w.len(), all.len()));
        }
    }
    for a in ambient.basis_up_to_depth(depth)? {
        for (j, x) in w {
            let lhs = m.act_basis(&a, j)?.map_labels(|k| Ok(w[k].clone()))?;
            let rhs = ambient.fuse(&a, x)?;
            if lhs != *rhs {
                return fail(vec![a.clone(), j.clone()], format!("{a}⊗{j} ↦ {lhs} but {a}⊗{x} = {rhs}"));
            }
        }
    }
    Ok(None)
}
