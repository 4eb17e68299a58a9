//! Axiom checks and structural verdicts for based modules.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;

use super::BasedModule;
use crate::basis::BasisId;
use crate::element::{Element, NNElement};
use crate::error::{Error, Result};
use crate::ring::Dim;
use crate::verdict::Verdict;

/// Evaluates `f`, turning "beyond the certificate" into `None` so that
/// checks on truncated modules skip what they cannot see.
fn visible<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BeyondCertificate(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Unit identity, associativity `α⊗(β⊗j) = (α⊗β)⊗j` and based symmetry
/// `j ⊂ α⊗j' ⇔ j' ⊂ ᾱ⊗j`, for ring and module basis elements within
/// `depth`. Products that leave a truncated basis are skipped.
pub fn check_module_axioms(m: &BasedModule, depth: usize) -> Result<Verdict> {
    if depth == 0 {
        return Err(crate::error::invalid("depth must be at least 1"));
    }
    let ring = m.ring();
    let alphas = ring.basis_up_to_depth(depth)?;
    let js = m.basis_up_to_depth(depth)?;
    let unit = ring.unit();
    for j in &js {
        let v = m.act_basis(&unit, j)?;
        if v.as_basis() != Some(j) {
            return Ok(Verdict::fails("unit identity", vec![j.clone()], format!("{unit}⊗{j} = {v}")));
        }
    }
    for a in &alphas {
        for b in &alphas {
            let ab = ring.fuse(a, b)?;
            for j in &js {
                let Some(bj) = visible(m.act_basis(b, j))? else { continue };
                let Some(lhs) = visible(m.act(&Element::basis(a.clone()), &bj))? else { continue };
                let Some(rhs) = visible(m.act(&ab, &Element::basis(j.clone())))? else { continue };
                if lhs != rhs {
                    return Ok(Verdict::fails(
                        "associativity",
                        vec![a.clone(), b.clone(), j.clone()],
                        format!("{a}⊗({b}⊗{j}) = {lhs} ≠ {rhs} = ({a}⊗{b})⊗{j}"),
                    ));
                }
            }
        }
    }
    for a in &alphas {
        let abar = ring.conj(a)?;
        for j2 in &js {
            let Some(v) = visible(m.act_basis(a, j2))? else { continue };
            for j in v.support() {
                let Some(back) = visible(m.act_basis(&abar, j))? else { continue };
                if !back.contains(j2) {
                    return Ok(Verdict::fails(
                        "based symmetry",
                        vec![a.clone(), j2.clone(), j.clone()],
                        format!("{j} ⊂ {a}⊗{j2} but {abar}⊗{j} = {back} does not contain {j2}"),
                    ));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Compatibility `d(α)·d(j') = Σ_j N^j_{α,j'} d(j)` of a module dimension
/// function supplied with the definition. `Holds` trivially when none was
/// supplied.
pub fn check_module_dimension(m: &BasedModule, depth: usize) -> Result<Verdict> {
    let Some(d) = m.dim_function() else { return Ok(Verdict::Holds) };
    let ring = m.ring();
    for a in ring.basis_up_to_depth(depth)? {
        for j2 in m.basis_up_to_depth(depth)? {
            let v = m.act_basis(&a, &j2)?;
            let lhs = ring.dim(&a)? * d[&j2];
            let rhs: Dim = v.iter().map(|(j, c)| d[j] * c).sum();
            if lhs != rhs {
                return Ok(Verdict::fails(
                    "module dimension",
                    vec![a.clone(), j2.clone()],
                    format!("d({a})·d({j2}) = {lhs} ≠ {rhs} = d({a}⊗{j2})"),
                ));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Co-finiteness: automatic over finite rings; over infinite rings no
/// bounded search can refute or confirm it.
pub fn is_cofinite(m: &BasedModule, depth: usize) -> Result<Verdict> {
    Ok(if m.ring().is_finite() { Verdict::Holds } else { Verdict::UnknownWithinBound(depth) })
}

/// For each pair `(j, j')` of module basis elements within `depth`, how
/// many ring basis elements `α` within `depth` have `j ⊂ α⊗j'`.
pub fn cofinite_support_counts(m: &BasedModule, depth: usize) -> Result<BTreeMap<(BasisId, BasisId), usize>> {
    let js = m.basis_up_to_depth(depth)?;
    let mut counts = BTreeMap::new();
    for a in m.ring().basis_up_to_depth(depth)? {
        for j2 in &js {
            let Some(v) = visible(m.act_basis(&a, j2))? else { continue };
            for j in v.support().filter(|j| js.contains(j)) {
                *counts.entry((j.clone(), j2.clone())).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

/// Connected components of the graph on the module basis with an edge
/// `{j, j'}` whenever `j ⊂ α⊗j'` for some ring basis element `α` within
/// `depth`. Components appear in order of their first basis element.
pub fn connected_components(m: &BasedModule, depth: usize) -> Result<Vec<Vec<BasisId>>> {
    let js = m.basis_up_to_depth(depth)?;
    let pos: HashMap<&BasisId, usize> = js.iter().enumerate().map(|(i, j)| (j, i)).collect();
    let mut uf = UnionFind::<usize>::new(js.len());
    for a in m.ring().basis_up_to_depth(depth)? {
        for (i, j2) in js.iter().enumerate() {
            let Some(v) = visible(m.act_basis(&a, j2))? else { continue };
            for j in v.support() {
                if let Some(&k) = pos.get(j) {
                    uf.union(i, k);
                }
            }
        }
    }
    let labels = uf.into_labeling();
    let mut order: Vec<usize> = Vec::new();
    let mut groups: HashMap<usize, Vec<BasisId>> = HashMap::new();
    for (i, root) in labels.iter().enumerate() {
        groups
            .entry(*root)
            .or_insert_with(|| {
                order.push(*root);
                Vec::new()
            })
            .push(js[i].clone());
    }
    Ok(order.into_iter().map(|r| groups.remove(&r).expect("group")).collect())
}

/// Torsion = co-finite and connected, with three-valued propagation.
/// Disconnection is only definite for finite modules over finite rings.
pub fn is_torsion(m: &BasedModule, depth: usize) -> Result<Verdict> {
    let cofinite = is_cofinite(m, depth)?;
    let components = connected_components(m, depth)?;
    let definite = m.ring().is_finite() && m.is_finite() && !m.is_truncated();
    let connected = match components.as_slice() {
        [_] => Verdict::Holds,
        [first, second, ..] if definite => Verdict::fails(
            "connected",
            vec![first[0].clone(), second[0].clone()],
            format!(
                "{} components; {} and {} are not linked by any ring element",
                components.len(),
                first[0],
                second[0]
            ),
        ),
        _ => Verdict::UnknownWithinBound(depth),
    };
    Ok(cofinite.and(connected))
}

/// Result of [`is_standard`]: the verdict and, on `Holds`, a basis
/// bijection module → ring intertwining the actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Standardness {
    pub verdict: Verdict,
    pub bijection: Option<BTreeMap<BasisId, BasisId>>,
}

type Signature = Vec<(Vec<i64>, i64)>;

/// Per basis element: for each ring basis element, the sorted coefficient
/// profile of `α⊗j` and the coefficient of `j` itself. Invariant under
/// based isomorphism.
pub(crate) fn degree_signature(m: &BasedModule, alphas: &[BasisId], j: &BasisId) -> Result<Signature> {
    alphas
        .iter()
        .map(|a| {
            let v = m.act_basis(a, j)?;
            let mut cs: Vec<i64> = v.iter().map(|(_, c)| c).collect();
            cs.sort_unstable();
            Ok((cs, v.coeff(j)))
        })
        .collect()
}

/// Searches for a based isomorphism to the regular module. Any such map
/// sends some `j₀` to the unit and is then forced: `α ⊗ j₀ ↦ α`. Each `j₀`
/// is tried in (degree signature, label) order.
pub fn is_standard(m: &BasedModule, depth: usize) -> Result<Standardness> {
    let ring = m.ring();
    if m.is_regular() {
        let basis = m.basis_up_to_depth(depth)?;
        return Ok(Standardness {
            verdict: Verdict::Holds,
            bijection: Some(basis.iter().map(|b| (b.clone(), b.clone())).collect()),
        });
    }
    let fail = |detail: String, items: Vec<BasisId>| Standardness {
        verdict: Verdict::fails("standard", items, detail),
        bijection: None,
    };
    let (Some(ring_basis), Some(js)) = (ring.finite_basis(), m.basis()) else {
        return match (ring.is_finite(), m.rank()) {
            (false, Some(n)) if !m.is_truncated() => Ok(fail(format!("rank {n} ≠ rank of an infinite ring"), vec![])),
            _ => Ok(Standardness { verdict: Verdict::UnknownWithinBound(depth), bijection: None }),
        };
    };
    if js.len() != ring_basis.len() {
        return Ok(fail(format!("rank {} ≠ rank {}", js.len(), ring_basis.len()), vec![]));
    }
    let unit_sig = degree_signature(&super::BasedModule::standard(ring), ring_basis, &ring.unit())?;
    let mut candidates: Vec<(Signature, &BasisId)> =
        js.iter().map(|j| Ok((degree_signature(m, ring_basis, j)?, j))).collect::<Result<_>>()?;
    candidates.sort();
    let mut last_reason = None;
    for (sig, j0) in candidates {
        if sig != unit_sig {
            last_reason.get_or_insert_with(|| {
                (format!("no basis element has the degree profile of the unit (tried {j0})"), j0.clone())
            });
            continue;
        }
        match regular_map(m, ring_basis, j0)? {
            Ok(bijection) => return Ok(Standardness { verdict: Verdict::Holds, bijection: Some(bijection) }),
            Err(reason) => last_reason = Some((reason, j0.clone())),
        }
    }
    let (reason, j0) = last_reason.unwrap_or_else(|| ("no candidate".into(), js[0].clone()));
    Ok(fail(reason, vec![j0]))
}

/// `ψ(α) = α⊗j₀` as a bijection ring → module, inverted and checked
/// coefficient-exactly against the regular action.
fn regular_map(
    m: &BasedModule,
    ring_basis: &[BasisId],
    j0: &BasisId,
) -> Result<Result<BTreeMap<BasisId, BasisId>, String>> {
    let ring = m.ring();
    let mut inverse: BTreeMap<BasisId, BasisId> = BTreeMap::new();
    let mut forward: HashMap<BasisId, BasisId> = HashMap::new();
    for a in ring_basis {
        let v = m.act_basis(a, j0)?;
        let Some(j) = v.as_basis() else {
            return Ok(Err(format!("{a}⊗{j0} = {v} is not a basis element")));
        };
        if let Some(prev) = inverse.insert(j.clone(), a.clone()) {
            return Ok(Err(format!("{prev}⊗{j0} = {a}⊗{j0} = {j}")));
        }
        forward.insert(a.clone(), j.clone());
    }
    for b in ring_basis {
        for a in ring_basis {
            let lhs = m.act_basis(b, &forward[a])?;
            let rhs = NNElement::new(ring.fuse(b, a)?.map_labels(|c| Ok(forward[c].clone()))?)?;
            if lhs != rhs {
                return Ok(Err(format!("{b}⊗{} = {lhs} but the regular action gives {rhs}", forward[a])));
            }
        }
    }
    Ok(Ok(inverse))
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::constructions::{group_ring, rep_ring, su2_ring, CharacterTable, FiniteGroupPresentation};

    #[test]
    fn regular_modules_are_based() {
        for ring in [z(2, "g"), z(4, "a"), group_ring(&FiniteGroupPresentation::symmetric3()).unwrap()] {
            let m = BasedModule::standard(&ring);
            assert_eq!(check_module_axioms(&m, 2).unwrap(), Verdict::Holds);
            assert_eq!(is_torsion(&m, 2).unwrap(), Verdict::Holds);
        }
        let su2 = BasedModule::standard(&su2_ring());
        assert_eq!(check_module_axioms(&su2, 3).unwrap(), Verdict::Holds);
        assert_eq!(is_cofinite(&su2, 8).unwrap(), Verdict::UnknownWithinBound(8));
    }

    #[test]
    fn doubling_action_breaks_associativity() {
        let action = HashMap::from([((b("g"), b("j")), NNElement::from_terms([(b("j"), 2)]).unwrap())]);
        let m = BasedModule::explicit(&z(2, "g"), vec![b("j")], action, None).unwrap();
        let v = check_module_axioms(&m, 1).unwrap();
        assert_eq!(v.witness().unwrap().detail, "g⊗(g⊗j) = 4·j ≠ j = (g⊗g)⊗j");
    }

    #[test]
    fn rank_one_modules() {
        let t = trivial_module(&z(3, "a"));
        assert_eq!(check_module_axioms(&t, 1).unwrap(), Verdict::Holds);
        let t2 = trivial_module(&z(2, "g"));
        assert_eq!(is_torsion(&t2, 1).unwrap(), Verdict::Holds);
        let s = is_standard(&t2, 1).unwrap();
        assert_eq!(s.verdict.witness().unwrap().detail, "rank 1 ≠ rank 2");
    }

    #[test]
    fn disconnected_sums_are_not_torsion() {
        let t = trivial_module(&z(2, "g"));
        let sum = t.direct_sum(&t).unwrap();
        assert_eq!(connected_components(&sum, 1).unwrap().len(), 2);
        assert_eq!(is_torsion(&sum, 1).unwrap().witness().unwrap().property, "connected");
    }

    #[test]
    fn standardness_of_regular_modules_is_found() {
        let r = rep_ring(&CharacterTable::named("S3").unwrap()).unwrap();
        let std = BasedModule::standard(&r);
        let s = is_standard(&std, 1).unwrap();
        assert_eq!(s.verdict, Verdict::Holds);
        // an explicit copy with renamed labels is recognised too
        let m = std.materialize().unwrap();
        let s = is_standard(&m, 1).unwrap();
        assert_eq!(s.verdict, Verdict::Holds);
        // sgn is invertible, so α ↦ α⊗sgn is an equally valid identification
        // and comes first in label order
        let map = s.bijection.unwrap();
        assert_eq!(map[&b("sgn")], b("triv"));
        for (j, a) in &map {
            for beta in r.finite_basis().unwrap() {
                let lhs = m.act_basis(beta, j).unwrap().map_labels(|k| Ok(map[k].clone())).unwrap();
                assert_eq!(lhs, *r.fuse(beta, a).unwrap());
            }
        }
    }

    #[test]
    fn supports_over_su2_are_bounded_by_clebsch_gordan() {
        let m = BasedModule::standard(&su2_ring());
        let counts = cofinite_support_counts(&m, 4).unwrap();
        for ((j, j2), n) in counts {
            let (p, q) =
                (crate::constructions::su2::spin_of(&j).unwrap(), crate::constructions::su2::spin_of(&j2).unwrap());
            assert!(n as u64 <= p.min(q) + 1, "{j} {j2} {n}");
        }
    }
}
