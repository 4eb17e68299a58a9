//! Based isomorphisms between finite modules.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::checks::degree_signature;
use super::BasedModule;
use crate::basis::BasisId;
use crate::error::{invalid, Result};

/// A basis bijection `J₁ → J₂` intertwining every action coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismWitness {
    pub map: BTreeMap<BasisId, BasisId>,
}

/// Dense action matrices `N[α][j'][j]` over a common index of the basis.
struct Dense {
    basis: Vec<BasisId>,
    n: Vec<Vec<Vec<i64>>>,
}

impl Dense {
    fn new(m: &BasedModule, alphas: &[BasisId], basis: Vec<BasisId>) -> Result<Self> {
        let pos: HashMap<&BasisId, usize> = basis.iter().enumerate().map(|(i, j)| (j, i)).collect();
        let mut n = Vec::with_capacity(alphas.len());
        for a in alphas {
            let mut mat = vec![vec![0i64; basis.len()]; basis.len()];
            for (i, j2) in basis.iter().enumerate() {
                for (j, c) in m.act_basis(a, j2)?.iter() {
                    let k = *pos.get(j).ok_or_else(|| invalid(format!("{a}⊗{j2} leaves the module basis")))?;
                    mat[i][k] = c;
                }
            }
            n.push(mat);
        }
        Ok(Dense { basis, n })
    }
}

/// Backtracking search for a based isomorphism, visiting the basis of `m1`
/// in breadth-first order along the action graph and trying targets in
/// (degree signature, label) order. The witness is re-verified before it
/// is returned.
pub fn modules_isomorphic(m1: &BasedModule, m2: &BasedModule) -> Result<Option<IsomorphismWitness>> {
    if !m1.ring().same_ring(m2.ring()) {
        return Err(invalid("isomorphism needs a common ring"));
    }
    let (Some(b1), Some(b2)) = (m1.basis(), m2.basis()) else {
        return Err(invalid("isomorphism search needs finite modules"));
    };
    if b1.len() != b2.len() {
        return Ok(None);
    }
    let ring = m1.ring();
    let alphas: Vec<BasisId> = match ring.finite_basis() {
        Some(b) => b.to_vec(),
        None => ring.generators(),
    };
    let sig1: Vec<_> = b1.iter().map(|j| degree_signature(m1, &alphas, j)).collect::<Result<_>>()?;
    let sig2: Vec<_> = b2.iter().map(|j| degree_signature(m2, &alphas, j)).collect::<Result<_>>()?;
    let mut s1 = sig1.clone();
    let mut s2 = sig2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let d1 = Dense::new(m1, &alphas, b1.to_vec())?;
    let d2 = Dense::new(m2, &alphas, b2.to_vec())?;
    let n = b1.len();

    // breadth-first visiting order so each new element is tied to placed ones
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for mat in &d1.n {
                for (k, &c) in mat[i].iter().enumerate() {
                    if c != 0 && !seen[k] {
                        seen[k] = true;
                        queue.push_back(k);
                    }
                }
            }
        }
    }
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for s in &sig1 {
        let mut c: Vec<usize> = (0..n).filter(|&k| sig2[k] == *s).collect();
        c.sort_by(|&x, &y| (&sig2[x], &b2[x]).cmp(&(&sig2[y], &b2[y])));
        candidates.push(c);
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !extend(&d1, &d2, &order, &candidates, 0, &mut phi, &mut used) {
        return Ok(None);
    }
    let map: BTreeMap<BasisId, BasisId> = (0..n).map(|i| (d1.basis[i].clone(), d2.basis[phi[i]].clone())).collect();
    let witness = IsomorphismWitness { map };
    if verify_isomorphism(m1, m2, &witness)? {
        Ok(Some(witness))
    } else {
        Err(invalid("isomorphism witness failed verification"))
    }
}

fn consistent(d1: &Dense, d2: &Dense, phi: &[usize], i: usize, x: usize) -> bool {
    d1.n.iter().zip(&d2.n).all(|(a, b)| {
        a[i][i] == b[x][x]
            && phi
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != usize::MAX)
                .all(|(k, &p)| a[i][k] == b[x][p] && a[k][i] == b[p][x])
    })
}

fn extend(
    d1: &Dense,
    d2: &Dense,
    order: &[usize],
    candidates: &[Vec<usize>],
    step: usize,
    phi: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&i) = order.get(step) else { return true };
    for &x in &candidates[i] {
        if used[x] || !consistent(d1, d2, phi, i, x) {
            continue;
        }
        phi[i] = x;
        used[x] = true;
        if extend(d1, d2, order, candidates, step + 1, phi, used) {
            return true;
        }
        phi[i] = usize::MAX;
        used[x] = false;
    }
    false
}

/// Checks a claimed isomorphism against every action coefficient.
pub(crate) fn verify_isomorphism(m1: &BasedModule, m2: &BasedModule, w: &IsomorphismWitness) -> Result<bool> {
    let ring = m1.ring();
    let alphas: Vec<BasisId> = match ring.finite_basis() {
        Some(b) => b.to_vec(),
        None => ring.generators(),
    };
    let (Some(b1), Some(b2)) = (m1.basis(), m2.basis()) else { return Ok(false) };
    let mut image: Vec<&BasisId> = w.map.values().collect();
    image.sort();
    let mut target: Vec<&BasisId> = b2.iter().collect();
    target.sort();
    if w.map.len() != b1.len() || image != target {
        return Ok(false);
    }
    for a in &alphas {
        for j in b1 {
            let lhs = m1.act_basis(a, j)?.map_labels(|k| w.map.get(k).cloned().ok_or_else(|| invalid("unmapped")))?;
            if lhs != *m2.act_basis(a, &w.map[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::constructions::{group_ring, FiniteGroupPresentation};

    #[test]
    fn every_module_is_isomorphic_to_itself() {
        let s3 = BasedModule::standard(&group_ring(&FiniteGroupPresentation::symmetric3()).unwrap());
        let w = modules_isomorphic(&s3, &s3).unwrap().unwrap();
        assert!(w.map.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn rank_mismatch_is_not_isomorphic() {
        let r = z(2, "g");
        assert!(modules_isomorphic(&trivial_module(&r), &BasedModule::standard(&r)).unwrap().is_none());
    }

    #[test]
    fn relabelled_regular_module() {
        let r = z(4, "a");
        let m = BasedModule::standard(&r).materialize().unwrap();
        let w = modules_isomorphic(&BasedModule::standard(&r), &m).unwrap().unwrap();
        assert_eq!(w.map.len(), 4);
    }
}
