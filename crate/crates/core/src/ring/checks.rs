use num_traits::{CheckedAdd, CheckedMul};

use super::{BasedRing, Dim};
use crate::element::Element;
use crate::error::{invalid, Error, Result};
use crate::verdict::Verdict;

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    Ok(())
}

/// Unit neutrality, involution laws, the based-ring unit axiom,
/// anti-multiplicativity of the involution and associativity, on every
/// basis element (finite rings) or every element within `depth`.
pub fn check_ring_axioms(ring: &BasedRing, depth: usize) -> Result<Verdict> {
    check_depth(depth)?;
    let basis = ring.basis_up_to_depth(depth)?;
    let unit = ring.unit();

    if ring.conj(&unit)? != unit {
        return Ok(Verdict::fails("involution", vec![unit.clone()], format!("conj({unit}) ≠ {unit}")));
    }
    for a in &basis {
        let c = ring.conj(a)?;
        if ring.conj(&c)? != *a {
            return Ok(Verdict::fails("involution", vec![a.clone()], format!("conj(conj({a})) ≠ {a}")));
        }
    }
    for a in &basis {
        let left = ring.fuse(&unit, a)?;
        let right = ring.fuse(a, &unit)?;
        if left.as_basis() != Some(a) || right.as_basis() != Some(a) {
            return Ok(Verdict::fails(
                "unit neutrality",
                vec![a.clone()],
                format!("{unit}⊗{a} = {left}, {a}⊗{unit} = {right}"),
            ));
        }
    }
    for a in &basis {
        let ca = ring.conj(a)?;
        for b in &basis {
            let got = ring.fuse(&ca, b)?.coeff(&unit);
            let want = i64::from(a == b);
            if got != want {
                return Ok(Verdict::fails(
                    "based-ring unit axiom",
                    vec![a.clone(), b.clone()],
                    format!("coefficient of {unit} in conj({a})⊗{b} = {ca}⊗{b} is {got}, expected {want}"),
                ));
            }
        }
    }
    for a in &basis {
        for b in &basis {
            let ab = ring.fuse(a, b)?;
            let lhs = ring.conjugate(&ab)?;
            let rhs = ring.fuse(&ring.conj(b)?, &ring.conj(a)?)?;
            if lhs != *rhs {
                return Ok(Verdict::fails(
                    "involution is anti-multiplicative",
                    vec![a.clone(), b.clone()],
                    format!("conj({a}⊗{b}) = {lhs} but conj({b})⊗conj({a}) = {rhs}"),
                ));
            }
        }
    }
    for a in &basis {
        for b in &basis {
            let ab = ring.fuse(a, b)?.into_element();
            for c in &basis {
                let lhs = ring.tensor(&ab, &Element::basis(c.clone()))?;
                let bc = ring.fuse(b, c)?.into_element();
                let rhs = ring.tensor(&Element::basis(a.clone()), &bc)?;
                if lhs != rhs {
                    return Ok(Verdict::fails(
                        "associativity",
                        vec![a.clone(), b.clone(), c.clone()],
                        format!("({a}⊗{b})⊗{c} = {lhs} but {a}⊗({b}⊗{c}) = {rhs}"),
                    ));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

fn dim_of(ring: &BasedRing, e: &Element) -> Result<Dim> {
    let mut total = Dim::from_integer(0);
    for (b, c) in e.iter() {
        let term = ring.dim(b)?.checked_mul(&Dim::from_integer(c)).ok_or(Error::Overflow("dimension"))?;
        total = total.checked_add(&term).ok_or(Error::Overflow("dimension"))?;
    }
    Ok(total)
}

/// Positivity, conjugation invariance and multiplicativity of the
/// dimension function on pairs within `depth`.
pub fn check_dimension(ring: &BasedRing, depth: usize) -> Result<Verdict> {
    check_depth(depth)?;
    let basis = ring.basis_up_to_depth(depth)?;
    for a in &basis {
        let d = ring.dim(a)?;
        if d <= Dim::from_integer(0) {
            return Ok(Verdict::fails("dimension positivity", vec![a.clone()], format!("d({a}) = {d}")));
        }
        let dc = ring.dim(&ring.conj(a)?)?;
        if dc != d {
            return Ok(Verdict::fails(
                "dimension is conjugation invariant",
                vec![a.clone()],
                format!("d({a}) = {d} but d(conj({a})) = {dc}"),
            ));
        }
    }
    for a in &basis {
        for b in &basis {
            let lhs = ring.dim(a)?.checked_mul(&ring.dim(b)?).ok_or(Error::Overflow("dimension"))?;
            let prod = ring.fuse(a, b)?;
            let rhs = dim_of(ring, &prod)?;
            if lhs != rhs {
                return Ok(Verdict::fails(
                    "dimension is multiplicative",
                    vec![a.clone(), b.clone()],
                    format!("d({a})·d({b}) = {} · {} = {lhs} ≠ {rhs} = d({prod})", ring.dim(a)?, ring.dim(b)?),
                ));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `N^c_{a,b} = N^b_{conj(a),c}` for all a, b, c within `depth`.
pub fn check_frobenius_reciprocity(ring: &BasedRing, depth: usize) -> Result<Verdict> {
    check_depth(depth)?;
    let basis = ring.basis_up_to_depth(depth)?;
    for a in &basis {
        let ca = ring.conj(a)?;
        for b in &basis {
            let ab = ring.fuse(a, b)?;
            for c in &basis {
                let lhs = ab.coeff(c);
                let rhs = ring.fuse(&ca, c)?.coeff(b);
                if lhs != rhs {
                    return Ok(Verdict::fails(
                        "Frobenius reciprocity",
                        vec![a.clone(), b.clone(), c.clone()],
                        format!("N^{c}_({a},{b}) = {lhs} but N^{b}_(conj({a}),{c}) = {rhs}"),
                    ));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}
