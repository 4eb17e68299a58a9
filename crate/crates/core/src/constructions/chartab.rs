//! Character tables with exact cyclotomic values, and the representation
//! rings they determine.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{is_simple_label, BasisId};
use crate::element::NNElement;
use crate::error::{invalid, Error, Result};
use crate::ring::{BasedRing, Dim, FusionTable, RingExpr, RingKind};

type Q = num_rational::Ratio<i64>;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn q_add(a: Q, b: Q) -> Result<Q> {
    a.checked_add(&b).ok_or(Error::Overflow("cyclotomic arithmetic"))
}

fn q_mul(a: Q, b: Q) -> Result<Q> {
    a.checked_mul(&b).ok_or(Error::Overflow("cyclotomic arithmetic"))
}

/// Integer coefficients of the n-th cyclotomic polynomial, constant term
/// first.
fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let divisor = cyclotomic_polynomial(d);
        poly = divide_monic(&poly, &divisor);
    }
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    quot
}

/// An element of the cyclotomic field Q(ζ_N), stored as a polynomial in ζ_N
/// of degree < N (so complex conjugation is an index reversal).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: usize,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    pub fn rational(order: usize, q: Q) -> Self {
        let mut coeffs = vec![Q::zero(); order];
        coeffs[0] = q;
        Cyclotomic { order, coeffs }
    }

    /// ζ_N^k
    pub fn root(order: usize, k: usize) -> Self {
        let mut coeffs = vec![Q::zero(); order];
        coeffs[k % order] = Q::one();
        Cyclotomic { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(invalid("cyclotomic numbers of different conductors"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| q_add(*a, *b)).collect::<Result<_>>()?;
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let n = self.order;
        let mut coeffs = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                coeffs[(i + j) % n] = q_add(coeffs[(i + j) % n], q_mul(*a, *b)?)?;
            }
        }
        Ok(Cyclotomic { order: n, coeffs })
    }

    pub fn scale(&self, q: Q) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| q_mul(*a, q)).collect::<Result<_>>()?;
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn conj(&self) -> Self {
        let n = self.order;
        let mut coeffs = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[(n - i) % n] = *a;
        }
        Cyclotomic { order: n, coeffs }
    }

    /// Coordinates in the power basis 1, ζ, …, ζ^{φ(N)-1}.
    fn reduced(&self) -> Result<Vec<Q>> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for k in (deg..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            for (i, p) in phi.iter().enumerate() {
                let t = q_mul(c, Q::from_integer(*p))?;
                rem[k - deg + i] = rem[k - deg + i].checked_sub(&t).ok_or(Error::Overflow("cyclotomic arithmetic"))?;
            }
        }
        rem.truncate(deg);
        Ok(rem)
    }

    pub fn exact_eq(&self, other: &Self) -> Result<bool> {
        self.same_order(other)?;
        Ok(self.reduced()? == other.reduced()?)
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Result<Option<Q>> {
        let r = self.reduced()?;
        Ok(r[1..].iter().all(Zero::is_zero).then(|| r[0]))
    }

    /// Parses GAP-style notation: sums of rational multiples of `E(n)^k`,
    /// e.g. `-1`, `1/2`, `E(3)^2`, `-E(3)-E(3)^2`, `2*E(5)`.
    pub fn parse(text: &str, order: usize) -> Result<Self> {
        let mut out = Cyclotomic::rational(order, Q::zero());
        for (q, n, k) in parse_terms(text)? {
            if !order.is_multiple_of(n) {
                return Err(invalid(format!("E({n}) does not divide conductor {order}")));
            }
            out = out.add(&Cyclotomic::root(order, (k * (order / n)) % order).scale(q)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                k => write!(f, "{c}*E({})^{k}", self.order)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// (coefficient, n, k) for each `coefficient·E(n)^k` term.
fn parse_terms(text: &str) -> Result<Vec<(Q, usize, usize)>> {
    let bad = || invalid(format!("cannot parse character value `{text}`"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let mut sign = 1i64;
        while let Some(c) = rest.chars().next().filter(|c| *c == '+' || *c == '-') {
            if c == '-' {
                sign = -sign;
            }
            rest = &rest[1..];
        }
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        rest = &rest[end..];
        if term.is_empty() {
            return Err(bad());
        }
        let mut q = Q::from_integer(sign);
        let (mut n, mut k) = (1usize, 0usize);
        for factor in term.split('*') {
            if let Some(root) = factor.strip_prefix("E(") {
                let (inner, power) = root.split_once(')').ok_or_else(bad)?;
                let m: usize = inner.parse().map_err(|_| bad())?;
                let p: usize = match power.strip_prefix('^') {
                    Some(p) => p.parse().map_err(|_| bad())?,
                    None if power.is_empty() => 1,
                    None => return Err(bad()),
                };
                if m == 0 {
                    return Err(bad());
                }
                // combine E(n)^k · E(m)^p over lcm(n, m)
                let l = lcm(n, m);
                k = (k * (l / n) + p * (l / m)) % l;
                n = l;
            } else {
                let (a, b) = factor.split_once('/').unwrap_or((factor, "1"));
                let a: i64 = a.parse().map_err(|_| bad())?;
                let b: i64 = b.parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                q = q_mul(q, Q::new(a, b))?;
            }
        }
        terms.push((q, n, k));
    }
    Ok(terms)
}

fn conductor_of(text: &str) -> Result<usize> {
    Ok(parse_terms(text)?.iter().fold(1, |acc, (_, n, _)| lcm(acc, *n)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub label: String,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub label: BasisId,
    pub values: Vec<String>,
}

/// A character table in a definition file: a builtin name (`"S3"`,
/// `"C<n>"`, `"trivial"`) or explicit classes and characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterTableSpec {
    Named(String),
    Explicit { classes: Vec<ClassSpec>, characters: Vec<CharacterSpec> },
}

impl CharacterTableSpec {
    pub fn build(&self) -> Result<CharacterTable> {
        match self {
            CharacterTableSpec::Named(name) => CharacterTable::named(name),
            CharacterTableSpec::Explicit { classes, characters } => {
                CharacterTable::new(classes.clone(), characters.clone())
            }
        }
    }
}

/// Irreducible characters of a finite group on its conjugacy classes. The
/// first class must be the identity class.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    classes: Vec<ClassSpec>,
    labels: Vec<BasisId>,
    values: Vec<Vec<Cyclotomic>>,
    group_order: u64,
    conductor: usize,
    source: Vec<CharacterSpec>,
}

impl CharacterTable {
    /// Parses and validates: square table, identity class first with
    /// positive integer degrees, and exact orthonormality of the rows.
    pub fn new(classes: Vec<ClassSpec>, characters: Vec<CharacterSpec>) -> Result<Self> {
        if classes.is_empty() || classes.len() != characters.len() {
            return Err(invalid("a character table needs as many characters as classes"));
        }
        if classes[0].size != 1 {
            return Err(invalid("the first class must be the identity class (size 1)"));
        }
        let group_order =
            classes.iter().try_fold(0u64, |acc, c| acc.checked_add(c.size)).ok_or(Error::Overflow("group order"))?;
        let mut conductor = 1;
        for ch in &characters {
            if !is_simple_label(ch.label.as_str()) {
                return Err(invalid(format!("`{}` is not a valid character label", ch.label)));
            }
            if ch.values.len() != classes.len() {
                return Err(invalid(format!(
                    "character `{}` has {} values for {} classes",
                    ch.label,
                    ch.values.len(),
                    classes.len()
                )));
            }
            for v in &ch.values {
                conductor = lcm(conductor, conductor_of(v)?);
            }
        }
        let values = characters
            .iter()
            .map(|ch| ch.values.iter().map(|v| Cyclotomic::parse(v, conductor)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<BasisId> = characters.iter().map(|c| c.label.clone()).collect();
        let table = CharacterTable { classes, labels, values, group_order, conductor, source: characters };
        for i in 0..table.labels.len() {
            let deg = table.values[i][0].as_rational()?;
            if !matches!(deg, Some(d) if d.is_integer() && d > Q::zero()) {
                return Err(invalid(format!("degree of `{}` is not a positive integer", table.labels[i])));
            }
            for j in 0..table.labels.len() {
                let ip = table.inner_product(&table.values[i], &table.values[j])?;
                let want = Q::from_integer(i64::from(i == j));
                if !ip.exact_eq(&Cyclotomic::rational(conductor, want))? {
                    return Err(invalid(format!(
                        "orthogonality fails: ⟨{}, {}⟩ = {ip}",
                        table.labels[i], table.labels[j]
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn named(name: &str) -> Result<Self> {
        let class = |label: &str, size| ClassSpec { label: label.into(), size };
        let ch = |label: &str, values: &[&str]| CharacterSpec {
            label: BasisId::new(label),
            values: values.iter().map(|v| v.to_string()).collect(),
        };
        match name {
            "trivial" => Self::new(vec![class("1", 1)], vec![ch("triv", &["1"])]),
            "S3" => Self::new(
                vec![class("1", 1), class("(12)", 3), class("(123)", 2)],
                vec![ch("triv", &["1", "1", "1"]), ch("sgn", &["1", "-1", "1"]), ch("std", &["2", "0", "-1"])],
            ),
            other => match other.strip_prefix('C').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n >= 1 => Self::cyclic(n),
                _ => Err(invalid(format!("unknown character table `{other}`"))),
            },
        }
    }

    /// Z/n: classes `g^k`, characters `chi_j(g^k) = E(n)^{jk}`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let classes = (0..n).map(|k| ClassSpec { label: format!("g^{k}"), size: 1 }).collect();
        let characters = (0..n)
            .map(|j| CharacterSpec {
                label: BasisId::new(format!("chi{j}")),
                values: (0..n)
                    .map(|k| if j * k % n == 0 { "1".to_string() } else { format!("E({n})^{}", j * k % n) })
                    .collect(),
            })
            .collect();
        Self::new(classes, characters)
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn labels(&self) -> &[BasisId] {
        &self.labels
    }

    pub fn to_spec(&self) -> CharacterTableSpec {
        CharacterTableSpec::Explicit { classes: self.classes.clone(), characters: self.source.clone() }
    }

    /// (1/|G|) Σ_k |C_k| a(g_k) conj(b(g_k))
    fn inner_product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Result<Cyclotomic> {
        let mut acc = Cyclotomic::rational(self.conductor, Q::zero());
        for (k, class) in self.classes.iter().enumerate() {
            let size = i64::try_from(class.size).map_err(|_| Error::Overflow("class size"))?;
            acc = acc.add(&a[k].mul(&b[k].conj())?.scale(Q::from_integer(size))?)?;
        }
        let order = i64::try_from(self.group_order).map_err(|_| Error::Overflow("group order"))?;
        acc.scale(Q::new(1, order))
    }

    /// `N^c_{a,b} = ⟨χ_a χ_b, χ_c⟩`, required to be a non-negative integer.
    pub fn fusion_coefficient(&self, a: usize, b: usize, c: usize) -> Result<i64> {
        let prod: Vec<Cyclotomic> =
            (0..self.classes.len()).map(|k| self.values[a][k].mul(&self.values[b][k])).collect::<Result<_>>()?;
        let n = self.inner_product(&prod, &self.values[c])?;
        match n.as_rational()? {
            Some(q) if q.is_integer() && *q.numer() >= 0 => Ok(*q.numer()),
            _ => Err(invalid(format!(
                "inconsistent character table: multiplicity of {} in {}⊗{} is {n}",
                self.labels[c], self.labels[a], self.labels[b]
            ))),
        }
    }
}

fn rep_ring_with_expr(t: &CharacterTable, expr: RingExpr) -> Result<BasedRing> {
    let n = t.labels.len();
    let unit = (0..n)
        .find(|&i| {
            t.values[i].iter().all(|v| v.exact_eq(&Cyclotomic::rational(t.conductor, Q::one())).unwrap_or(false))
        })
        .ok_or_else(|| invalid("character table has no trivial character"))?;
    let mut conj = HashMap::new();
    let mut dim = HashMap::new();
    for i in 0..n {
        let bar: Vec<Cyclotomic> = t.values[i].iter().map(Cyclotomic::conj).collect();
        let mut found = None;
        for j in 0..n {
            let mut same = true;
            for (x, y) in bar.iter().zip(&t.values[j]) {
                if !x.exact_eq(y)? {
                    same = false;
                    break;
                }
            }
            if same {
                found = Some(j);
                break;
            }
        }
        let j = found.ok_or_else(|| invalid(format!("conjugate of `{}` is not in the table", t.labels[i])))?;
        conj.insert(t.labels[i].clone(), t.labels[j].clone());
        let deg = t.values[i][0].as_rational()?.expect("validated degree");
        dim.insert(t.labels[i].clone(), Dim::from_integer(*deg.numer()));
    }
    let mut fusion = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let mut terms = BTreeMap::new();
            for c in 0..n {
                let m = t.fusion_coefficient(a, b, c)?;
                if m != 0 {
                    terms.insert(t.labels[c].clone(), m);
                }
            }
            fusion.insert((t.labels[a].clone(), t.labels[b].clone()), NNElement::from_terms(terms)?);
        }
    }
    let table = FusionTable::new(t.labels.clone(), t.labels[unit].clone(), conj, dim, fusion)?;
    Ok(BasedRing::from_kind(expr, RingKind::Table(table)))
}

/// The representation ring R(G) of a character table: irreducible
/// characters, multiplicities from character convolution, complex
/// conjugation, and degrees as dimensions.
pub fn rep_ring(t: &CharacterTable) -> Result<BasedRing> {
    rep_ring_with_expr(t, RingExpr::RepRing { table: t.to_spec() })
}

pub(crate) fn rep_ring_from_spec(spec: &CharacterTableSpec) -> Result<BasedRing> {
    rep_ring_with_expr(&spec.build()?, RingExpr::RepRing { table: spec.clone() })
}
