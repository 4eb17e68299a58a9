//! Finitely supported integer combinations of basis elements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::basis::BasisId;
use crate::error::{Error, Result};

/// A finite Z-linear combination of basis elements. Zero coefficients are
/// never stored; all arithmetic is overflow-checked.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element {
    terms: BTreeMap<BasisId, i64>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: BasisId) -> Self {
        Self::term(b, 1)
    }

    pub fn term(b: BasisId, c: i64) -> Self {
        let mut e = Self::zero();
        if c != 0 {
            e.terms.insert(b, c);
        }
        e
    }

    /// Builds an element from (label, coefficient) pairs, merging repeats.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisId, i64)>,
    {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c)?;
        }
        Ok(e)
    }

    pub fn add_term(&mut self, b: BasisId, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(b).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::Overflow("element sum"))?;
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
        Ok(())
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &Element, scale: i64) -> Result<()> {
        for (b, c) in other.iter() {
            let c = c.checked_mul(scale).ok_or(Error::Overflow("scalar multiple"))?;
            self.add_term(b.clone(), c)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Element> {
        let mut out = Element::zero();
        out.add_scaled(self, k)?;
        Ok(out)
    }

    pub fn neg(&self) -> Result<Element> {
        self.checked_scale(-1)
    }

    pub fn coeff(&self, b: &BasisId) -> i64 {
        self.terms.get(b).copied().unwrap_or(0)
    }

    pub fn contains(&self, b: &BasisId) -> bool {
        self.terms.contains_key(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisId, i64)> + '_ {
        self.terms.iter().map(|(b, c)| (b, *c))
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisId> + '_ {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> Result<i64> {
        self.terms.values().try_fold(0i64, |acc, c| acc.checked_add(*c)).ok_or(Error::Overflow("coefficient total"))
    }

    /// The label, if the element is a single basis element with coefficient 1.
    pub fn as_basis(&self) -> Option<&BasisId> {
        match self.terms.iter().next() {
            Some((b, 1)) if self.terms.len() == 1 => Some(b),
            _ => None,
        }
    }

    /// Relabels every term through `f`, merging collisions.
    pub fn map_labels<F>(&self, mut f: F) -> Result<Element>
    where
        F: FnMut(&BasisId) -> Result<BasisId>,
    {
        let mut out = Element::zero();
        for (b, c) in self.iter() {
            out.add_term(f(b)?, c)?;
        }
        Ok(out)
    }

    /// Expands `Σ c_b · f(b)` for a linear map given on basis elements.
    pub fn expand<F>(&self, mut f: F) -> Result<Element>
    where
        F: FnMut(&BasisId) -> Result<Element>,
    {
        let mut out = Element::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b)?, c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" ⊕ ")?;
            }
            match c {
                1 => write!(f, "{b}")?,
                c => write!(f, "{c}·{b}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl From<BasisId> for Element {
    fn from(b: BasisId) -> Self {
        Element::basis(b)
    }
}

/// An element whose coefficients are all non-negative, e.g. the
/// decomposition of a product of basis elements.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct NNElement(Element);

impl NNElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: BasisId) -> Self {
        NNElement(Element::basis(b))
    }

    pub fn new(e: Element) -> Result<Self> {
        if let Some((b, c)) = e.iter().find(|(_, c)| *c < 0) {
            return Err(Error::Invalid(format!("negative coefficient {c} on `{b}`")));
        }
        Ok(NNElement(e))
    }

    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisId, i64)>,
    {
        Self::new(Element::from_terms(terms)?)
    }

    pub fn into_element(self) -> Element {
        self.0
    }
}

impl Deref for NNElement {
    type Target = Element;
    fn deref(&self) -> &Element {
        &self.0
    }
}

impl fmt::Display for NNElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for NNElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NNElement({})", self.0)
    }
}

impl<'de> Deserialize<'de> for NNElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = Element::deserialize(d)?;
        NNElement::new(e).map_err(serde::de::Error::custom)
    }
}
