//! Basis labels and the small amount of label syntax shared by the
//! composite constructions.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Canonical label of a basis element of a ring or a module.
///
/// Two ids are equal iff their labels are byte-identical. The ordering is a
/// natural order (digit runs compare numerically, so `x2 < x10`), with the
/// raw bytes as final tie-break so that it stays consistent with equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisId(Arc<str>);

impl BasisId {
    pub fn new(label: impl AsRef<str>) -> Self {
        BasisId(Arc::from(label.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for BasisId {
    fn from(s: &str) -> Self {
        BasisId::new(s)
    }
}

impl From<String> for BasisId {
    fn from(s: String) -> Self {
        BasisId::new(s)
    }
}

impl Ord for BasisId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BasisId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for BasisId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for BasisId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d).map(BasisId::from)
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let na = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let nb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let da = trim_zeros(&a[..na]);
                let db = trim_zeros(&b[..nb]);
                let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[na..];
                b = &b[nb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k.min(d.len().saturating_sub(1))..]
}

/// Characters reserved for composite labels (pairs, words, tags).
pub(crate) const RESERVED: &[char] = &['(', ')', '[', ']', ',', '.', ':', '⊙'];

/// The label of the empty word in a free product.
pub const EMPTY_WORD: &str = "ε";

/// Labels that may appear in explicitly tabulated rings, groups and modules.
pub fn is_simple_label(s: &str) -> bool {
    !s.is_empty() && s != EMPTY_WORD && !s.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
}

/// Splits `s` at occurrences of `sep` that are not nested inside `()` or `[]`.
/// Returns `None` when the brackets are unbalanced.
pub(crate) fn split_top_level(s: &str, sep: char) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.checked_sub(1)?,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}

/// If `s` is exactly `open inner close` with the outer brackets matching each
/// other, returns `inner`.
pub(crate) fn strip_wrapping(s: &str, open: char, close: char) -> Option<&str> {
    let inner = s.strip_prefix(open)?.strip_suffix(close)?;
    let mut depth = 0usize;
    for c in inner.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.checked_sub(1)?,
            _ => {}
        }
    }
    (depth == 0).then_some(inner)
}

pub(crate) fn pair_label(a: &BasisId, b: &BasisId) -> BasisId {
    BasisId::new(format!("({a},{b})"))
}

pub(crate) fn parse_pair(s: &str) -> Option<(&str, &str)> {
    let inner = strip_wrapping(s, '(', ')')?;
    let parts = split_top_level(inner, ',')?;
    match parts.as_slice() {
        [a, b] if !a.is_empty() && !b.is_empty() => Some((a, b)),
        _ => None,
    }
}
