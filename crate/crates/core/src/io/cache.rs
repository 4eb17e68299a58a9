//! Append-only product log shared between runs.
//!
//! One JSON record per line: ring fingerprint, the ordered pair, the
//! product and a checksum over the other fields. Loading stops at the first
//! line that does not parse or whose checksum is wrong and truncates the
//! file there. Cached products only ever seed a ring's memo, so a cache can
//! make a run faster but never changes its answer.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basis::BasisId;
use crate::canonical::{canonical_json, sha256_hex};
use crate::element::NNElement;
use crate::ring::BasedRing;

const FILE_NAME: &str = "products.jsonl";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    ring: String,
    a: BasisId,
    b: BasisId,
    product: NNElement,
    sum: String,
}

fn checksum(ring: &str, a: &BasisId, b: &BasisId, product: &NNElement) -> String {
    sha256_hex(canonical_json(&(ring, a, b, product)).as_bytes())[..16].to_string()
}

type Entry = (String, BasisId, BasisId, NNElement);

pub struct ProductCache {
    path: PathBuf,
    entries: Vec<Entry>,
    seen: HashSet<(String, BasisId, BasisId)>,
}

impl ProductCache {
    /// Opens (creating if needed) the log in `dir`, dropping a corrupt tail.
    pub fn open(dir: impl AsRef<Path>) -> io::Result<Self> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let path = dir.join(FILE_NAME);
        let text = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e),
        };
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        let mut good = 0usize;
        for line in text.split_inclusive(|c| *c == b'\n') {
            let Some(body) = line.strip_suffix(b"\n") else { break };
            let Ok(r) = serde_json::from_slice::<Record>(body) else { break };
            if r.sum != checksum(&r.ring, &r.a, &r.b, &r.product) {
                break;
            }
            good += line.len();
            if seen.insert((r.ring.clone(), r.a.clone(), r.b.clone())) {
                entries.push((r.ring, r.a, r.b, r.product));
            }
        }
        if good < text.len() {
            OpenOptions::new().write(true).open(&path)?.set_len(good as u64)?;
        }
        Ok(ProductCache { path, entries, seen })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Seeds the memo of `ring` with its recorded products.
    pub fn prefill(&self, ring: &BasedRing) {
        let fp = ring.fingerprint();
        ring.prefill_products(
            self.entries.iter().filter(|e| e.0 == fp).map(|(_, a, b, p)| ((a.clone(), b.clone()), p.clone())),
        );
    }

    /// Appends the products `ring` has memoised that are not yet logged.
    pub fn record(&mut self, ring: &BasedRing) -> io::Result<usize> {
        let fp = ring.fingerprint().to_string();
        let mut out = Vec::new();
        let mut added = 0;
        for ((a, b), p) in ring.cached_products() {
            if self.seen.insert((fp.clone(), a.clone(), b.clone())) {
                let sum = checksum(&fp, &a, &b, &p);
                let rec = Record { ring: fp.clone(), a, b, product: p, sum };
                out.extend_from_slice(canonical_json(&rec).as_bytes());
                out.push(b'\n');
                self.entries.push((rec.ring, rec.a, rec.b, rec.product));
                added += 1;
            }
        }
        if !out.is_empty() {
            let mut f: File = OpenOptions::new().create(true).append(true).open(&self.path)?;
            f.write_all(&out)?;
        }
        Ok(added)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::su2_ring;

    #[test]
    fn products_survive_and_corrupt_tails_are_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let ring = su2_ring();
        ring.fuse(&BasisId::new("x2"), &BasisId::new("x3")).unwrap();
        let mut cache = ProductCache::open(dir.path()).unwrap();
        cache.record(&ring).unwrap();
        let n = cache.len();
        assert!(n >= 1);

        let path = cache.path().to_owned();
        let mut bytes = fs::read(&path).unwrap();
        let clean = bytes.len();
        bytes.extend_from_slice(b"{\"ring\":\"trunc");
        fs::write(&path, &bytes).unwrap();

        let again = ProductCache::open(dir.path()).unwrap();
        assert_eq!(again.len(), n);
        assert_eq!(fs::metadata(&path).unwrap().len() as usize, clean);

        let fresh = su2_ring();
        again.prefill(&fresh);
        assert_eq!(fresh.cached_products(), ring.cached_products());
    }

    #[test]
    fn tampered_records_stop_the_scan() {
        let dir = tempfile::tempdir().unwrap();
        let ring = su2_ring();
        ring.fuse(&BasisId::new("x1"), &BasisId::new("x1")).unwrap();
        let mut cache = ProductCache::open(dir.path()).unwrap();
        cache.record(&ring).unwrap();
        let path = cache.path().to_owned();
        let text = fs::read_to_string(&path).unwrap().replace("\"x0\":1", "\"x0\":2");
        fs::write(&path, text).unwrap();
        assert!(ProductCache::open(dir.path()).unwrap().is_empty());
    }
}
