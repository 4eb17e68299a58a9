//! Canonical JSON: sorted keys, no insignificant whitespace, and a content
//! hash over those bytes.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn to_canonical_value<T: Serialize + ?Sized>(v: &T) -> serde_json::Value {
    // serde_json's default map is ordered, so re-encoding through `Value`
    // sorts every object by key.
    serde_json::to_value(v).expect("serializable value")
}

pub fn canonical_json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(&to_canonical_value(v)).expect("serializable value")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn content_hash<T: Serialize + ?Sized>(v: &T) -> String {
    sha256_hex(canonical_json(v).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_compact() {
        let v = json!({"b": 1, "a": {"d": [1, 2], "c": null}});
        assert_eq!(canonical_json(&v), r#"{"a":{"c":null,"d":[1,2]},"b":1}"#);
        assert_eq!(content_hash(&v).len(), 64);
    }
}
