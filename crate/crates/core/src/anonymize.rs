//! Anonymized identifiers for logs and history files.

use sha2::{Digest, Sha256};
use std::fmt::Write;

/// Stable anonymized form of a user id: the first 16 hex chars of its
/// SHA-256 digest. Used for history filenames and alert logs so raw ids
/// never reach persisted artifacts.
pub fn anonymized_id(user_id: &str) -> String {
    let digest = Sha256::digest(user_id.as_bytes());
    let mut out = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        write!(out, "{byte:02x}").expect("write to String");
    }
    out
}
