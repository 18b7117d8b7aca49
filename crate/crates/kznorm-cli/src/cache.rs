//! Advisory on-disk cache for KZ transport results.
//!
//! Transport at tight tolerances is the only expensive computation in
//! this toolkit, so `kz-verify` memoizes the numeric norm per
//! `(j, k, κ, tol)` tuple. Keys also include the crate version so a
//! rebuilt binary never replays stale numbers. The cache is strictly
//! advisory: any read or write failure falls back to recomputation.

use std::fs;
use std::path::{Path, PathBuf};

use kznorm_core::halfint::HalfInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV_VAR: &str = "KZNORM_CACHE_DIR";

/// Resolve the cache directory: explicit flag, then the
/// `KZNORM_CACHE_DIR` environment variable, then a per-user temp
/// location.
pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(d) = flag {
        return d.to_path_buf();
    }
    if let Ok(d) = std::env::var(CACHE_ENV_VAR) {
        if !d.is_empty() {
            return PathBuf::from(d);
        }
    }
    std::env::temp_dir().join("kznorm-cache")
}

/// Cache key: SHA-256 over the crate version and the exact bit
/// patterns of every parameter that influences the numeric result.
fn key(j: HalfInt, k: i64, kappa: f64, tol: f64) -> String {
    let canonical = format!(
        "kznorm kz-verify v{} k={} kappa_bits={:016x} twice_j={} tol_bits={:016x}",
        env!("CARGO_PKG_VERSION"),
        k,
        kappa.to_bits(),
        j.twice(),
        tol.to_bits()
    );
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

#[derive(Serialize, Deserialize)]
struct Entry {
    numeric: f64,
}

pub fn lookup(dir: &Path, j: HalfInt, k: i64, kappa: f64, tol: f64) -> Option<f64> {
    let path = dir.join(format!("{}.json", key(j, k, kappa, tol)));
    let text = fs::read_to_string(path).ok()?;
    let entry: Entry = serde_json::from_str(&text).ok()?;
    entry.numeric.is_finite().then_some(entry.numeric)
}

pub fn store(dir: &Path, j: HalfInt, k: i64, kappa: f64, tol: f64, numeric: f64) {
    // Best effort only; a read-only or missing directory is not an error.
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    let path = dir.join(format!("{}.json", key(j, k, kappa, tol)));
    if let Ok(text) = serde_json::to_string(&Entry { numeric }) {
        let _ = fs::write(path, text);
    }
}
