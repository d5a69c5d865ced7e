//! HTTP corpus fetching with an idempotent local cache.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Stable 64-bit FNV-1a over the URL; the cache key must not vary across
/// runs or platforms.
fn fnv1a64(data: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in data.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn sanitized_stem(url: &str) -> String {
    let tail = url
        .rsplit('/')
        .find(|seg| !seg.is_empty())
        .unwrap_or("download");
    let mut out: String = tail
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '.' || c == '-' || c == '_' { c } else { '_' })
        .collect();
    out.truncate(64);
    if out.is_empty() {
        out.push_str("download");
    }
    out
}

/// Cache path for a URL, independent of whether the file exists yet.
pub fn cache_path(url: &str, cache_dir: &Path) -> PathBuf {
    cache_dir.join(format!("{:016x}-{}", fnv1a64(url), sanitized_stem(url)))
}

/// Download `url` into the cache, keyed by URL hash. An existing cache
/// entry is returned as-is with no network call; bytes are saved raw.
pub fn fetch(url: &str, cache_dir: &Path) -> Result<PathBuf> {
    let path = cache_path(url, cache_dir);
    if path.exists() {
        return Ok(path);
    }
    fs::create_dir_all(cache_dir)
        .with_context(|| format!("cannot create cache dir {}", cache_dir.display()))?;
    let response = ureq::get(url)
        .call()
        .with_context(|| format!("fetch failed for {url}"))?;
    let status = response.status();
    if status != 200 {
        bail!("fetch failed for {url}: HTTP status {status}");
    }
    let mut bytes = Vec::new();
    response
        .into_reader()
        .read_to_end(&mut bytes)
        .with_context(|| format!("read failed for {url}"))?;
    let tmp = path.with_extension("part");
    fs::write(&tmp, &bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("cannot finalize {}", path.display()))?;
    Ok(path)
}
