//! Per-level coefficient cache.
//!
//! File format: a header line `cphi m=<m> nmax=<N> version=1` followed by
//! one decimal integer per line. A cache with smaller nmax is recomputed to
//! the requested length and rewritten; entries past the header's nmax are
//! never trusted.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

pub const CACHE_VERSION: u32 = 1;

pub fn cache_path(dir: &Path, m: u64) -> PathBuf {
    dir.join(format!("cphi_m{m}_v{CACHE_VERSION}.txt"))
}

/// Default cache directory: $CPHI_CACHE_DIR, else ./cphi-cache.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("CPHI_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("cphi-cache"))
}

fn parse_header(line: &str, m: u64) -> Option<usize> {
    let rest = line.strip_prefix("cphi ")?;
    let mut m_got = None;
    let mut nmax = None;
    let mut version = None;
    for field in rest.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        match key {
            "m" => m_got = value.parse::<u64>().ok(),
            "nmax" => nmax = value.parse::<usize>().ok(),
            "version" => version = value.parse::<u32>().ok(),
            _ => {}
        }
    }
    (m_got == Some(m) && version == Some(CACHE_VERSION)).then_some(nmax)?
}

/// Load cphi_m(0..=nmax) from the cache when the header covers it.
pub fn load(dir: &Path, m: u64, nmax: usize) -> Option<Vec<BigInt>> {
    let text = fs::read_to_string(cache_path(dir, m)).ok()?;
    let mut lines = text.lines();
    let header_nmax = parse_header(lines.next()?, m)?;
    if header_nmax < nmax {
        return None;
    }
    let mut out = Vec::with_capacity(nmax + 1);
    for line in lines.take(nmax + 1) {
        out.push(line.trim().parse().ok()?);
    }
    (out.len() == nmax + 1).then_some(out)
}

/// Write cphi_m(0..=nmax) to the cache.
pub fn store(dir: &Path, m: u64, values: &[BigInt]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut buf = String::new();
    buf.push_str(&format!("cphi m={m} nmax={} version={CACHE_VERSION}\n", values.len() - 1));
    for v in values {
        buf.push_str(&v.to_string());
        buf.push('\n');
    }
    let mut file = fs::File::create(cache_path(dir, m))?;
    file.write_all(buf.as_bytes())
}

/// Cached cphi series: loads when the cache is long enough, otherwise
/// computes and rewrites (extending a stale cache).
pub fn cphi_series_cached(dir: &Path, m: u64, nmax: usize) -> io::Result<Vec<BigInt>> {
    if let Some(values) = load(dir, m, nmax) {
        return Ok(values);
    }
    // extend rather than shrink: keep the longer of old and requested
    let old_len = fs::read_to_string(cache_path(dir, m))
        .ok()
        .and_then(|text| parse_header(text.lines().next()?, m))
        .unwrap_or(0);
    let target = nmax.max(old_len);
    let values = cphi_core::frob::cphi_series(m, target);
    store(dir, m, &values)?;
    Ok(values[..=nmax].to_vec())
}
