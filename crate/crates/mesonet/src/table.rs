//! Two-column `key,value` text tables used for configuration data.

use crate::error::{Error, Result};

/// Parses non-empty, non-`#` lines into trimmed `(key, value)` pairs split
/// at the first comma.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once(',')
            .ok_or_else(|| Error::syntax(i + 1, "expected two comma-separated columns"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::syntax(i + 1, "empty column"));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}
