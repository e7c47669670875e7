//! Size caps for the exhaustive pattern-side routines.

use std::sync::OnceLock;

use crate::error::{ensure_size, Result};

pub const DEFAULT_MAX_PATTERN: usize = 12;

/// Environment variable that raises or lowers the pattern vertex cap (at most 64).
pub const MAX_PATTERN_ENV: &str = "DEGENCOUNT_MAX_PATTERN";

/// Pattern vertex cap, read once from the environment.
pub fn max_pattern_vertices() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_PATTERN_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .map(|v| v.clamp(1, 64))
            .unwrap_or(DEFAULT_MAX_PATTERN)
    })
}

/// Edge cap for orientation enumeration: twice the vertex cap, but never below 28 so
/// that every graph on eight vertices (up to `K8`) is admitted.
pub fn max_pattern_edges() -> usize {
    (2 * max_pattern_vertices()).max(28)
}

pub(crate) fn check_pattern_size(n: usize) -> Result<()> {
    ensure_size("pattern vertex count", n, max_pattern_vertices())
}
