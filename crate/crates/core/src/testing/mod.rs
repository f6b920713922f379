//! Reference oracles and fixture generators for the test suites. This
//! module is test-only (the `testing` feature gates it for integration
//! suites); nothing here is reachable from the engine's own execution
//! paths, so oracle results stay independent of what they check.

pub mod gen;
pub mod oracle;

pub mod bench;

use crate::query::Solution;

/// Sorted canonical keys: two solution sequences are multiset-equal iff
/// these compare equal.
pub fn multiset(rows: &[Solution]) -> Vec<String> {
    let mut keys: Vec<String> = rows.iter().map(Solution::canonical_key).collect();
    keys.sort();
    keys
}
