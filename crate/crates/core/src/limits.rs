//! Enumeration guards. `UA_GUARD_N`, when set, overrides every guard.

use crate::error::{Error, Result};

pub const MATCHING_GUARD: usize = 7;
pub const SWEEP_GUARD: usize = 4;
pub const THEOREM1_GUARD: usize = 5;
pub const BOTTLENECK_ENUMERATION_GUARD: usize = 20;

fn env_override() -> Option<usize> {
    std::env::var("UA_GUARD_N").ok()?.trim().parse().ok()
}

fn guard(default: usize) -> usize {
    env_override().unwrap_or(default)
}

pub fn matching_guard() -> usize {
    guard(MATCHING_GUARD)
}

pub fn sweep_guard() -> usize {
    guard(SWEEP_GUARD)
}

pub fn theorem1_guard() -> usize {
    guard(THEOREM1_GUARD)
}

pub(crate) fn check(what: &'static str, n: usize, guard: usize) -> Result<()> {
    if n > guard {
        Err(Error::GuardExceeded { what, n, guard })
    } else {
        Ok(())
    }
}
