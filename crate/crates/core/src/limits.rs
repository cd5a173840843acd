//! Enumeration budgets.
//!
//! Every operation that enumerates errors, group elements or state-vector
//! entries checks its required budget against these caps first and fails
//! with [`Error::CapExceeded`](crate::Error::CapExceeded) instead of running
//! away.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of Weyl pairs `(x, y)` in an error sphere.
    pub max_errors: u64,
    /// Maximum `#S = q^r` for paths that materialize the whole subgroup.
    pub max_group: u64,
    /// Maximum Hilbert-space dimension `q^n` for state-vector paths.
    pub max_state_dim: u64,
    /// Maximum number of subsets / subspaces enumerated combinatorially.
    pub max_subsets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_errors: 10_000_000,
            max_group: 1 << 16,
            max_state_dim: 1 << 20,
            max_subsets: 10_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check(what: &'static str, required: &BigUint, cap: u64) -> Result<u64> {
        match required.to_u64() {
            Some(v) if v <= cap => Ok(v),
            _ => Err(Error::CapExceeded {
                what,
                required: required.to_string(),
                cap,
            }),
        }
    }
}
