//! Base-`b` numeration with the least significant digit first, ultimately
//! periodic sets and their minimal automata.

mod construct;
mod upset;

pub use construct::{
    build_atomic_explicit, build_minimal_automaton, build_minimal_automaton_with_limit, h_p,
    DEFAULT_STATE_LIMIT,
};
pub use upset::{canonicalize, minimal_period, CharacteristicProfile, UpSet};

use crate::error::{Error, Result};

/// Value of an LSDF word: `sum word[i] * base^i`.
pub fn value(word: &[u32], base: u32) -> Result<u64> {
    let mut v: u64 = 0;
    for &a in word.iter().rev() {
        if a >= base {
            return Err(Error::BadDigit { digit: a, base });
        }
        v = v
            .checked_mul(base as u64)
            .and_then(|v| v.checked_add(a as u64))
            .ok_or(Error::Overflow)?;
    }
    Ok(v)
}

/// The expansion of `n` without trailing zeros (empty for 0).
pub fn representation(mut n: u64, base: u32) -> Vec<u32> {
    assert!(base >= 2, "base must be at least 2");
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % base as u64) as u32);
        n /= base as u64;
    }
    digits
}
