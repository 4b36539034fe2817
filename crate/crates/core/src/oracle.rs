//! Brute-force reference answers for tests: sampled characteristic
//! sequences, eventual periods of finite prefixes, and a bounded decision
//! whose positive answers are verified by isomorphism.

use crate::automaton::Dfa;
use crate::error::{Error, Result};
use crate::isomorphism::isomorphic;
use crate::minimize::minimize;
use crate::numeration::{
    build_minimal_automaton_with_limit, canonicalize, representation, CharacteristicProfile, UpSet,
};

pub type Bits = Vec<bool>;

/// Membership of `0..n_max` in the set accepted by `dfa`.
pub fn characteristic_prefix(dfa: &Dfa, n_max: u64) -> Bits {
    (0..n_max)
        .map(|n| dfa.accepts(&representation(n, dfa.base())))
        .collect()
}

/// For each `p` in `1..=max_p`, the least `m` such that `bits` is
/// `p`-periodic from `m` on. Entry `p - 1` holds `m_p`.
fn tail_starts(bits: &[bool], max_p: usize) -> Vec<usize> {
    (1..=max_p)
        .map(|p| {
            (0..bits.len().saturating_sub(p))
                .rev()
                .find(|&i| bits[i] != bits[i + p])
                .map_or(0, |i| i + 1)
        })
        .collect()
}

fn check_length(bits: &[bool], max_m: usize, max_p: usize) -> Result<()> {
    let needed = max_m + 2 * max_p;
    if bits.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            available: bits.len(),
        });
    }
    Ok(())
}

/// The smallest `(m, p)` in lexicographic order, with `m <= max_m` and
/// `1 <= p <= max_p`, such that `bits[i] = bits[i + p]` for all `i >= m`.
pub fn find_eventual_period(
    bits: &[bool],
    max_m: usize,
    max_p: usize,
) -> Result<Option<(usize, usize)>> {
    check_length(bits, max_m, max_p)?;
    Ok(tail_starts(bits, max_p)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i + 1))
        .filter(|&(m, _)| m <= max_m)
        .min())
}

/// Samples `max_m + 2 max_p` values and tries every in-bounds eventual
/// period of the sample, smallest first, returning the first candidate set
/// whose minimal automaton is isomorphic to `minimize(dfa)`.
pub fn brute_decide(dfa: &Dfa, max_m: usize, max_p: usize) -> Result<Option<UpSet>> {
    dfa.validate()?;
    let min = minimize(dfa);
    let bits = characteristic_prefix(dfa, (max_m + 2 * max_p) as u64);
    let mut candidates: Vec<(usize, usize)> = tail_starts(&bits, max_p)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i + 1))
        .filter(|&(m, _)| m <= max_m)
        .collect();
    candidates.sort_unstable();
    for (m, p) in candidates {
        let profile = CharacteristicProfile::new(bits[..m].to_vec(), bits[m..m + p].to_vec())?;
        let set = canonicalize(&profile);
        match build_minimal_automaton_with_limit(&set, dfa.base(), min.state_count() + 1) {
            Ok(candidate) if isomorphic(&candidate, &min)? => return Ok(Some(set)),
            Ok(_) | Err(Error::StateLimitExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
