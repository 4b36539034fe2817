use std::collections::{HashMap, VecDeque};

use crate::arith::{gcd, inverse_mod, mul_mod};
use crate::automaton::Dfa;
use crate::error::{Error, Result};

use super::upset::{minimal_period, UpSet};

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// The minimal automaton of `set`: states are the sets reachable from `set`
/// by derivatives, a state is final when it contains 0.
pub fn build_minimal_automaton(set: &UpSet, base: u32) -> Result<Dfa> {
    build_minimal_automaton_with_limit(set, base, DEFAULT_STATE_LIMIT)
}

/// As [`build_minimal_automaton`], failing with `StateLimitExceeded` once more
/// than `limit` states are discovered.
pub fn build_minimal_automaton_with_limit(set: &UpSet, base: u32, limit: usize) -> Result<Dfa> {
    if base < 2 {
        return Err(Error::BaseTooSmall(base));
    }
    let b = base as usize;
    let mut index: HashMap<UpSet, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut finals = Vec::new();
    let mut delta: Vec<u32> = Vec::new();
    index.insert(set.clone(), 0);
    finals.push(set.contains(0));
    queue.push_back((0u32, set.clone()));
    while let Some((id, s)) = queue.pop_front() {
        delta.resize(delta.len().max((id as usize + 1) * b), 0);
        for a in 0..base {
            let t = s.delta(a, base)?;
            let next = match index.get(&t) {
                Some(&k) => k,
                None => {
                    let k = finals.len() as u32;
                    if finals.len() >= limit {
                        return Err(Error::StateLimitExceeded(limit));
                    }
                    finals.push(t.contains(0));
                    index.insert(t.clone(), k);
                    queue.push_back((k, t));
                    k
                }
            };
            delta[id as usize * b + a as usize] = next;
        }
    }
    Ok(Dfa::from_raw(base, 0, finals, delta))
}

/// `(e - a) * base^-1 mod p`.
pub fn h_p(e: u64, digit: u32, p: u64, base: u32) -> Result<u64> {
    if p == 0 || gcd(p, base as u64) != 1 {
        return Err(Error::NotCoprime(p));
    }
    let inv = inverse_mod(base as u64 % p, p).ok_or(Error::NotCoprime(p))?;
    Ok(mul_mod((e % p + p - digit as u64 % p) % p, inv, p))
}

/// Minimal automaton of `R + pN` for `p` coprime with the base, built on
/// `|R|`-element subsets of `Z/pZ` moved by `h_p`.
pub fn build_atomic_explicit(p: u64, remainders: &[u64], base: u32) -> Result<Dfa> {
    if base < 2 {
        return Err(Error::BaseTooSmall(base));
    }
    if p == 0 || gcd(p, base as u64) != 1 {
        return Err(Error::NotCoprime(p));
    }
    let mut start: Vec<u32> = remainders.iter().map(|&r| r as u32).collect();
    start.sort_unstable();
    start.dedup();
    if remainders.iter().any(|&r| r >= p) || start.len() != remainders.len() {
        return Err(Error::NotCanonical(format!(
            "remainders must be distinct and below {p}"
        )));
    }
    let mut bits = vec![false; p as usize];
    for &r in &start {
        bits[r as usize] = true;
    }
    if minimal_period(&bits) as u64 != p {
        return Err(Error::NotCanonical(format!("period {p} is not minimal")));
    }

    let inv = inverse_mod(base as u64 % p, p).ok_or(Error::NotCoprime(p))?;
    // Image of residue e under digit a, tabulated per digit.
    let step: Vec<Vec<u32>> = (0..base as u64)
        .map(|a| {
            (0..p)
                .map(|e| mul_mod((e + p - a % p) % p, inv, p) as u32)
                .collect()
        })
        .collect();

    let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
    let mut states: Vec<Box<[u32]>> = Vec::new();
    let mut delta: Vec<u32> = Vec::new();
    let start: Box<[u32]> = start.into();
    index.insert(start.clone(), 0);
    states.push(start);
    let mut head = 0;
    let mut image = Vec::new();
    while head < states.len() {
        for column in &step {
            image.clear();
            image.extend(states[head].iter().map(|&e| column[e as usize]));
            image.sort_unstable();
            let next = match index.get(image.as_slice()) {
                Some(&k) => k,
                None => {
                    let k = states.len() as u32;
                    let key: Box<[u32]> = image.as_slice().into();
                    index.insert(key.clone(), k);
                    states.push(key);
                    k
                }
            };
            delta.push(next);
        }
        head += 1;
    }
    let finals = states.iter().map(|s| s.first() == Some(&0)).collect();
    Ok(Dfa::from_raw(base, 0, finals, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::isomorphic;
    use crate::minimize::minimize;
    use crate::numeration::representation;
    use crate::scc::condensation;

    fn up(p: u64, r: &[u64], i: &[u64]) -> UpSet {
        UpSet::new(p, r.iter().copied(), i.iter().copied()).unwrap()
    }

    #[test]
    fn h5_table() {
        let expected = [(0, 0, 2), (1, 3, 0), (2, 1, 3), (3, 4, 1), (4, 2, 4)];
        for (e, zero, one) in expected {
            assert_eq!(h_p(e, 0, 5, 2).unwrap(), zero);
            assert_eq!(h_p(e, 1, 5, 2).unwrap(), one);
        }
        for a in 0..7 {
            assert_eq!(h_p(a, a as u32, 7, 3).unwrap(), 0);
        }
        assert_eq!(h_p(1, 0, 4, 2), Err(Error::NotCoprime(4)));
    }

    #[test]
    fn naturals_have_one_state() {
        let dfa = build_minimal_automaton(&UpSet::naturals(), 3).unwrap();
        assert_eq!(dfa.state_count(), 1);
        assert!(dfa.is_final(0));
        let dfa = build_atomic_explicit(1, &[0], 2).unwrap();
        assert_eq!(dfa.state_count(), 1);
        assert!(dfa.is_final(0));
    }

    #[test]
    fn five_periodic_set_has_one_state_per_missing_residue() {
        let s = up(5, &[0, 1, 2, 4], &[]);
        let dfa = build_minimal_automaton(&s, 2).unwrap();
        // States are 4-element subsets of Z/5Z, so at most 5 of them.
        assert_eq!(dfa.state_count(), 5);
        assert!(dfa.is_group_automaton().unwrap());
        let explicit = build_atomic_explicit(5, &[0, 1, 2, 4], 2).unwrap();
        assert!(isomorphic(&dfa, &explicit).unwrap());
        assert_eq!(condensation(&dfa).len(), 1);
    }

    #[test]
    fn explicit_construction_of_two_residues() {
        let dfa = build_minimal_automaton(&up(5, &[0, 1], &[]), 2).unwrap();
        let explicit = build_atomic_explicit(5, &[0, 1], 2).unwrap();
        assert_eq!(explicit.state_count(), dfa.state_count());
        assert!(isomorphic(&dfa, &explicit).unwrap());
    }

    #[test]
    fn explicit_construction_errors() {
        assert_eq!(build_atomic_explicit(4, &[1], 2), Err(Error::NotCoprime(4)));
        assert!(matches!(
            build_atomic_explicit(3, &[0, 1, 2], 2),
            Err(Error::NotCanonical(_))
        ));
        assert!(matches!(
            build_atomic_explicit(3, &[3], 2),
            Err(Error::NotCanonical(_))
        ));
    }

    #[test]
    fn single_residue_orbit_covers_all_residues() {
        for p in [3u64, 7, 11, 1003] {
            assert_eq!(
                build_atomic_explicit(p, &[0], 2).unwrap().state_count(),
                p as usize
            );
        }
    }

    #[test]
    fn example_set_matches_membership() {
        let s = up(4, &[0, 1], &[1, 6]);
        let dfa = build_minimal_automaton(&s, 2).unwrap();
        for n in 0..=200 {
            assert_eq!(dfa.accepts(&representation(n, 2)), s.contains(n), "n = {n}");
        }
        assert!(isomorphic(&dfa, &minimize(&dfa)).unwrap());
        assert_eq!(minimize(&dfa).state_count(), dfa.state_count());
    }

    #[test]
    fn state_limit_is_enforced() {
        let s = up(5, &[0, 1, 2, 4], &[]);
        assert_eq!(
            build_minimal_automaton_with_limit(&s, 2, 4),
            Err(Error::StateLimitExceeded(4))
        );
    }
}
