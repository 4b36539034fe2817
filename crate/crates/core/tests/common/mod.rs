#![allow(dead_code)]

use periodica::numeration::minimal_period;
use periodica::{canonicalize, CharacteristicProfile, UpSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn up(p: u64, r: &[u64], i: &[u64]) -> UpSet {
    UpSet::new(p, r.iter().copied(), i.iter().copied()).unwrap()
}

fn is_canonical(p: u64, r: &[u64]) -> bool {
    let mut bits = vec![false; p as usize];
    for &x in r {
        bits[x as usize] = true;
    }
    minimal_period(&bits) as u64 == p
}

/// Remainder sets with minimal period `p`: all of them for `p <= 5`, else a
/// seeded sample plus a few fixed shapes.
pub fn remainder_sets(p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    if p <= 5 {
        return (0u32..1 << p)
            .map(|mask| (0..p).filter(|&x| mask >> x & 1 == 1).collect::<Vec<_>>())
            .filter(|r| is_canonical(p, r))
            .collect();
    }
    let mut out: Vec<Vec<u64>> = vec![vec![0], vec![p - 1], (0..p - 1).collect()];
    while out.len() < 15 {
        let r: Vec<u64> = (0..p).filter(|_| rng.gen_bool(0.5)).collect();
        if is_canonical(p, &r) && !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

fn mismatch_sets(rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let mut out = vec![vec![], vec![0]];
    let pool: Vec<u64> = (0..=12).collect();
    while out.len() < 5 {
        let k = rng.gen_range(1..=3);
        let mut i: Vec<u64> = pool.choose_multiple(rng, k).copied().collect();
        i.sort_unstable();
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

/// Canonical sets with period at most 24 and at most 3 mismatches below 13,
/// paired with the bases 2 and 3.
pub fn corpus() -> Vec<(UpSet, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for p in 1..=24 {
        for r in remainder_sets(p, &mut rng) {
            for i in mismatch_sets(&mut rng) {
                let s = up(p, &r, &i);
                out.push((s.clone(), 2));
                out.push((s, 3));
            }
        }
    }
    out
}

/// `{2n : n in even} u {2n + 1 : n in odd}`, canonicalized.
pub fn interleave(even: &UpSet, odd: &UpSet) -> UpSet {
    let p = 2 * even.period() * odd.period();
    let m = 2 * (even.preperiod() + odd.preperiod()) as usize + 2;
    let profile = CharacteristicProfile::sample(m, p as usize, |n| {
        if n % 2 == 0 {
            even.contains(n / 2)
        } else {
            odd.contains(n / 2)
        }
    })
    .unwrap();
    canonicalize(&profile)
}

/// A base-2 set whose minimal automaton has three atomic components, for
/// `{1,2}+3N`, `{0,1,2,4}+5N` and the empty set, and three 0-circuits
/// of sizes 2, 1 and 1 embedded in them.
pub fn three_circuit_example() -> UpSet {
    let d = up(3, &[1, 2], &[0]);
    let t1 = interleave(&d, &UpSet::finite([0]).unwrap());
    let t2 = interleave(&t1, &up(5, &[0, 1, 2, 4], &[]));
    interleave(&up(3, &[0, 2], &[0]), &t2)
}

/// All words over `0..base` of length at most `max_len`.
pub fn words(base: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..base {
                let mut v: Vec<u32> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
