//! Inputs shared by the benchmarks in `benches/`.

use periodica::{build_atomic_explicit, build_minimal_automaton, Dfa, UpSet};

/// The automaton of `{0} + pN` in base 2, with exactly `p` states.
pub fn atomic(p: u64) -> Dfa {
    build_atomic_explicit(p, &[0], 2).expect("p is odd")
}

/// The minimal automaton of `{0, 1} + pN` with 2 and 5 toggled, which has
/// a preperiodic part. Periods `3 * 2^e` keep it small while extraction
/// still has to sample a full period.
pub fn mixed(p: u64) -> Dfa {
    let set = UpSet::new(p, [0, 1], [2, 5]).expect("canonical for p > 5");
    build_minimal_automaton(&set, 2).expect("small")
}

/// `dfa` with every state duplicated, so minimization has work to do.
pub fn doubled(dfa: &Dfa) -> Dfa {
    let n = dfa.state_count();
    let b = dfa.base();
    let mut table = vec![0; 2 * n * b as usize];
    for (q, a, t) in dfa.transitions() {
        table[q * b as usize + a as usize] = t + n;
        table[(q + n) * b as usize + a as usize] = t;
    }
    let finals = (0..2 * n).map(|q| dfa.is_final(q % n)).collect();
    Dfa::from_table(b, dfa.initial(), finals, &table).expect("complete")
}
