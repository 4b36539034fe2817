mod common;

use common::{three_circuit_example, up};
use periodica::decision::{build_embedding, check_conditions, Condition, Conditions, Failure};
use periodica::oracle::brute_decide;
use periodica::{
    build_minimal_automaton, condensation, decide, is_pascal_quotient, minimize, Condensation,
    DecisionResult, Dfa, Error, SccType, UpSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn canonical_set() -> impl Strategy<Value = UpSet> {
    (1u64..=60)
        .prop_flat_map(|p| (Just(p), prop::collection::vec(any::<bool>(), p as usize)))
        .prop_filter_map("non-minimal period", |(p, bits)| {
            let r: Vec<u64> = (0..p).filter(|&i| bits[i as usize]).collect();
            UpSet::new(p, r, []).ok()
        })
        .prop_flat_map(|s| (Just(s), prop::collection::btree_set(0u64..40, 0..=6)))
        .prop_map(|(s, i)| UpSet::new(s.period(), s.remainders().collect::<Vec<_>>(), i).unwrap())
}

/// Re-checks a failure against the named condition on its own.
fn witness_violates(dfa: &Dfa, f: &Failure) -> bool {
    let cond = condensation(dfa);
    let c = cond.scc_of(f.witness);
    match f.condition {
        Condition::UP0 => dfa.is_final(f.witness) != dfa.is_final(dfa.step(f.witness, 0)),
        Condition::UP2 => {
            cond.scc_type(c) == SccType::TypeOne
                && component(dfa, &cond, c).is_none_or(|sub| is_pascal_quotient(&sub).is_err())
        }
        Condition::UP3 => {
            cond.scc_type(c) == SccType::TypeTwo
                && (cond.descendants(c).len() != 1
                    || cond.scc_type(cond.descendants(c)[0]) != SccType::TypeOne)
        }
        Condition::UP4 => {
            cond.scc_type(c) == SccType::TypeTwo
                && build_embedding(dfa, &cond, c, cond.descendants(c)[0]).is_none()
        }
        Condition::UP1 => false,
    }
}

fn component(dfa: &Dfa, cond: &Condensation, c: usize) -> Option<Dfa> {
    let mut states = cond.members(c).to_vec();
    states.sort_unstable();
    dfa.restrict(&states)
}

fn mutate(dfa: &Dfa, rng: &mut ChaCha8Rng) -> Dfa {
    let b = dfa.base();
    let n = dfa.state_count();
    let mut table: Vec<usize> = dfa.transitions().map(|(_, _, t)| t).collect();
    let slot = rng.gen_range(0..table.len());
    table[slot] = (table[slot] + rng.gen_range(1..n.max(2))) % n;
    let finals = (0..n).map(|q| dfa.is_final(q)).collect();
    Dfa::from_table(b, dfa.initial(), finals, &table).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minimal_automata_of_periodic_sets_are_recovered(s in canonical_set(), base in 2u32..=5) {
        let dfa = build_minimal_automaton(&s, base).unwrap();
        prop_assert_eq!(decide(&dfa).unwrap(), DecisionResult::UltimatelyPeriodic(s));
    }

    #[test]
    fn verdicts_agree_with_oracle_after_mutation(s in canonical_set(), base in 2u32..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dfa = build_minimal_automaton(&s, base).unwrap();
        prop_assume!(dfa.state_count() > 1);
        let mutated = minimize(&mutate(&dfa, &mut rng));
        let oracle = brute_decide(&mutated, 256, 128).unwrap();
        let verdict = match decide(&mutated) {
            Ok(v) => v,
            Err(Error::ExtractionCapExceeded(_)) => {
                prop_assert!(oracle.is_none());
                return Ok(());
            }
            Err(e) => panic!("{e}"),
        };
        if let Some(found) = oracle {
            prop_assert_eq!(&verdict, &DecisionResult::UltimatelyPeriodic(found));
        }
        match &verdict {
            DecisionResult::UltimatelyPeriodic(x) => {
                let rebuilt = build_minimal_automaton(x, base).unwrap();
                prop_assert!(periodica::isomorphic(&rebuilt, &mutated).unwrap());
            }
            DecisionResult::NotUltimatelyPeriodic(f) => {
                prop_assert!(witness_violates(&mutated, f), "{:?}", f);
            }
        }
    }
}

#[test]
fn three_circuit_example_has_expected_shape() {
    let s = three_circuit_example();
    let dfa = build_minimal_automaton(&s, 2).unwrap();
    let cond = condensation(&dfa);
    let ones: Vec<usize> = cond.sccs_of_type(SccType::TypeOne).collect();
    let twos: Vec<usize> = cond.sccs_of_type(SccType::TypeTwo).collect();
    let mut one_sizes: Vec<usize> = ones.iter().map(|&c| cond.members(c).len()).collect();
    let mut two_sizes: Vec<usize> = twos.iter().map(|&c| cond.members(c).len()).collect();
    one_sizes.sort_unstable();
    two_sizes.sort_unstable();
    assert_eq!(one_sizes, vec![1, 3, 5]);
    assert_eq!(two_sizes, vec![1, 1, 2]);

    let Conditions::Satisfied(atomic) = check_conditions(&dfa).unwrap() else {
        panic!("conditions should hold");
    };
    let mut periods: Vec<u64> = atomic.iter().map(|a| a.period).collect();
    periods.sort_unstable();
    assert_eq!(periods, vec![1, 3, 5]);

    for &c in &twos {
        let d = cond.descendants(c)[0];
        let e = build_embedding(&dfa, &cond, c, d).unwrap();
        // Each circuit state X' maps to the state X whose set differs from it
        // only at 0, so every digit other than 0 leads to the same place.
        for &(x, fx) in e.pairs() {
            assert_eq!(cond.scc_of(fx), d);
            assert_ne!(dfa.is_final(x), dfa.is_final(fx));
            assert_eq!(dfa.step(x, 1), dfa.step(fx, 1));
        }
    }
    assert_eq!(decide(&dfa).unwrap(), DecisionResult::UltimatelyPeriodic(s));
}

#[test]
fn failures_name_a_violating_witness() {
    let samples = [
        up(3, &[0], &[0]),
        up(5, &[0, 1, 2, 4], &[0, 3]),
        up(12, &[1, 5, 6], &[2, 9]),
        common::interleave(&up(3, &[1], &[]), &up(7, &[0, 2], &[4])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut negatives = 0;
    for s in &samples {
        let dfa = build_minimal_automaton(s, 2).unwrap();
        for _ in 0..50 {
            let m = minimize(&mutate(&dfa, &mut rng));
            if let DecisionResult::NotUltimatelyPeriodic(f) = decide(&m).unwrap() {
                negatives += 1;
                assert!(witness_violates(&m, &f), "{f:?}");
            }
        }
    }
    assert!(negatives > 20, "only {negatives} rejected mutants");
}
