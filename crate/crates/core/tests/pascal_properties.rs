mod common;

use periodica::arith::{gcd, multiplicative_order};
use periodica::numeration::{representation, value};
use periodica::pascal::{
    add_g_letter, build_pascal, build_quotient, is_pascal_quotient, pascal_state_id, GElem,
    PascalGroup,
};
use periodica::{isomorphic, minimize};
use proptest::prelude::*;

fn coprime_case() -> impl Strategy<Value = (u64, Vec<u64>, u32)> {
    (2u32..6, 1u64..30)
        .prop_filter("coprime", |&(b, p)| gcd(p, b as u64) == 1)
        .prop_flat_map(|(b, p)| {
            (
                Just(p),
                prop::collection::btree_set(0..p, 0..=p as usize),
                Just(b),
            )
        })
        .prop_map(|(p, r, b)| (p, r.into_iter().collect(), b))
}

fn word(base: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..base, 0..12)
}

proptest! {
    #[test]
    fn run_ends_at_value_and_length((p, r, b) in coprime_case(), seed in prop::collection::vec(0u32..64, 0..12)) {
        let u: Vec<u32> = seed.into_iter().map(|a| a % b).collect();
        let dfa = build_pascal(p, &r, b).unwrap();
        let psi = multiplicative_order(b as u64, p).unwrap();
        let end = dfa.run(&u).unwrap();
        let v = value(&u, b).unwrap();
        prop_assert_eq!(end, pascal_state_id(p, v % p, u.len() as u64 % psi));
        prop_assert_eq!(dfa.accepts(&u), r.contains(&(v % p)));
    }

    #[test]
    fn group_law_matches_runs((p, r, b) in coprime_case(), s in 0u64..1000, t in 0u64..1000, u in word(5)) {
        let u: Vec<u32> = u.into_iter().map(|a| a % b).collect();
        let dfa = build_pascal(p, &r, b).unwrap();
        let group = PascalGroup::new(p, b).unwrap();
        let start = GElem { s: s % p, t: t % group.psi() };
        let moved = group.op(start, GElem {
            s: value(&u, b).unwrap() % p,
            t: u.len() as u64 % group.psi(),
        });
        let q = dfa.run_from(pascal_state_id(p, start.s, start.t), &u).unwrap();
        prop_assert_eq!(q, pascal_state_id(p, moved.s, moved.t));
    }

    #[test]
    fn quotient_round_trip((p, r, b) in coprime_case()) {
        let min = minimize(&build_pascal(p, &r, b).unwrap());
        let params = is_pascal_quotient(&min).unwrap();
        let simplified = add_g_letter(&min).unwrap();
        prop_assert!(isomorphic(&build_quotient(&params, b).unwrap(), &simplified).unwrap());
        prop_assert_eq!(params.psi, multiplicative_order(b as u64, params.period).unwrap());
        prop_assert_eq!(params.period * params.k, min.state_count() as u64);

        // Every g-circuit has the same length.
        let n = simplified.state_count();
        for q in 0..n {
            let mut x = simplified.g(q);
            let mut len = 1;
            while x != q {
                x = simplified.g(x);
                len += 1;
            }
            prop_assert_eq!(len, params.period);
        }

        // The accepted language is R' + p'N for the recovered parameters.
        for n in 0..200u64 {
            let w = representation(n, b);
            let expected = params.remainders.contains(&(n % params.period));
            prop_assert_eq!(min.accepts(&w), expected);
            prop_assert_eq!(min.accepts(&w), r.contains(&(n % p)));
        }
    }
}

#[test]
fn short_words_are_accepted_by_value() {
    for (p, r) in [
        (3u64, vec![2u64]),
        (5, vec![0, 3]),
        (7, vec![1, 2, 4]),
        (9, vec![0, 4, 5]),
    ] {
        let dfa = build_pascal(p, &r, 2).unwrap();
        for w in common::words(2, 10) {
            let v = value(&w, 2).unwrap();
            assert_eq!(dfa.accepts(&w), r.contains(&(v % p)), "p={p} w={w:?}");
        }
    }
}
