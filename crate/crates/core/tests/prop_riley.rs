mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twobridge::riley::nonconjugacy_certificate;
use twobridge::selftest::{mutate, props, Subject};
use twobridge::slopes::in_domain;
use twobridge::words::{Base, Letter};

fn word(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((any::<bool>(), any::<bool>()).prop_map(|(a, pos)| Letter::new(if a { Base::A } else { Base::B }, pos)), 1..=max)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn trace_invariance(w in word(12), g in word(4)) { check!(props::trace_invariance(&w, &g)); }

    #[test]
    fn trace_mutation_kill(seed in any::<u64>()) {
        let c = nonconjugacy_certificate(q(5, 12), q(2, 5), q(3, 7)).unwrap().unwrap();
        let m = mutate(&Subject::Trace(c), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(m.rejected, "accepted after: {}", m.description);
    }

    #[test]
    fn coherence(p in 3u64..=6, s in slope(60)) {
        let r = q(1, p);
        prop_assume!(in_domain(r, s).unwrap());
        let d = (s.num() * p).checked_sub(s.den());
        prop_assume!(d.is_some_and(|d| d > s.num()));
        let d = d.unwrap();
        let t = q(s.num(), d);
        prop_assume!(t.den() == d);
        check!(props::coherence(r, s, t));
    }
}

proptest! {
    // Tens of exact Riley polynomials and their numeric roots, not thousands.
    #![proptest_config(ProptestConfig { cases: 50, ..config() })]

    #[test]
    fn homomorphism(r in slope(60)) { check!(props::homomorphism(r)); }

    #[test]
    fn mirror_degree(r in slope(40)) { check!(props::mirror_degree(r)); }
}
