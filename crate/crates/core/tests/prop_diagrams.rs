mod common;

use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twobridge::diagrams::{synthetic_rings, AnnularDiagram};
use twobridge::rational::Rational;
use twobridge::selftest::{gen, mutate, positive_certificates, props, Subject};

fn rings() -> &'static [(Rational, AnnularDiagram)] {
    static RINGS: OnceLock<Vec<(Rational, AnnularDiagram)>> = OnceLock::new();
    RINGS.get_or_init(|| {
        [q(5, 12), q(7, 17), q(9, 22)]
            .into_iter()
            .flat_map(|r| synthetic_rings(r, 40).unwrap().into_iter().map(move |d| (r, d)))
            .collect()
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn mutation_kill(seed in any::<u64>(), which in 0usize..2) {
        let c = &positive_certificates().unwrap()[which];
        let m = mutate(&Subject::Diagram(c.clone()), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(m.rejected, "accepted after: {}", m.description);
    }

    #[test]
    fn json_round_trip(which in 0usize..2) { check!(props::json_round_trip(&positive_certificates().unwrap()[which])); }

    #[test]
    fn mixing_law(which in 0usize..2) { check!(props::mixing_law(&positive_certificates().unwrap()[which])); }

    #[test]
    fn bookkeeping(seed in any::<u64>(), k in 0usize..4) {
        let r = [q(1, 3), q(2, 5), q(3, 8), q(5, 12)][k];
        check!(props::bookkeeping(&gen::random_ring(&mut ChaCha8Rng::seed_from_u64(seed), r)));
    }

    #[test]
    fn reglue_soundness(seed in any::<u64>(), k in 0usize..3) {
        let r = [q(2, 5), q(3, 7), q(5, 12)][k];
        let d = gen::random_ring(&mut ChaCha8Rng::seed_from_u64(seed), r);
        check!(props::reglue_soundness(&d));
    }

    #[test]
    fn t_identities(i in any::<prop::sample::Index>()) {
        let (r, d) = &rings()[i.index(rings().len())];
        check!(props::t_identities(d, *r));
    }
}
