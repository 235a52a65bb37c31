mod common;

use common::*;
use proptest::prelude::*;
use twobridge::selftest::props;
use twobridge::slopes::{classify_slope, ReductionType};

proptest! {
    #![proptest_config(config())]

    #[test]
    fn cf_round_trip(r in slope(1000)) { check!(props::cf_round_trip(r)); }

    #[test]
    fn farey_law(r in slope(1000)) { check!(props::farey_law(r)); }

    #[test]
    fn taxonomy(r in slope(1000)) { check!(props::taxonomy(r)); }

    #[test]
    fn mobius_coherence(r in general_slope()) { check!(props::mobius_coherence(r)); }

    #[test]
    fn mirror_farey(r in slope(1000)) { check!(props::mirror_farey(r)); }

    #[test]
    fn domain_transport((r, s) in general_slope().prop_flat_map(|r| {
        let m = match classify_slope(r).unwrap().reduction_type() { Some(ReductionType::A(m)) => m, _ => 2 };
        (Just(r), shaped_loop(ReductionType::A(m), 300))
    })) {
        check!(props::domain_transport(r, s));
    }
}
