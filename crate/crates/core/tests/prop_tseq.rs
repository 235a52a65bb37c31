mod common;

use common::*;
use proptest::prelude::*;
use twobridge::selftest::props;
use twobridge::tseq::{TSpec, TType};

proptest! {
    #![proptest_config(config())]

    #[test]
    fn inverse_law(terms in prop::collection::vec(1u64..=6, 1..=10), m in 2u64..=6, one in any::<bool>()) {
        let spec = TSpec::new(m, if one { TType::Type1 } else { TType::Type2 }).unwrap();
        check!(props::inverse_law(&terms, spec));
    }

    #[test]
    fn reduction_identity_slope(r in general_slope()) { check!(props::reduction_identity_slope(r)); }

    #[test]
    fn reduction_identity_loop((ty, s) in reduction_type().prop_flat_map(|ty| (Just(ty), shaped_loop(ty, 300)))) {
        check!(props::reduction_identity_loop(s, ty));
    }
}
