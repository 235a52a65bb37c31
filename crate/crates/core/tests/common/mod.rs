#![allow(dead_code)]

use proptest::prelude::*;
use twobridge::rational::Rational;
use twobridge::slopes::{cf_eval, classify_slope, in_domain, reduce_loop_slope, ContFrac, ReductionType};

pub fn q(n: u64, d: u64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// Reduced `n/p` in `(0, 1)` with `p <= max_den`.
pub fn slope(max_den: u64) -> impl Strategy<Value = Rational> {
    (2..=max_den).prop_flat_map(|p| (1..p).prop_map(move |n| q(n, p))).prop_filter("reduced", |r| r.den() > 1)
}

fn from_cf(c: Vec<u64>) -> Option<Rational> {
    let mut c = c;
    if c.len() > 1 && *c.last().unwrap() == 1 {
        *c.last_mut().unwrap() = 2;
    }
    cf_eval(&ContFrac::new(c).ok()?).ok()
}

/// General slopes `r <= 1/2`: coefficients at most 5, length 3 to 6.
pub fn general_slope() -> impl Strategy<Value = Rational> {
    (2u64..=5, prop::collection::vec(1u64..=5, 2..=5))
        .prop_filter_map("general", |(m, tail)| {
            let r = from_cf([vec![m], tail].concat())?;
            classify_slope(r).ok()?.is_general().then_some(r)
        })
}

/// A loop slope of the CF shape matching `ty` with denominator at most `max_den`.
pub fn shaped_loop(ty: ReductionType, max_den: u64) -> impl Strategy<Value = Rational> {
    prop::collection::vec(1u64..=6, 1..=6).prop_filter_map("shaped", move |tail| {
        let c = match ty {
            ReductionType::A(m) => [vec![m, tail[0].max(2)], tail[1..].to_vec()].concat(),
            ReductionType::B(m) => [vec![m, 1, tail[0].max(2)], tail[1..].to_vec()].concat(),
        };
        let s = from_cf(c)?;
        (s.den() <= max_den && reduce_loop_slope(s, ty).is_ok()).then_some(s)
    })
}

pub fn reduction_type() -> impl Strategy<Value = ReductionType> {
    prop_oneof![(2u64..=5).prop_map(ReductionType::A), (2u64..=5).prop_map(ReductionType::B)]
}

/// `(r, s)` with `s` in the domain of `r`.
pub fn slope_and_loop(max_r: u64, max_s: u64) -> impl Strategy<Value = (Rational, Rational)> {
    (slope(max_r), slope(max_s)).prop_filter("in domain", |&(r, s)| in_domain(r, s).unwrap())
}

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, max_global_rejects: 1 << 20, ..ProptestConfig::default() }
}

/// Turns a property outcome into a proptest result, rejecting inputs outside its hypothesis.
#[macro_export]
macro_rules! check {
    ($e:expr) => {
        match $e {
            Ok(true) => {}
            Ok(false) => return Err(proptest::test_runner::TestCaseError::reject("outside hypothesis")),
            Err(msg) => return Err(proptest::test_runner::TestCaseError::fail(msg)),
        }
    };
}
