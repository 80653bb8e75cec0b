use std::sync::Arc;

use proptest::prelude::*;

use integrabilis::parse::{parse_constant, parse_k, parse_l};
use integrabilis::serial::{parse_series, series_json};
use integrabilis_core::multipoly::mpoly_from_ints;
use integrabilis_core::scalars::{rat, rat_frac};
use integrabilis_core::{CycloField, CycloNumber, ExtDescriptor, ExtElem, MPoly, PSeries, RatFn};

fn field() -> Arc<CycloField> {
    CycloField::new(12).unwrap()
}

fn constant() -> impl Strategy<Value = CycloNumber> {
    prop::collection::vec((-30i64..=30, 1i64..=7), 4).prop_map(|cs| {
        let f = field();
        let coords = cs.into_iter().map(|(n, d)| rat_frac(n, d)).collect();
        f.from_poly(coords)
    })
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    (prop::collection::vec((-9i64..=9, 0u32..=3, 0u32..=3), 0..5), constant(), 0u32..=2, 0u32..=2).prop_map(
        |(ts, c, a, b)| {
            let f = field();
            let base = mpoly_from_ints(&f, &ts);
            let m = mpoly_from_ints(&f, &[(1, a, b)]).scale(&c);
            &base + &m
        },
    )
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (mpoly(), mpoly()).prop_filter_map("nonzero denominator", |(n, d)| RatFn::new(n, d).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constants_round_trip(c in constant()) {
        prop_assert_eq!(parse_constant(&c.to_string(), &field()).unwrap(), c);
    }

    #[test]
    fn ratfn_round_trip(r in ratfn()) {
        prop_assert_eq!(parse_k(&r.to_string(), &field()).unwrap(), r);
    }

    #[test]
    fn ext_round_trip(coords in prop::collection::vec(ratfn(), 3), n in 2u32..=3) {
        let f = field();
        let k = RatFn::from_poly(mpoly_from_ints(&f, &[(1, 1, 0), (-2, 0, 2)]));
        let d = ExtDescriptor::with_default_root(n, k).unwrap();
        let e = ExtElem::new(&d, coords.into_iter().take(n as usize).collect()).unwrap();
        prop_assert_eq!(parse_l(&e.to_string(), &d).unwrap(), e);
    }

    #[test]
    fn series_round_trip(
        coeffs in prop::collection::vec(ratfn(), 1..4),
        ram in 1u32..=3,
        keys in prop::collection::vec(-9i64..=4, 4),
    ) {
        let f = field();
        let terms = coeffs.into_iter().zip(keys).map(|(c, k)| (rat_frac(k, ram as i64), c)).collect();
        let s = PSeries::new(ram, terms, &rat(-3), RatFn::zero(&f)).unwrap();
        let text = series_json(&s).to_string();
        let back = parse_series(&text, &f, &rat(0)).unwrap();
        prop_assert_eq!(series_json(&back).to_string(), text);
        prop_assert!(back.agrees_with(&s));
        prop_assert_eq!(back.bound(), s.bound());
    }
}
