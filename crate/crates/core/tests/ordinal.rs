//! Cantor–Bendixson derivatives on concrete spaces and signature arithmetic.

mod common;

use common::{ordinal_profile, product_profile};
use profscope::ordinal::{concrete_of, signature_of};
use profscope::{ConcreteSpace, OrdinalSignature};
use proptest::prelude::*;

/// Spaces of height at most 5 built from points, sums of up to 5 parts and
/// sequence limits.
fn space() -> impl Strategy<Value = ConcreteSpace> {
    let leaf = Just(ConcreteSpace::Point);
    leaf.prop_recursive(4, 40, 5, |inner| {
        prop_oneof![
            inner.clone().prop_map(ConcreteSpace::seq_lim),
            proptest::collection::vec(inner, 1..=5).prop_map(|v| ConcreteSpace::sum(v).unwrap()),
        ]
    })
}

/// Sub-sums of `x`: each summand kept or dropped.
fn sub_sums(x: &ConcreteSpace, mask: u32) -> Option<ConcreteSpace> {
    let parts: Vec<ConcreteSpace> = x
        .summands()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 32) & 1 == 1)
        .map(|(_, p)| p)
        .collect();
    if parts.is_empty() {
        None
    } else {
        Some(ConcreteSpace::sum(parts).unwrap().normalize())
    }
}

fn embeds(small: &Option<ConcreteSpace>, big: &Option<ConcreteSpace>) -> bool {
    match (small, big) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a.embeds_as_clopen(b),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derivative_is_monotone_on_clopen_pieces(x in space(), mask in any::<u32>(), k in 0u32..6) {
        if let Some(y) = sub_sums(&x, mask) {
            prop_assert!(y.embeds_as_clopen(&x));
            prop_assert!(embeds(&y.derivative_n(k), &x.derivative_n(k)));
        }
    }

    #[test]
    fn iterated_derivatives_compose(x in space(), k in 0u32..6, m in 0u32..6) {
        let stepwise = x.derivative_n(k).and_then(|y| y.derivative_n(m));
        prop_assert_eq!(stepwise.map(|s| s.normalize()), x.derivative_n(k + m).map(|s| s.normalize()));
    }

    #[test]
    fn derivative_of_a_summand_is_its_trace(parts in proptest::collection::vec(space(), 1..=5), k in 0u32..6) {
        let whole = ConcreteSpace::sum(parts.clone()).unwrap();
        let whole_d = whole.derivative_n(k);
        let mut traces: Vec<ConcreteSpace> = Vec::new();
        for p in &parts {
            let d = p.derivative_n(k);
            prop_assert!(embeds(&d, &whole_d));
            if let Some(d) = d {
                traces.extend(d.summands());
            }
        }
        traces.sort();
        let mut expected = whole_d.map(|w| w.summands()).unwrap_or_default();
        expected.sort();
        prop_assert_eq!(traces, expected);
    }

    #[test]
    fn clopen_pieces_are_no_taller(x in space(), mask in any::<u32>()) {
        if let Some(y) = sub_sums(&x, mask) {
            prop_assert!(y.height() <= x.height());
        }
    }

    #[test]
    fn height_and_top_count_are_the_signature(x in space()) {
        let sig = signature_of(&x);
        let profile = x.rank_profile();
        prop_assert_eq!(profile.len() as u32, x.height());
        prop_assert_eq!(sig.exponent() + 1, x.height());
        prop_assert_eq!(*profile.last().unwrap(), Some(sig.coefficient()));
        prop_assert!(profile[..profile.len() - 1].iter().all(|c| c.is_none()));
        prop_assert_eq!(x.is_finite(), sig.exponent() == 0);
    }

    #[test]
    fn printer_and_parser_are_inverse(h in 0u32..8, n in 1u64..50) {
        let sig = OrdinalSignature::new(h, n).unwrap();
        let text = sig.to_string();
        prop_assert_eq!(text.parse::<OrdinalSignature>().unwrap(), sig.clone());
        if h == 0 {
            prop_assert_eq!(text, format!("w^0*{n}"));
        } else {
            prop_assert_eq!(text, format!("w^{h}*{n}+1"));
        }
    }
}

#[test]
fn signature_round_trip() {
    for h in 0..=5 {
        for n in 1..=5 {
            let sig = OrdinalSignature::new(h, n).unwrap();
            let x = concrete_of(&sig).unwrap();
            assert_eq!(signature_of(&x), sig);
            assert_eq!(x.rank_profile(), ordinal_profile(h, n));
        }
    }
}

#[test]
fn product_matches_rank_pair_enumeration() {
    for ha in 0..=3 {
        for hb in 0..=3 - ha {
            for na in 1..=3 {
                for nb in 1..=3 {
                    let a = OrdinalSignature::new(ha, na).unwrap();
                    let bb = OrdinalSignature::new(hb, nb).unwrap();
                    let pa = concrete_of(&a).unwrap().rank_profile();
                    let pb = concrete_of(&bb).unwrap().rank_profile();
                    let pp = product_profile(&pa, &pb);
                    let prod = a.product(&bb).unwrap();
                    assert_eq!(pp.len() as u32, prod.exponent() + 1);
                    assert_eq!(*pp.last().unwrap(), Some(prod.coefficient()));
                    assert_eq!(pp, ordinal_profile(prod.exponent(), prod.coefficient()));
                }
            }
        }
    }
    let w1 = OrdinalSignature::new(1, 1).unwrap();
    let w2: OrdinalSignature = "w^2*1+1".parse().unwrap();
    assert!(w1.product(&w1).unwrap().homeomorphic(&w2).unwrap());
}

#[test]
fn malformed_signatures_are_rejected() {
    for bad in ["", "w^0*3+1", "w^1*2", "w^1*0+1", "w^1*2+w^2*1+1", "x^1*1+1", "w^a*1+1", "1"] {
        assert!(bad.parse::<OrdinalSignature>().is_err(), "{bad:?}");
    }
    assert!(OrdinalSignature::new(2, 0).is_err());
    let multi: OrdinalSignature = "w^2*3+w^1*1+1".parse().unwrap();
    assert_eq!(multi.terms(), &[(2, 3), (1, 1)]);
    assert_eq!(multi.to_string(), "w^2*3+w^1*1+1");
    assert!(multi.product(&multi).is_err());
}

#[test]
fn sums_of_nothing_are_rejected() {
    assert!(ConcreteSpace::sum(vec![]).is_err());
    assert_eq!(ConcreteSpace::Point.derivative(), None);
}
