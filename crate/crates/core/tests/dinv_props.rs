mod common;

use defobs::dinv::{
    manifold_d_table, max_correction_term, negative_definite_obstruction, spin_c_count, NegativeVerdict,
};
use defobs::{Manifold, Rational, Registry};
use proptest::prelude::*;

fn small(reg: &Registry, m: &Manifold) -> bool {
    matches!(spin_c_count(reg, m), Ok(Some(n)) if n <= 256)
}

proptest! {
    #[test]
    fn reversal_negates_tables(m in common::manifold_strategy(3, 2)) {
        let reg = Registry::default();
        prop_assume!(small(&reg, &m));
        let t = manifold_d_table(&reg, &m).unwrap();
        let r = manifold_d_table(&reg, &m.reversed()).unwrap();
        let mut neg: Vec<Rational> = t.multiset().into_iter().map(|d| -d).collect();
        neg.sort();
        prop_assert_eq!(r.multiset(), neg);
        prop_assert_eq!(max_correction_term(&reg, &m.reversed()).unwrap(), -t.min());
    }

    #[test]
    fn max_is_additive(a in common::manifold_strategy(3, 3), b in common::manifold_strategy(3, 3)) {
        let reg = Registry::default();
        let sum = a.connected_sum(&b);
        prop_assert_eq!(
            max_correction_term(&reg, &sum).unwrap(),
            max_correction_term(&reg, &a).unwrap() + max_correction_term(&reg, &b).unwrap()
        );
    }

    #[test]
    fn max_agrees_with_full_table(m in common::manifold_strategy(3, 2)) {
        let reg = Registry::default();
        prop_assume!(small(&reg, &m));
        let table = manifold_d_table(&reg, &m).unwrap();
        prop_assert_eq!(Some(table.len() as u128), spin_c_count(&reg, &m).unwrap());
        prop_assert_eq!(max_correction_term(&reg, &m).unwrap(), table.max());
    }

    #[test]
    fn descriptor_round_trip(m in common::manifold_strategy(4, 5)) {
        let text = m.to_string();
        prop_assert_eq!(defobs::parse_descriptor(&text).unwrap(), m);
    }
}

#[test]
fn family_law() {
    let reg = Registry::default();
    for m in 1..=6i64 {
        for k in 1..=60i64 {
            let man = Manifold::family(m, k);
            let max = max_correction_term(&reg, &man).unwrap();
            assert_eq!(max, Rational::from_integer(2 * m) - Rational::new(k, 4), "({m},{k})");
            let report = negative_definite_obstruction(&reg, &man).unwrap();
            let obstructed = report.verdict == NegativeVerdict::Obstructed;
            assert_eq!(obstructed, k > 8 * m, "({m},{k})");
        }
    }
}

#[test]
fn general_sums_use_zero_threshold() {
    let reg = Registry::default();
    let m = defobs::parse_descriptor("P # -9*O # surgery(T(2,5),2)").unwrap();
    let r = negative_definite_obstruction(&reg, &m).unwrap();
    assert_eq!(r.threshold, Rational::zero());
    assert!(r.family.is_none());
}
