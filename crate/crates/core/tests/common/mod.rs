#![allow(dead_code)]

use defobs::alexander::TorusKnot;
use defobs::manifold::{AtomKind, BrieskornParams};
use defobs::{Atom, Manifold, Orientation};
use proptest::prelude::*;

/// Atoms that carry correction-term data.
pub fn d_atoms() -> Vec<Atom> {
    let mut kinds = vec![
        AtomKind::Named("P".into()),
        AtomKind::Named("O".into()),
        AtomKind::Brieskorn(BrieskornParams::new(2, 3, 5).unwrap()),
        AtomKind::Surgery2(TorusKnot::unknot()),
        AtomKind::Surgery2(TorusKnot::new(3, 4).unwrap()),
        AtomKind::Surgery2(TorusKnot::new(3, 5).unwrap()),
    ];
    for q in [3, 5, 7, 9] {
        kinds.push(AtomKind::Surgery2(TorusKnot::new(2, q).unwrap()));
    }
    kinds
        .into_iter()
        .flat_map(|k| {
            [Orientation::Positive, Orientation::Negative]
                .into_iter()
                .map(move |o| Atom::new(k.clone(), o))
        })
        .collect()
}

/// Connected sums of up to `max_terms` atoms with multiplicities `1..=max_mult`.
pub fn manifold_strategy(max_terms: usize, max_mult: u64) -> impl Strategy<Value = Manifold> {
    let atoms = d_atoms();
    prop::collection::vec((0..atoms.len(), 1..=max_mult), 0..=max_terms)
        .prop_map(move |v| Manifold::from_summands(v.into_iter().map(|(i, m)| (atoms[i].clone(), m))))
}

/// Pairwise coprime `2 ≤ p < q < r` with `pqr ≤ bound`.
pub fn brieskorn_triples(bound: i64) -> Vec<BrieskornParams> {
    let mut out = Vec::new();
    for p in 2..=bound {
        for q in p + 1..=bound {
            for r in q + 1..=bound {
                if p * q * r > bound {
                    break;
                }
                if let Ok(b) = BrieskornParams::new(p, q, r) {
                    out.push(b);
                }
            }
        }
    }
    out
}

/// Coprime `2 ≤ p < q` with `pq ≤ bound`.
pub fn torus_knots(bound: i64) -> Vec<TorusKnot> {
    let mut out = Vec::new();
    for p in 2..=bound {
        for q in p + 1..=bound / p {
            if let Ok(k) = TorusKnot::new(p, q) {
                out.push(k);
            }
        }
    }
    out
}
