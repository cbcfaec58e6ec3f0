use defobs::ledger::reducible_counts;
use defobs::{hom_counts, FiniteAbelianGroup};

/// Every multiset of cyclic orders `≥ 2` (non-decreasing) with product ≤ `bound`.
fn presentations(bound: u64) -> Vec<Vec<u64>> {
    fn go(min: u64, budget: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        for d in min..=budget {
            prefix.push(d);
            go(d, budget / d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(2, bound, &mut Vec::new(), &mut out);
    out
}

/// Counts maps `G → ℤ/N` (N the exponent) that respect addition of each
/// generator at every element, and those landing in `{0, N/2}`.
fn brute_force_homs(g: &FiniteAbelianGroup) -> (u64, u64) {
    let factors = g.invariant_factors().to_vec();
    let n = factors.iter().copied().max().unwrap_or(1);
    let elements: Vec<Vec<u64>> = g.elements().collect();
    let eval = |images: &[u64], e: &[u64]| -> u64 { e.iter().zip(images).map(|(a, b)| a * b).sum::<u64>() % n };
    let rank = factors.len();
    let mut images = vec![0u64; rank];
    let (mut all, mut real) = (0, 0);
    loop {
        let is_hom = elements.iter().all(|x| {
            (0..rank).all(|i| {
                let mut y = x.clone();
                y[i] = (y[i] + 1) % factors[i];
                eval(&images, &y) == (eval(&images, x) + images[i]) % n
            })
        });
        if is_hom {
            all += 1;
            if elements.iter().all(|x| (2 * eval(&images, x)) % n == 0) {
                real += 1;
            }
        }
        // next assignment of generator images in (ℤ/N)^rank
        let mut i = 0;
        loop {
            if i == rank {
                return (all, real);
            }
            images[i] += 1;
            if images[i] < n {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn hom_counts_match_enumeration() {
    let mut seen = std::collections::BTreeSet::new();
    for orders in presentations(64) {
        let g = FiniteAbelianGroup::from_cyclic_orders(&orders).unwrap();
        assert_eq!(g.order(), orders.iter().product::<u64>());
        if !seen.insert(g.invariant_factors().to_vec()) {
            continue;
        }
        let expected = brute_force_homs(&g);
        assert_eq!(hom_counts(&g), expected, "{g}");
        let c = reducible_counts(&g);
        assert_eq!(c.central, expected.1);
        assert_eq!(c.central + 2 * c.abelian, g.order(), "{g}");
    }
    // 117 abelian groups of order at most 64 (including the trivial group)
    assert_eq!(seen.len(), 117);
}

#[test]
fn normal_form_is_presentation_independent() {
    let a = FiniteAbelianGroup::from_cyclic_orders(&[6, 4]).unwrap();
    let b = FiniteAbelianGroup::from_cyclic_orders(&[2, 3, 4]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.invariant_factors(), &[2, 12]);
    assert_eq!(a.to_string(), "Z/2 + Z/12");
    assert!(FiniteAbelianGroup::from_cyclic_orders(&[0]).is_err());
}
