//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails.

mod common;

use std::time::Instant;

use defobs::alexander::{torus_knot_alexander, TorusKnot};
use defobs::dinv::{
    manifold_d_table, max_correction_term, negative_definite_obstruction, spin_c_count, surgery2_d_table,
    NegativeVerdict,
};
use defobs::flat::oracle::{su2_oracle, OracleConfig, OracleStatus};
use defobs::flat::{atom_spectrum, enumerate_flat, min_cylinder_energy, EnergyQuery, FlatKind, GapSource, KindFilter};
use defobs::ledger::{
    audit_profile, classify_end_patterns, main_theorem_audit, moduli_dimension, positive_definite_audit,
    reducible_counts, AuditVerdict, CobordismProfile, EndPattern, LedgerError, RuleSet,
};
use defobs::manifold::{AtomKind, BrieskornParams};
use defobs::{hom_counts, mod_one, Atom, FiniteAbelianGroup, Manifold, Orientation, Rational, Registry};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($fmt)+)),
        }
    };
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn criterion_1() -> Check {
    let t = surgery2_d_table(TorusKnot::trefoil()).map_err(|e| e.to_string())?;
    ensure!(t.multiset() == vec![r(-7, 4), r(-1, 4)], "got {t}");
    Ok(())
}

fn criterion_2() -> Check {
    let reg = Registry::default();
    for m in 1..=6i64 {
        for k in 1..=60i64 {
            let man = Manifold::family(m, k);
            let max = max_correction_term(&reg, &man).map_err(|e| e.to_string())?;
            ensure!(
                max == Rational::from_integer(2 * m) - r(k, 4),
                "max d at ({m},{k}) is {max}"
            );
            let v = negative_definite_obstruction(&reg, &man)
                .map_err(|e| e.to_string())?
                .verdict;
            ensure!(
                (v == NegativeVerdict::Obstructed) == (k > 8 * m),
                "verdict {v} at ({m},{k})"
            );
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let params = BrieskornParams::new(2, 3, 5).unwrap();
    let cfg = OracleConfig::default();
    let spectrum = enumerate_flat(params, &cfg).map_err(|e| e.to_string())?;
    let irr: Vec<([i64; 3], Rational)> = spectrum
        .records()
        .iter()
        .filter_map(|rec| match &rec.kind {
            FlatKind::Irreducible { triple } => Some((triple.as_array(), rec.cs.value().clone())),
            _ => None,
        })
        .collect();
    ensure!(
        irr == vec![([1, 1, 1], r(1, 120)), ([1, 1, 3], r(49, 120))],
        "irreducibles {irr:?}"
    );
    let outcomes = su2_oracle(params, &cfg).map_err(|e| e.to_string())?;
    let accepted: Vec<_> = outcomes.iter().filter(|o| o.status == OracleStatus::Accepted).collect();
    ensure!(accepted.len() == 2, "oracle accepted {} triples", accepted.len());
    ensure!(
        outcomes.iter().all(|o| o.status != OracleStatus::Undecided),
        "undecided triples"
    );
    for o in accepted {
        ensure!(o.residual.unwrap() < 1e-9, "residual {:?}", o.residual);
    }
    Ok(())
}

fn criterion_4() -> Check {
    let reg = Registry::default();
    let cfg = OracleConfig::default();
    let gap = |a: &Atom, q: EnergyQuery| min_cylinder_energy(&reg, a, q, &cfg).map_err(|e| e.to_string());
    let p = Atom::poincare();
    let e = gap(&p, EnergyQuery::beyond_minimal())?.energy;
    ensure!(e == r(2, 5), "P beyond minimal: {e}");
    let e = gap(&p.reversed(), EnergyQuery::new(KindFilter::Any, KindFilter::Trivial))?.energy;
    ensure!(e == r(71, 120), "-P to trivial: {e}");
    for o in [Atom::octahedral(), Atom::octahedral().reversed()] {
        let g = gap(&o, EnergyQuery::any())?;
        ensure!(g.energy == r(1, 48), "{o}: {}", g.energy);
        ensure!(
            matches!(g.source, GapSource::Pi1Order { order: 48 }),
            "{o}: source {:?}",
            g.source
        );
    }
    Ok(())
}

/// Exhaustive count of maps `G → ℤ/N` given by generator images that are
/// additive against every generator at every element.
fn enumerate_homs(g: &FiniteAbelianGroup) -> (u64, u64) {
    let f = g.invariant_factors().to_vec();
    let n = f.iter().copied().max().unwrap_or(1);
    let elems: Vec<Vec<u64>> = g.elements().collect();
    let rank = f.len();
    let total = n.pow(rank as u32);
    let (mut all, mut real) = (0, 0);
    for code in 0..total {
        let img: Vec<u64> = (0..rank).map(|i| (code / n.pow(i as u32)) % n).collect();
        let ev = |e: &[u64]| e.iter().zip(&img).map(|(a, b)| a * b).sum::<u64>() % n;
        let hom = elems.iter().all(|x| {
            (0..rank).all(|i| {
                let mut y = x.clone();
                y[i] = (y[i] + 1) % f[i];
                ev(&y) == (ev(x) + img[i]) % n
            })
        });
        if hom {
            all += 1;
            real += elems.iter().all(|x| 2 * ev(x) % n == 0) as u64;
        }
    }
    (all, real)
}

fn groups_up_to(bound: u64) -> Vec<FiniteAbelianGroup> {
    fn go(min: u64, budget: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        for d in min..=budget {
            prefix.push(d);
            go(d, budget / d, prefix, out);
            prefix.pop();
        }
    }
    let mut pres = Vec::new();
    go(2, bound, &mut Vec::new(), &mut pres);
    let mut groups: Vec<FiniteAbelianGroup> = pres
        .iter()
        .map(|p| FiniteAbelianGroup::from_cyclic_orders(p).unwrap())
        .collect();
    groups.sort_by(|a, b| a.invariant_factors().cmp(b.invariant_factors()));
    groups.dedup();
    groups
}

fn criterion_5() -> Check {
    let groups = groups_up_to(64);
    ensure!(groups.len() == 117, "{} groups of order <= 64", groups.len());
    for g in groups {
        let (all, real) = enumerate_homs(&g);
        ensure!(hom_counts(&g) == (all, real), "{g}: hom counts");
        let c = reducible_counts(&g);
        ensure!(
            c.central == real && c.central + 2 * c.abelian == g.order(),
            "{g}: z={} a={}",
            c.central,
            c.abelian
        );
    }
    Ok(())
}

fn criterion_6() -> Check {
    let pat = |n, m, r, ind_a, b: Vec<i64>, c: Vec<i64>| EndPattern {
        n,
        m,
        r,
        ind_a,
        b_indices: b,
        c_indices: c,
    };
    let expected = vec![
        pat(0, 1, 0, 0, vec![], vec![1]),
        pat(1, 0, 0, 0, vec![1], vec![]),
        pat(1, 0, 1, -3, vec![1], vec![]),
    ];
    let standard = classify_end_patterns(1, RuleSet::standard()).map_err(|e| e.to_string())?;
    ensure!(standard == expected, "standard rules: {standard:?}");
    let relaxed = classify_end_patterns(1, RuleSet::relaxed()).map_err(|e| e.to_string())?;
    ensure!(
        standard.iter().all(|p| relaxed.contains(p)),
        "relaxed set misses a pattern"
    );
    ensure!(relaxed.len() > standard.len(), "relaxed set is not strictly larger");
    ensure!(
        relaxed.contains(&pat(1, 0, 0, -3, vec![4], vec![])),
        "spurious pattern missing"
    );
    Ok(())
}

fn criterion_7() -> Check {
    let reg = Registry::default();
    for (m, k) in [(1, 9), (1, -5), (3, 25), (2, 0)] {
        let profile = CobordismProfile::for_filling(&Manifold::family(m, k)).map_err(|e| e.to_string())?;
        let d = moduli_dimension(&reg, &profile).map_err(|e| e.to_string())?;
        ensure!(d == 1, "dimension {d} at ({m},{k})");
    }
    Ok(())
}

fn criterion_8() -> Check {
    let reg = Registry::default();
    let cfg = OracleConfig::default();
    let t = main_theorem_audit(&reg, 1, 9, &cfg).map_err(|e| e.to_string())?;
    ensure!(
        t.negative.verdict == NegativeVerdict::Obstructed,
        "(1,9) negative not obstructed"
    );
    ensure!(t.positive.is_obstructed(), "(1,9) positive not obstructed");
    ensure!(
        t.symplectic.is_some()
            && t.conclusion
                .ends_with("does not embed in any closed symplectic 4-manifold"),
        "(1,9) conclusion: {}",
        t.conclusion
    );
    let t = main_theorem_audit(&reg, 1, 8, &cfg).map_err(|e| e.to_string())?;
    ensure!(
        t.positive.is_obstructed() && t.negative.verdict == NegativeVerdict::Inconclusive && t.symplectic.is_none(),
        "(1,8): {}",
        t.conclusion
    );
    match positive_definite_audit(&reg, &Manifold::family(0, 9), None, &cfg) {
        Err(LedgerError::NoIncomingP) => {}
        other => return Err(format!("m = 0 gave {other:?}")),
    }
    let mut profile = CobordismProfile::for_filling(&Manifold::family(1, 9)).map_err(|e| e.to_string())?;
    profile.outgoing.push(Atom::poincare());
    let report = audit_profile(&reg, &profile, &cfg).map_err(|e| e.to_string())?;
    ensure!(
        report.verdict == AuditVerdict::Inconclusive,
        "outgoing +P gave {:?}",
        report.verdict
    );
    Ok(())
}

fn run_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    let mut runner = TestRunner::new(Config {
        cases: 128,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn criterion_9() -> Check {
    let rational = (-5000i64..5000, 1i64..300).prop_map(|(p, q)| Rational::new(p, q));
    run_property(
        "mod-1 laws",
        (rational.clone(), rational.clone(), rational),
        |(a, b, c)| {
            let (x, y, z) = (mod_one(&a), mod_one(&b), mod_one(&c));
            prop_assert!(!x.value().is_negative() && *x.value() < Rational::one());
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert!(x.add(&x.negate()).is_zero());
            prop_assert_eq!(mod_one(&(&a + &b)), x.add(&y));
            Ok(())
        },
    )?;

    let reg = Registry::default();
    run_property("d-table antisymmetry", common::manifold_strategy(3, 2), |m| {
        if !matches!(spin_c_count(&reg, &m), Ok(Some(n)) if n <= 256) {
            return Ok(());
        }
        let t = manifold_d_table(&reg, &m).unwrap();
        let mut neg: Vec<Rational> = t.multiset().into_iter().map(|d| -d).collect();
        neg.sort();
        prop_assert_eq!(manifold_d_table(&reg, &m.reversed()).unwrap().multiset(), neg);
        Ok(())
    })?;

    let triples = common::brieskorn_triples(78);
    let cfg = OracleConfig::default();
    run_property("CS antisymmetry", 0..triples.len(), |i| {
        let atom = Atom::new(AtomKind::Brieskorn(triples[i]), Orientation::Positive);
        let a = atom_spectrum(&reg, &atom, &cfg).unwrap().unwrap();
        let b = atom_spectrum(&reg, &atom.reversed(), &cfg).unwrap().unwrap();
        let mut neg: Vec<_> = a.values().iter().map(|v| v.negate()).collect();
        neg.sort();
        prop_assert_eq!(b.values(), neg);
        Ok(())
    })?;

    run_property(
        "max d additivity",
        (common::manifold_strategy(3, 3), common::manifold_strategy(3, 3)),
        |(a, b)| {
            let lhs = max_correction_term(&reg, &a.connected_sum(&b)).unwrap();
            let rhs = max_correction_term(&reg, &a).unwrap() + max_correction_term(&reg, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )?;

    let knots = common::torus_knots(35);
    run_property("Alexander second difference", 0..knots.len(), |i| {
        let delta = torus_knot_alexander(knots[i]).unwrap();
        let t = |j: i64| delta.torsion_coefficient(j);
        for j in 1..=delta.degree() + 1 {
            prop_assert_eq!(delta.coefficient(j), t(j - 1) - 2 * t(j) + t(j + 1));
        }
        Ok(())
    })?;
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("d-invariants of -O", criterion_1),
        ("family maximum and negative-definite threshold", criterion_2),
        ("CS spectrum of P, closed form and oracle", criterion_3),
        ("energy gaps", criterion_4),
        ("reducible counting for groups of order <= 64", criterion_5),
        ("end classification", criterion_6),
        ("dimension count", criterion_7),
        ("full audit", criterion_8),
        ("property suites", criterion_9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2?})", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
