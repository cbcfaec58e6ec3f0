//! Heegaard Floer correction terms: tables for atoms and connected sums, and
//! the negative-definite filling obstruction.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::alexander::{torus_knot_alexander, AlexanderError, TorusKnot};
use crate::exact::Rational;
use crate::manifold::{Atom, AtomKind, Manifold, ManifoldError, Orientation, Registry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DInvariantError {
    #[error("only +2 surgery is supported, got {0}")]
    UnsupportedCoefficient(i64),
    #[error(transparent)]
    Knot(#[from] AlexanderError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error("no correction-term data for {0}")]
    NoData(String),
}

/// A spin^c structure, named by its residue tuple in `⊕ ℤ/nᵢ`.
pub type SpinCLabel = Vec<u64>;

/// Correction terms indexed by spin^c labels. `moduli` gives the order of each
/// label coordinate; the table has exactly `Π moduli` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DInvariantTable {
    moduli: Vec<u64>,
    entries: BTreeMap<SpinCLabel, Rational>,
}

impl DInvariantTable {
    /// Table of a single spin^c structure (an integer homology sphere).
    pub fn single(d: Rational) -> Self {
        DInvariantTable {
            moduli: Vec::new(),
            entries: BTreeMap::from([(Vec::new(), d)]),
        }
    }

    /// Table over `ℤ/n`, entry `i` being the correction term of label `(i)`.
    pub fn cyclic(values: Vec<Rational>) -> Self {
        let n = values.len() as u64;
        DInvariantTable {
            moduli: vec![n],
            entries: values
                .into_iter()
                .enumerate()
                .map(|(i, d)| (vec![i as u64], d))
                .collect(),
        }
    }

    /// The `S³` table `{0 ↦ 0}`.
    pub fn sphere() -> Self {
        Self::single(Rational::zero())
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &[u64]) -> Option<&Rational> {
        self.entries.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SpinCLabel, &Rational)> {
        self.entries.iter()
    }

    /// Table of the orientation reverse.
    pub fn negated(&self) -> Self {
        DInvariantTable {
            moduli: self.moduli.clone(),
            entries: self.entries.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn max(&self) -> Rational {
        self.entries.values().max().cloned().expect("tables are nonempty")
    }

    pub fn min(&self) -> Rational {
        self.entries.values().min().cloned().expect("tables are nonempty")
    }

    /// Values sorted ascending, with repetition. Labelings of 2-surgeries are
    /// only defined up to conjugation, so comparisons go through this.
    pub fn multiset(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.entries.values().cloned().collect();
        v.sort();
        v
    }
}

impl fmt::Display for DInvariantTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiset().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Correction terms of `S³_{+2}(K)`:
/// `d(s₀) = 1/4 − 2t₀(K)`, `d(s₁) = −1/4 − 2t₁(K)`.
pub fn surgery2_d_table(knot: TorusKnot) -> Result<DInvariantTable, DInvariantError> {
    let delta = torus_knot_alexander(knot)?;
    let t0 = delta.torsion_coefficient(0);
    let t1 = delta.torsion_coefficient(1);
    Ok(DInvariantTable::cyclic(vec![
        Rational::new(1, 4) - Rational::from_integer(2 * t0),
        Rational::new(-1, 4) - Rational::from_integer(2 * t1),
    ]))
}

/// Same as [`surgery2_d_table`] but for an arbitrary coefficient, which is
/// rejected unless it is `+2`.
pub fn surgery_d_table(knot: TorusKnot, coefficient: i64) -> Result<DInvariantTable, DInvariantError> {
    if coefficient != 2 {
        return Err(DInvariantError::UnsupportedCoefficient(coefficient));
    }
    surgery2_d_table(knot)
}

/// Product table of a connected sum: labels concatenate, values add.
pub fn connected_sum_d(tables: &[DInvariantTable]) -> DInvariantTable {
    let mut acc = DInvariantTable::sphere();
    for t in tables {
        let mut entries = BTreeMap::new();
        for (la, da) in &acc.entries {
            for (lb, db) in &t.entries {
                let mut label = la.clone();
                label.extend_from_slice(lb);
                entries.insert(label, da + db);
            }
        }
        let mut moduli = acc.moduli.clone();
        moduli.extend_from_slice(&t.moduli);
        acc = DInvariantTable { moduli, entries };
    }
    acc
}

impl Serialize for DInvariantTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            label: &'a SpinCLabel,
            d: &'a Rational,
        }
        #[derive(Serialize)]
        struct Table<'a> {
            moduli: &'a [u64],
            entries: Vec<Entry<'a>>,
        }
        Table {
            moduli: &self.moduli,
            entries: self.entries.iter().map(|(label, d)| Entry { label, d }).collect(),
        }
        .serialize(s)
    }
}

/// Table of every summand counted with multiplicity, in descriptor order.
pub fn summand_tables(
    registry: &Registry,
    manifold: &Manifold,
) -> Result<Vec<(Atom, u64, DInvariantTable)>, DInvariantError> {
    manifold
        .summands()
        .map(|(atom, mult)| {
            let record = registry.lookup(atom)?;
            let table = record
                .d_table
                .ok_or_else(|| DInvariantError::NoData(atom.to_string()))?;
            Ok((atom.clone(), mult, table))
        })
        .collect()
}

/// Full product table; its size is the product of the summand sizes.
pub fn manifold_d_table(registry: &Registry, manifold: &Manifold) -> Result<DInvariantTable, DInvariantError> {
    let mut tables = Vec::new();
    for (_, mult, table) in summand_tables(registry, manifold)? {
        tables.extend(std::iter::repeat_n(table, mult as usize));
    }
    Ok(connected_sum_d(&tables))
}

/// `max_s d(M, s)`, computed as a sum of per-summand maxima so the product
/// table is never built.
pub fn max_correction_term(registry: &Registry, manifold: &Manifold) -> Result<Rational, DInvariantError> {
    Ok(summand_tables(registry, manifold)?
        .iter()
        .map(|(_, mult, table)| table.max().scale(*mult as i64))
        .sum())
}

/// Number of spin^c structures of the connected sum, if it fits in a `u128`.
pub fn spin_c_count(registry: &Registry, manifold: &Manifold) -> Result<Option<u128>, DInvariantError> {
    let mut count: u128 = 1;
    for (_, mult, table) in summand_tables(registry, manifold)? {
        for _ in 0..mult {
            match count.checked_mul(table.len() as u128) {
                Some(c) => count = c,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(count))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeVerdict {
    /// The manifold bounds no negative-definite 4-manifold.
    Obstructed,
    Inconclusive,
}

impl fmt::Display for NegativeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NegativeVerdict::Obstructed => "obstructed",
            NegativeVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeDefiniteReport {
    pub verdict: NegativeVerdict,
    /// `max_s d(M, s)`.
    pub witness: Rational,
    /// A negative-definite filling forces `witness ≥ threshold`.
    pub threshold: Rational,
    /// `(m, k)` when `M` is literally `mP # −kO` with `m, k ≥ 1`.
    pub family: Option<(u64, u64)>,
}

/// Recognizes `mP # −kO` with `m, k ≥ 1`.
pub fn match_family(manifold: &Manifold) -> Option<(u64, u64)> {
    let p = Atom::named("P", Orientation::Positive);
    let o = Atom::named("O", Orientation::Negative);
    let mut m = 0;
    let mut k = 0;
    for (atom, mult) in manifold.summands() {
        if *atom == p {
            m = mult;
        } else if *atom == o {
            k = mult;
        } else {
            return None;
        }
    }
    (m >= 1 && k >= 1).then_some((m, k))
}

/// A negative-definite filling forces `max d ≥ 0`; for `mP # −kO` with `k`
/// odd the bound sharpens to `max d ≥ 1/4`.
pub fn negative_definite_obstruction(
    registry: &Registry,
    manifold: &Manifold,
) -> Result<NegativeDefiniteReport, DInvariantError> {
    let witness = max_correction_term(registry, manifold)?;
    let family = match_family(manifold);
    let threshold = match family {
        Some((_, k)) if k % 2 == 1 => Rational::new(1, 4),
        _ => Rational::zero(),
    };
    let verdict = if witness < threshold {
        NegativeVerdict::Obstructed
    } else {
        NegativeVerdict::Inconclusive
    };
    Ok(NegativeDefiniteReport {
        verdict,
        witness,
        threshold,
        family,
    })
}

pub(crate) fn atom_d_table(kind: &AtomKind, registry: &Registry) -> Result<Option<DInvariantTable>, DInvariantError> {
    match kind {
        AtomKind::Named(name) => Ok(registry.entry(name).and_then(|e| e.d_table.clone())),
        AtomKind::Brieskorn(b) if b.params() == (2, 3, 5) => {
            Ok(Some(DInvariantTable::single(Rational::from_integer(2))))
        }
        AtomKind::Brieskorn(_) => Ok(None),
        AtomKind::Surgery2(k) => surgery2_d_table(*k).map(Some),
    }
}
