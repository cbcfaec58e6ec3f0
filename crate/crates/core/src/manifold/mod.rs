//! Supported 3-manifold atoms, their invariant data, and oriented connected
//! sums of them.
//!
//! Atoms come in four shapes: named registry entries (the Poincaré sphere `P`
//! and the octahedral manifold `O` by default), Brieskorn spheres `Σ(p,q,r)`,
//! and `+2`-surgeries on torus knots. A [`Manifold`] is an unordered multiset
//! of oriented atoms; the empty sum is `S³`.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::alexander::TorusKnot;
use crate::dinv::{atom_d_table, DInvariantError, DInvariantTable};
use crate::exact::{gcd, Rational};
use crate::flat::FlatConnectionRecord;
use crate::group::FiniteAbelianGroup;

pub use parser::{parse_descriptor, parse_descriptor_with, ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("unregistered atom {0:?}")]
    Unregistered(String),
    #[error("Brieskorn parameters must be at least 2, got ({0},{1},{2})")]
    BrieskornTooSmall(i64, i64, i64),
    #[error("Brieskorn parameters must be pairwise coprime, got ({0},{1},{2})")]
    BrieskornNotCoprime(i64, i64, i64),
    #[error("d-invariant data for {name}: {reason}")]
    BadTable { name: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

/// Pairwise coprime `2 ≤ p < q < r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BrieskornParams {
    p: i64,
    q: i64,
    r: i64,
}

impl BrieskornParams {
    /// Accepts the three parameters in any order.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ManifoldError> {
        let mut v = [a, b, c];
        v.sort_unstable();
        let [p, q, r] = v;
        if p < 2 {
            return Err(ManifoldError::BrieskornTooSmall(a, b, c));
        }
        if gcd(p, q) != 1 || gcd(p, r) != 1 || gcd(q, r) != 1 {
            return Err(ManifoldError::BrieskornNotCoprime(a, b, c));
        }
        Ok(BrieskornParams { p, q, r })
    }

    pub fn params(&self) -> (i64, i64, i64) {
        (self.p, self.q, self.r)
    }

    pub fn as_array(&self) -> [i64; 3] {
        [self.p, self.q, self.r]
    }

    pub fn product(&self) -> i64 {
        self.p * self.q * self.r
    }
}

impl fmt::Display for BrieskornParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma({},{},{})", self.p, self.q, self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AtomKind {
    Named(String),
    Brieskorn(BrieskornParams),
    Surgery2(TorusKnot),
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::Named(n) => f.write_str(n),
            AtomKind::Brieskorn(b) => write!(f, "{b}"),
            AtomKind::Surgery2(k) => write!(f, "surgery({k},2)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    // field order fixes the derived ordering: positive atoms render first
    pub orientation: Orientation,
    pub kind: AtomKind,
}

impl Atom {
    pub fn new(kind: AtomKind, orientation: Orientation) -> Self {
        Atom { kind, orientation }
    }

    pub fn named(name: &str, orientation: Orientation) -> Self {
        Atom::new(AtomKind::Named(name.to_string()), orientation)
    }

    pub fn poincare() -> Self {
        Atom::named("P", Orientation::Positive)
    }

    pub fn octahedral() -> Self {
        Atom::named("O", Orientation::Positive)
    }

    pub fn reversed(&self) -> Self {
        Atom::new(self.kind.clone(), self.orientation.reversed())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientation == Orientation::Negative {
            f.write_str("-")?;
        }
        write!(f, "{}", self.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pi1Order {
    Finite(u64),
    Infinite,
}

impl Pi1Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Pi1Order::Finite(n) => Some(n),
            Pi1Order::Infinite => None,
        }
    }
}

impl fmt::Display for Pi1Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi1Order::Finite(n) => write!(f, "{n}"),
            Pi1Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Pi1Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Data for a named atom, in its positive orientation.
#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: String,
    pub pi1_order: Pi1Order,
    pub h1: FiniteAbelianGroup,
    pub d_table: Option<DInvariantTable>,
    /// Brieskorn parameters when the atom is a Brieskorn sphere, with the same
    /// orientation.
    pub flat_params: Option<BrieskornParams>,
    /// Explicit flat connections with Chern–Simons values, for atoms whose
    /// spectrum is known but not derivable from `flat_params`.
    pub cs_values: Option<Vec<FlatConnectionRecord>>,
}

/// Invariant data of an atom with its orientation applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomRecord {
    pub atom: Atom,
    pub pi1_order: Pi1Order,
    pub h1: FiniteAbelianGroup,
    pub d_table: Option<DInvariantTable>,
    pub flat_params: Option<BrieskornParams>,
    pub cs_values: Option<Vec<FlatConnectionRecord>>,
}

impl AtomRecord {
    pub fn is_spherical(&self) -> bool {
        matches!(self.pi1_order, Pi1Order::Finite(_))
    }

    pub fn is_two_torsion(&self) -> bool {
        self.h1.is_two_torsion()
    }
}

/// Registry of named atoms. `Registry::default()` holds `P` and `O`.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: BTreeMap<String, RegistryEntry>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut reg = Registry::empty();
        for entry in builtin_entries() {
            reg.register(entry).expect("builtin registry entries are valid");
        }
        reg
    }
}

/// Name, |π₁|, H₁ invariant factors, d-values by label, Brieskorn parameters.
type BuiltinRow = (
    &'static str,
    u64,
    &'static [u64],
    &'static [(i64, i64)],
    Option<(i64, i64, i64)>,
);

// P = Σ(2,3,5), boundary of the negative-definite E8 plumbing.
// O = (−2; 1/2, 2/3, 3/4), boundary of the negative-definite E7 plumbing;
// −O = S³_{+2}(T(2,3)).
const BUILTIN: &[BuiltinRow] = &[
    ("P", 120, &[], &[(2, 1)], Some((2, 3, 5))),
    ("O", 48, &[2], &[(7, 4), (1, 4)], None),
];

fn builtin_entries() -> Vec<RegistryEntry> {
    BUILTIN
        .iter()
        .map(|&(name, pi1, h1, d, flat)| {
            let values = d.iter().map(|&(p, q)| Rational::new(p, q)).collect::<Vec<_>>();
            let d_table = if h1.is_empty() {
                DInvariantTable::single(values[0].clone())
            } else {
                DInvariantTable::cyclic(values)
            };
            RegistryEntry {
                name: name.to_string(),
                pi1_order: Pi1Order::Finite(pi1),
                h1: FiniteAbelianGroup::from_cyclic_orders(h1).expect("finite"),
                d_table: Some(d_table),
                flat_params: flat.map(|(p, q, r)| BrieskornParams::new(p, q, r).expect("valid")),
                cs_values: None,
            }
        })
        .collect()
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces a named atom. The d-table must have one entry per
    /// element of H₁, and |H₁| must divide a finite |π₁|.
    pub fn register(&mut self, entry: RegistryEntry) -> Result<(), ManifoldError> {
        let bad = |reason: &str| ManifoldError::BadTable {
            name: entry.name.clone(),
            reason: reason.to_string(),
        };
        if let Some(t) = &entry.d_table {
            if t.len() as u64 != entry.h1.order() {
                return Err(bad("table size differs from |H1|"));
            }
        }
        if let Pi1Order::Finite(n) = entry.pi1_order {
            if n % entry.h1.order() != 0 {
                return Err(bad("|H1| does not divide |pi1|"));
            }
        }
        self.entries.insert(entry.name.clone(), entry);
        Ok(())
    }

    pub fn entry(&self, name: &str) -> Option<&RegistryEntry> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Looks up an atom's data and applies its orientation: reversal negates
    /// every correction term and every Chern–Simons value.
    pub fn lookup(&self, atom: &Atom) -> Result<AtomRecord, ManifoldError> {
        let positive = self.lookup_positive(&atom.kind)?;
        Ok(match atom.orientation {
            Orientation::Positive => positive,
            Orientation::Negative => AtomRecord {
                atom: atom.clone(),
                d_table: positive.d_table.map(|t| t.negated()),
                cs_values: positive
                    .cs_values
                    .map(|v| v.iter().map(FlatConnectionRecord::reversed).collect()),
                ..positive
            },
        })
    }

    fn lookup_positive(&self, kind: &AtomKind) -> Result<AtomRecord, ManifoldError> {
        let atom = Atom::new(kind.clone(), Orientation::Positive);
        let d_table = atom_d_table(kind, self).map_err(|e| match e {
            DInvariantError::Manifold(m) => m,
            other => ManifoldError::BadTable {
                name: kind.to_string(),
                reason: other.to_string(),
            },
        })?;
        match kind {
            AtomKind::Named(name) => {
                let e = self
                    .entry(name)
                    .ok_or_else(|| ManifoldError::Unregistered(name.clone()))?;
                Ok(AtomRecord {
                    atom,
                    pi1_order: e.pi1_order,
                    h1: e.h1.clone(),
                    d_table,
                    flat_params: e.flat_params,
                    cs_values: e.cs_values.clone(),
                })
            }
            AtomKind::Brieskorn(b) => Ok(AtomRecord {
                atom,
                // Σ(2,3,5) is the only Brieskorn sphere with finite π₁.
                pi1_order: if b.params() == (2, 3, 5) {
                    Pi1Order::Finite(120)
                } else {
                    Pi1Order::Infinite
                },
                h1: FiniteAbelianGroup::trivial(),
                d_table,
                flat_params: Some(*b),
                cs_values: None,
            }),
            AtomKind::Surgery2(k) => Ok(AtomRecord {
                atom,
                // S³₂(unknot) = L(2,1); S³₂(T(2,3)) = −O. The remaining
                // S³₂(T(p,q)) are Seifert with fibers (p, q, pq−2), never spherical.
                pi1_order: match k.params() {
                    (1, 1) => Pi1Order::Finite(2),
                    (2, 3) => Pi1Order::Finite(48),
                    _ => Pi1Order::Infinite,
                },
                h1: FiniteAbelianGroup::cyclic(2).expect("finite"),
                d_table,
                flat_params: None,
                cs_values: None,
            }),
        }
    }
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Manifold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An oriented connected sum; summands with equal atoms are merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Manifold {
    summands: BTreeMap<Atom, u64>,
}

impl Manifold {
    pub fn sphere() -> Self {
        Manifold::default()
    }

    pub fn from_summands<I: IntoIterator<Item = (Atom, u64)>>(iter: I) -> Self {
        let mut m = Manifold::default();
        for (atom, mult) in iter {
            m.add(atom, mult);
        }
        m
    }

    /// `mP # −kO`; negative multiplicities flip orientation.
    pub fn family(m: i64, k: i64) -> Self {
        let mut out = Manifold::default();
        let signed = |n: i64| {
            if n >= 0 {
                Orientation::Positive
            } else {
                Orientation::Negative
            }
        };
        out.add(Atom::named("P", signed(m)), m.unsigned_abs());
        out.add(Atom::named("O", signed(-k)), k.unsigned_abs());
        out
    }

    pub fn add(&mut self, atom: Atom, mult: u64) {
        if mult > 0 {
            *self.summands.entry(atom).or_insert(0) += mult;
        }
    }

    pub fn summands(&self) -> impl Iterator<Item = (&Atom, u64)> {
        self.summands.iter().map(|(a, &m)| (a, m))
    }

    pub fn multiplicity(&self, atom: &Atom) -> u64 {
        self.summands.get(atom).copied().unwrap_or(0)
    }

    pub fn is_sphere(&self) -> bool {
        self.summands.is_empty()
    }

    /// Total number of prime summands.
    pub fn summand_count(&self) -> u64 {
        self.summands.values().sum()
    }

    pub fn reversed(&self) -> Self {
        Manifold::from_summands(self.summands().map(|(a, m)| (a.reversed(), m)))
    }

    pub fn connected_sum(&self, other: &Manifold) -> Self {
        let mut out = self.clone();
        for (a, m) in other.summands() {
            out.add(a.clone(), m);
        }
        out
    }

    /// Connected sums of spherical space forms are L-spaces.
    pub fn is_elliptic_sum(&self, registry: &Registry) -> Result<bool, ManifoldError> {
        for (atom, _) in self.summands() {
            if !registry.lookup(atom)?.is_spherical() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("S3");
        }
        let terms: Vec<String> = self
            .summands
            .iter()
            .map(|(atom, &mult)| {
                let sign = if atom.orientation == Orientation::Negative {
                    "-"
                } else {
                    ""
                };
                if mult == 1 {
                    format!("{sign}{}", atom.kind)
                } else {
                    format!("{sign}{mult}*{}", atom.kind)
                }
            })
            .collect();
        f.write_str(&terms.join(" # "))
    }
}
