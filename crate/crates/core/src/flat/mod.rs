//! Flat SU(2) connections on Brieskorn spheres, their Chern–Simons values,
//! and minimal energies of instantons on cylinders.
//!
//! Irreducible flat connections on `Σ(p,q,r)` are labelled by rotation
//! triples `(k, ℓ, m)` with `0 < k < p`, `0 < ℓ < q`, `0 < m < r`. Which
//! triples occur is decided by the numeric [`oracle`]; [`admissible_exact`]
//! is a closed-form fast path that must agree with it.

pub mod oracle;
pub mod quaternion;

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{mod_one, ModOne, Rational};
use crate::manifold::{Atom, BrieskornParams, ManifoldError, Pi1Order, Registry};
use oracle::{su2_oracle, OracleConfig, OracleError, OracleOutcome, OracleStatus};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlatError {
    #[error("rotation triple ({0},{1},{2}) out of bounds for {3}")]
    OutOfBounds(i64, i64, i64, BrieskornParams),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("oracle could not decide triples {0:?}")]
    Undecided(Vec<[i64; 3]>),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error("{0} has neither flat-connection data nor finite fundamental group")]
    NoFlatData(String),
    #[error("no flat connections of the requested kinds on {0}")]
    NoMatchingPair(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RotationTriple {
    k: i64,
    l: i64,
    m: i64,
}

impl RotationTriple {
    pub fn new(params: BrieskornParams, k: i64, l: i64, m: i64) -> Result<Self, FlatError> {
        let (p, q, r) = params.params();
        if !(0 < k && k < p && 0 < l && l < q && 0 < m && m < r) {
            return Err(FlatError::OutOfBounds(k, l, m, params));
        }
        Ok(RotationTriple { k, l, m })
    }

    /// Every in-bounds triple, lexicographically.
    pub fn all(params: BrieskornParams) -> Vec<RotationTriple> {
        let (p, q, r) = params.params();
        let mut out = Vec::new();
        for k in 1..p {
            for l in 1..q {
                for m in 1..r {
                    out.push(RotationTriple { k, l, m });
                }
            }
        }
        out
    }

    pub fn as_array(&self) -> [i64; 3] {
        [self.k, self.l, self.m]
    }
}

impl fmt::Display for RotationTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.l, self.m)
    }
}

/// `CS(α_{k,ℓ,m}) = (kqr + ℓpr + mpq)² / 4pqr mod 1`.
pub fn chern_simons(params: BrieskornParams, triple: RotationTriple) -> ModOne {
    let (p, q, r) = params.params();
    let e = BigInt::from(triple.k * q * r + triple.l * p * r + triple.m * p * q);
    let value = Rational::from_big(&e * &e, BigInt::from(4 * p * q * r)).expect("pqr > 0");
    mod_one(&value)
}

/// Closed-form admissibility: all entries share a parity, and the angles
/// `πk/p, πℓ/q, πm/r` satisfy the strict spherical triangle inequalities.
pub fn admissible_exact(params: BrieskornParams, triple: RotationTriple) -> bool {
    let [a1, a2, a3] = params.as_array();
    let [l1, l2, l3] = triple.as_array();
    if !(l1 % 2 == l2 % 2 && l2 % 2 == l3 % 2) {
        return false;
    }
    // angles in units of π
    let x1 = Rational::new(l1, a1);
    let x2 = Rational::new(l2, a2);
    let x3 = Rational::new(l3, a3);
    let diff = if x1 >= x2 { &x1 - &x2 } else { &x2 - &x1 };
    let sum = &x1 + &x2;
    let upper = std::cmp::min(sum.clone(), Rational::from_integer(2) - sum);
    diff < x3 && x3 < upper
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FlatKind {
    Trivial,
    /// Central, non-trivial; `character` lists the sign on each H₁ generator.
    Central {
        character: Vec<u8>,
    },
    Irreducible {
        triple: RotationTriple,
    },
}

impl FlatKind {
    pub fn is_reducible(&self) -> bool {
        !matches!(self, FlatKind::Irreducible { .. })
    }
}

impl fmt::Display for FlatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatKind::Trivial => f.write_str("trivial"),
            FlatKind::Central { character } => write!(f, "central{character:?}"),
            FlatKind::Irreducible { triple } => write!(f, "irreducible{triple}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FlatConnectionRecord {
    pub kind: FlatKind,
    pub cs: ModOne,
}

impl FlatConnectionRecord {
    pub fn trivial() -> Self {
        FlatConnectionRecord {
            kind: FlatKind::Trivial,
            cs: ModOne::zero(),
        }
    }

    /// Same connection viewed on the orientation reverse.
    pub fn reversed(&self) -> Self {
        FlatConnectionRecord {
            kind: self.kind.clone(),
            cs: self.cs.negate(),
        }
    }
}

/// All flat connections of a manifold with their Chern–Simons values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsSpectrum {
    records: Vec<FlatConnectionRecord>,
}

impl CsSpectrum {
    pub fn new(mut records: Vec<FlatConnectionRecord>) -> Self {
        records.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.cs.cmp(&b.cs)));
        CsSpectrum { records }
    }

    pub fn records(&self) -> &[FlatConnectionRecord] {
        &self.records
    }

    pub fn irreducibles(&self) -> impl Iterator<Item = &FlatConnectionRecord> {
        self.records.iter().filter(|r| !r.kind.is_reducible())
    }

    /// CS values sorted ascending, with multiplicity.
    pub fn values(&self) -> Vec<ModOne> {
        let mut v: Vec<ModOne> = self.records.iter().map(|r| r.cs.clone()).collect();
        v.sort();
        v
    }

    pub fn reversed(&self) -> Self {
        CsSpectrum::new(self.records.iter().map(FlatConnectionRecord::reversed).collect())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Trivial connection plus every irreducible accepted by the oracle.
/// Fails if the oracle leaves any triple undecided.
pub fn enumerate_flat(params: BrieskornParams, config: &OracleConfig) -> Result<CsSpectrum, FlatError> {
    let outcomes = su2_oracle(params, config)?;
    spectrum_from_outcomes(&outcomes)
}

pub fn spectrum_from_outcomes(outcomes: &[OracleOutcome]) -> Result<CsSpectrum, FlatError> {
    let undecided: Vec<[i64; 3]> = outcomes
        .iter()
        .filter(|o| o.status == OracleStatus::Undecided)
        .map(|o| o.triple.as_array())
        .collect();
    if !undecided.is_empty() {
        return Err(FlatError::Undecided(undecided));
    }
    let mut records = vec![FlatConnectionRecord::trivial()];
    records.extend(
        outcomes
            .iter()
            .filter(|o| o.status == OracleStatus::Accepted)
            .map(|o| FlatConnectionRecord {
                kind: FlatKind::Irreducible { triple: o.triple },
                cs: o.cs.clone().expect("accepted outcomes carry CS"),
            }),
    );
    Ok(CsSpectrum::new(records))
}

/// Spectrum from the closed-form admissibility test alone.
pub fn enumerate_flat_exact(params: BrieskornParams) -> CsSpectrum {
    let mut records = vec![FlatConnectionRecord::trivial()];
    records.extend(
        RotationTriple::all(params)
            .into_iter()
            .filter(|&t| admissible_exact(params, t))
            .map(|t| FlatConnectionRecord {
                kind: FlatKind::Irreducible { triple: t },
                cs: chern_simons(params, t),
            }),
    );
    CsSpectrum::new(records)
}

/// Flat-connection spectrum of an atom with its orientation applied, when the
/// atom carries enough data to enumerate one.
pub fn atom_spectrum(registry: &Registry, atom: &Atom, config: &OracleConfig) -> Result<Option<CsSpectrum>, FlatError> {
    let record = registry.lookup(atom)?;
    if let Some(records) = record.cs_values {
        // already oriented by the registry lookup
        return Ok(Some(CsSpectrum::new(records)));
    }
    match record.flat_params {
        Some(params) => {
            let spectrum = enumerate_flat(params, config)?;
            Ok(Some(match atom.orientation {
                crate::manifold::Orientation::Positive => spectrum,
                crate::manifold::Orientation::Negative => spectrum.reversed(),
            }))
        }
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindFilter {
    Any,
    Irreducible,
    /// Trivial or central.
    Reducible,
    Trivial,
}

impl KindFilter {
    pub fn matches(self, kind: &FlatKind) -> bool {
        match self {
            KindFilter::Any => true,
            KindFilter::Irreducible => !kind.is_reducible(),
            KindFilter::Reducible => kind.is_reducible(),
            KindFilter::Trivial => *kind == FlatKind::Trivial,
        }
    }
}

impl std::str::FromStr for KindFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "any" => Ok(KindFilter::Any),
            "irreducible" | "irr" => Ok(KindFilter::Irreducible),
            "reducible" | "central" => Ok(KindFilter::Reducible),
            "trivial" => Ok(KindFilter::Trivial),
            _ => Err(format!("unknown connection kind {s:?}")),
        }
    }
}

impl fmt::Display for KindFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KindFilter::Any => "any",
            KindFilter::Irreducible => "irreducible",
            KindFilter::Reducible => "reducible",
            KindFilter::Trivial => "trivial",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnergyQuery {
    pub from: KindFilter,
    pub to: KindFilter,
    /// Drop the single least-energy moduli space among the matching pairs.
    pub exclude_minimal: bool,
}

impl EnergyQuery {
    pub fn new(from: KindFilter, to: KindFilter) -> Self {
        EnergyQuery {
            from,
            to,
            exclude_minimal: false,
        }
    }

    pub fn any() -> Self {
        Self::new(KindFilter::Any, KindFilter::Any)
    }

    pub fn beyond_minimal() -> Self {
        EnergyQuery {
            exclude_minimal: true,
            ..Self::any()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum GapSource {
    /// Minimum over explicit flat connections `(from, to)`.
    Spectrum { from: FlatKind, to: FlatKind },
    /// `1/|π₁|`: CS values of a spherical manifold lie in `(1/|π₁|)ℤ/ℤ`.
    Pi1Order { order: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyGap {
    pub atom: String,
    pub energy: Rational,
    pub source: GapSource,
}

/// Least positive `κ ≡ CS(α) − CS(β) mod 1` over flat `α → β` of the requested
/// kinds. Without a spectrum, falls back to the lower bound `1/|π₁|`.
pub fn min_cylinder_energy(
    registry: &Registry,
    atom: &Atom,
    query: EnergyQuery,
    config: &OracleConfig,
) -> Result<EnergyGap, FlatError> {
    if let Some(spectrum) = atom_spectrum(registry, atom, config)? {
        return min_energy_in_spectrum(&spectrum, query)
            .map(|(energy, from, to)| EnergyGap {
                atom: atom.to_string(),
                energy,
                source: GapSource::Spectrum { from, to },
            })
            .ok_or_else(|| FlatError::NoMatchingPair(atom.to_string()));
    }
    match registry.lookup(atom)?.pi1_order {
        Pi1Order::Finite(n) => Ok(EnergyGap {
            atom: atom.to_string(),
            energy: Rational::new(1, n as i64),
            source: GapSource::Pi1Order { order: n },
        }),
        Pi1Order::Infinite => Err(FlatError::NoFlatData(atom.to_string())),
    }
}

/// Minimum over pairs of `(energy, from kind, to kind)`; each pair supplies its
/// least positive energy and that plus one.
pub fn min_energy_in_spectrum(spectrum: &CsSpectrum, query: EnergyQuery) -> Option<(Rational, FlatKind, FlatKind)> {
    let mut candidates: Vec<(Rational, FlatKind, FlatKind)> = Vec::new();
    for a in spectrum.records().iter().filter(|r| query.from.matches(&r.kind)) {
        for b in spectrum.records().iter().filter(|r| query.to.matches(&r.kind)) {
            let least = a.cs.sub(&b.cs).least_positive_lift();
            candidates.push((&least + &Rational::one(), a.kind.clone(), b.kind.clone()));
            candidates.push((least, a.kind.clone(), b.kind.clone()));
        }
    }
    candidates.sort();
    if query.exclude_minimal && !candidates.is_empty() {
        candidates.remove(0);
    }
    candidates.into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::Orientation;

    fn params(p: i64, q: i64, r: i64) -> BrieskornParams {
        BrieskornParams::new(p, q, r).unwrap()
    }

    fn triple(bp: BrieskornParams, k: i64, l: i64, m: i64) -> RotationTriple {
        RotationTriple::new(bp, k, l, m).unwrap()
    }

    #[test]
    fn cs_examples() {
        let p235 = params(2, 3, 5);
        assert_eq!(chern_simons(p235, triple(p235, 1, 1, 1)), Rational::new(1, 120));
        assert_eq!(chern_simons(p235, triple(p235, 1, 1, 3)), Rational::new(49, 120));
        let p237 = params(2, 3, 7);
        assert_eq!(chern_simons(p237, triple(p237, 1, 1, 1)), Rational::new(1, 168));
    }

    #[test]
    fn triple_bounds() {
        let p235 = params(2, 3, 5);
        assert!(RotationTriple::new(p235, 0, 1, 1).is_err());
        assert!(RotationTriple::new(p235, 1, 3, 1).is_err());
        assert!(RotationTriple::new(p235, 1, 1, 5).is_err());
        assert_eq!(RotationTriple::all(p235).len(), 8);
    }

    #[test]
    fn poincare_spectrum() {
        let s = enumerate_flat(params(2, 3, 5), &OracleConfig::default()).unwrap();
        let values: Vec<String> = s.values().iter().map(ToString::to_string).collect();
        assert_eq!(values, ["0", "1/120", "49/120"]);
        let triples: Vec<_> = s
            .irreducibles()
            .map(|r| match &r.kind {
                FlatKind::Irreducible { triple } => triple.as_array(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(triples, vec![[1, 1, 1], [1, 1, 3]]);
    }

    #[test]
    fn sigma_237_has_two_irreducibles() {
        let s = enumerate_flat(params(2, 3, 7), &OracleConfig::default()).unwrap();
        assert_eq!(s.irreducibles().count(), 2);
        let mut distinct: Vec<_> = s.irreducibles().map(|r| r.cs.clone()).collect();
        distinct.dedup();
        assert_eq!(distinct.len(), 2);
    }

    #[test]
    fn energy_gaps() {
        let reg = Registry::default();
        let cfg = OracleConfig::default();
        let p = Atom::poincare();
        let gap = |atom: &Atom, q: EnergyQuery| min_cylinder_energy(&reg, atom, q, &cfg).unwrap().energy;
        assert_eq!(gap(&p, EnergyQuery::any()), Rational::new(1, 120));
        assert_eq!(gap(&p, EnergyQuery::beyond_minimal()), Rational::new(2, 5));
        assert_eq!(
            gap(&p, EnergyQuery::new(KindFilter::Irreducible, KindFilter::Irreducible)),
            Rational::new(2, 5)
        );
        assert_eq!(
            gap(&p.reversed(), EnergyQuery::new(KindFilter::Any, KindFilter::Trivial)),
            Rational::new(71, 120)
        );
        for o in [Atom::octahedral(), Atom::octahedral().reversed()] {
            let g = min_cylinder_energy(&reg, &o, EnergyQuery::any(), &cfg).unwrap();
            assert_eq!(g.energy, Rational::new(1, 48));
            assert_eq!(g.source, GapSource::Pi1Order { order: 48 });
        }
    }

    #[test]
    fn gap_without_data_is_an_error() {
        let reg = Registry::default();
        let atom = crate::parse_descriptor("surgery(T(2,5),2)").unwrap();
        let (a, _) = atom.summands().next().unwrap();
        assert!(matches!(
            min_cylinder_energy(&reg, a, EnergyQuery::any(), &OracleConfig::default()),
            Err(FlatError::NoFlatData(_))
        ));
    }

    #[test]
    fn reversed_spectrum_negates() {
        let reg = Registry::default();
        let cfg = OracleConfig::default();
        let neg = atom_spectrum(&reg, &Atom::named("P", Orientation::Negative), &cfg)
            .unwrap()
            .unwrap();
        let values: Vec<String> = neg.values().iter().map(ToString::to_string).collect();
        assert_eq!(values, ["0", "71/120", "119/120"]);
    }
}
