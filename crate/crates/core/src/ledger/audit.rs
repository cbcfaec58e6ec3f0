//! Energy pruning of end patterns and the resulting audits.

use std::fmt;

use serde::{Serialize, Serializer};

use super::ends::{classify_end_patterns, EndPattern, EndType, RuleSet};
use super::{moduli_dimension, reducible_counts, CobordismProfile, LedgerError};
use crate::dinv::{negative_definite_obstruction, NegativeDefiniteReport, NegativeVerdict};
use crate::exact::Rational;
use crate::flat::oracle::OracleConfig;
use crate::flat::{atom_spectrum, min_cylinder_energy, EnergyQuery, FlatError, KindFilter};
use crate::group::FiniteAbelianGroup;
use crate::manifold::{Atom, Manifold, Registry};

pub const SYMPLECTIC_CITATION: &str =
    "Mukherjee: an L-space embedded in a closed symplectic 4-manifold bounds a definite 4-manifold";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fate {
    PrunedByEnergy,
    Survives,
}

/// How the energy `κ` of a surviving configuration splits over its factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergySplit {
    pub incoming: Rational,
    pub cobordism: Rational,
    pub outgoing: Rational,
}

impl EnergySplit {
    pub fn total(&self) -> Rational {
        &(&self.incoming + &self.cobordism) + &self.outgoing
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternFate {
    pub pattern: EndPattern,
    pub end_type: EndType,
    pub fate: Fate,
    pub reason: String,
    pub energy: Option<EnergySplit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndCount {
    /// `±|H|` for an unspecified finite `H`.
    Symbolic,
    Concrete {
        group: FiniteAbelianGroup,
        central: u64,
        abelian: u64,
        ends: u64,
    },
}

impl EndCount {
    pub fn for_group(group: Option<&FiniteAbelianGroup>) -> Self {
        match group {
            None => EndCount::Symbolic,
            Some(g) => {
                let c = reducible_counts(g);
                EndCount::Concrete {
                    group: g.clone(),
                    central: c.central,
                    abelian: c.abelian,
                    ends: c.end_count(),
                }
            }
        }
    }

    /// `|H| ≥ 1` for every finite group, so the count never vanishes.
    pub fn is_nonzero(&self) -> bool {
        match self {
            EndCount::Symbolic => true,
            EndCount::Concrete { ends, .. } => *ends != 0,
        }
    }
}

impl fmt::Display for EndCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndCount::Symbolic => f.write_str("±|H|"),
            EndCount::Concrete { ends, .. } => write!(f, "±{ends}"),
        }
    }
}

impl Serialize for EndCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            EndCount::Symbolic => s.serialize_str("±|H|"),
            EndCount::Concrete {
                group,
                central,
                abelian,
                ends,
            } => {
                let mut map = s.serialize_map(Some(4))?;
                map.serialize_entry("group", group)?;
                map.serialize_entry("central", central)?;
                map.serialize_entry("abelian", abelian)?;
                map.serialize_entry("ends", ends)?;
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditVerdict {
    /// No positive-definite filling exists.
    Contradiction,
    Inconclusive,
}

impl fmt::Display for AuditVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditVerdict::Contradiction => "contradiction: no positive-definite filling",
            AuditVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub profile: CobordismProfile,
    pub moduli_dimension: i64,
    /// Energy of the moduli space: least irreducible-to-trivial energy on the
    /// incoming end.
    pub kappa: Rational,
    pub patterns: Vec<PatternFate>,
    pub end_count: EndCount,
    pub verdict: AuditVerdict,
}

impl AuditReport {
    pub fn survivors(&self) -> impl Iterator<Item = &PatternFate> {
        self.patterns.iter().filter(|p| p.fate == Fate::Survives)
    }
}

/// Decides which patterns can carry total energy `kappa`.
///
/// Energy is additive over factors and non-negative on `W`, zero exactly for
/// flat connections. A pattern is pruned when some factor alone needs more
/// than `kappa`.
pub fn energy_prune(
    registry: &Registry,
    patterns: &[EndPattern],
    profile: &CobordismProfile,
    kappa: &Rational,
    config: &OracleConfig,
) -> Result<Vec<PatternFate>, LedgerError> {
    let incoming = profile.incoming_poincare()?;
    let incoming_gap = min_cylinder_energy(
        registry,
        incoming,
        EnergyQuery::new(KindFilter::Irreducible, KindFilter::Irreducible),
        config,
    )?;
    let outgoing = outgoing_verdict(registry, &profile.outgoing, kappa, config)?;
    let reducible_budget = reducible_gluing_energy(registry, incoming, kappa, config)?;

    Ok(patterns
        .iter()
        .map(|pattern| {
            let end_type = pattern.end_type();
            let (fate, reason, energy) = match end_type {
                EndType::IncomingCylinder => {
                    if incoming_gap.energy > *kappa {
                        (
                            Fate::PrunedByEnergy,
                            format!(
                                "irreducible-to-irreducible cylinder on {} needs {} > {kappa}",
                                incoming, incoming_gap.energy
                            ),
                            None,
                        )
                    } else {
                        (
                            Fate::Survives,
                            format!(
                                "irreducible-to-irreducible cylinder on {} costs {} <= {kappa}",
                                incoming, incoming_gap.energy
                            ),
                            None,
                        )
                    }
                }
                EndType::OutgoingCylinder => match &outgoing {
                    Ok(reason) => (Fate::PrunedByEnergy, reason.clone(), None),
                    Err(reason) => (Fate::Survives, reason.clone(), None),
                },
                EndType::ReducibleGluing => match &reducible_budget {
                    Some(split) => (
                        Fate::Survives,
                        format!(
                            "incoming cylinder carries {}, flat reducible carries {}",
                            split.incoming, split.cobordism
                        ),
                        Some(split.clone()),
                    ),
                    None => (
                        Fate::PrunedByEnergy,
                        format!("no irreducible on {incoming} has energy {kappa} to the trivial connection"),
                        None,
                    ),
                },
                EndType::Other => (
                    Fate::Survives,
                    "no energy bound applies to this shape".to_string(),
                    None,
                ),
            };
            PatternFate {
                pattern: pattern.clone(),
                end_type,
                fate,
                reason,
                energy,
            }
        })
        .collect())
}

/// `Ok(reason)` when every outgoing atom has cylinder gap above `kappa`,
/// `Err(reason)` naming the first that does not.
fn outgoing_verdict(
    registry: &Registry,
    outgoing: &[Atom],
    kappa: &Rational,
    config: &OracleConfig,
) -> Result<Result<String, String>, LedgerError> {
    let mut distinct: Vec<&Atom> = outgoing.iter().collect();
    distinct.sort();
    distinct.dedup();
    if distinct.is_empty() {
        return Ok(Ok("no outgoing end".to_string()));
    }
    let query = EnergyQuery::new(KindFilter::Any, KindFilter::Trivial);
    let mut gaps = Vec::new();
    for atom in distinct {
        if !registry.lookup(atom)?.is_spherical() {
            return Ok(Err(format!("{atom} has infinite fundamental group")));
        }
        match min_cylinder_energy(registry, atom, query, config) {
            Ok(gap) if gap.energy > *kappa => gaps.push(format!("{atom}: {}", gap.energy)),
            Ok(gap) => {
                return Ok(Err(format!(
                    "cylinder on {atom} reaches the trivial connection with energy {} <= {kappa}",
                    gap.energy
                )))
            }
            Err(FlatError::NoFlatData(_)) => return Ok(Err(format!("{atom} has no energy gap"))),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Ok(format!("outgoing gaps exceed {kappa} ({})", gaps.join(", "))))
}

/// The split `κ = E(B) + 0` when some irreducible on the incoming end reaches
/// the trivial connection with energy exactly `kappa`.
fn reducible_gluing_energy(
    registry: &Registry,
    incoming: &Atom,
    kappa: &Rational,
    config: &OracleConfig,
) -> Result<Option<EnergySplit>, LedgerError> {
    let Some(spectrum) = atom_spectrum(registry, incoming, config)? else {
        return Ok(None);
    };
    let realizable = spectrum.irreducibles().any(|r| r.cs.least_positive_lift() == *kappa);
    Ok(realizable.then(|| EnergySplit {
        incoming: kappa.clone(),
        cobordism: Rational::zero(),
        outgoing: Rational::zero(),
    }))
}

/// Runs dimension count, end classification and pruning on a profile.
pub fn audit_profile(
    registry: &Registry,
    profile: &CobordismProfile,
    config: &OracleConfig,
) -> Result<AuditReport, LedgerError> {
    let dimension = moduli_dimension(registry, profile)?;
    let incoming = profile.incoming_poincare()?;
    let kappa = min_cylinder_energy(
        registry,
        incoming,
        EnergyQuery::new(KindFilter::Irreducible, KindFilter::Trivial),
        config,
    )?
    .energy;
    let patterns = classify_end_patterns(dimension, RuleSet::standard())?;
    let fates = energy_prune(registry, &patterns, profile, &kappa, config)?;
    let end_count = EndCount::for_group(profile.quotient_group.as_ref());

    let only_reducible = fates
        .iter()
        .filter(|f| f.fate == Fate::Survives)
        .all(|f| f.end_type == EndType::ReducibleGluing);
    let any_reducible = fates
        .iter()
        .any(|f| f.fate == Fate::Survives && f.end_type == EndType::ReducibleGluing);
    let verdict = if dimension == 1 && only_reducible && any_reducible && end_count.is_nonzero() {
        AuditVerdict::Contradiction
    } else {
        AuditVerdict::Inconclusive
    };
    Ok(AuditReport {
        profile: profile.clone(),
        moduli_dimension: dimension,
        kappa,
        patterns: fates,
        end_count,
        verdict,
    })
}

/// Audits a hypothetical positive-definite filling of `manifold`.
pub fn positive_definite_audit(
    registry: &Registry,
    manifold: &Manifold,
    group: Option<FiniteAbelianGroup>,
    config: &OracleConfig,
) -> Result<AuditReport, LedgerError> {
    let mut profile = CobordismProfile::for_filling(manifold)?;
    profile.quotient_group = group;
    audit_profile(registry, &profile, config)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PositiveOutcome {
    Audited(Box<AuditReport>),
    Inapplicable { reason: String },
}

impl PositiveOutcome {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, PositiveOutcome::Audited(r) if r.verdict == AuditVerdict::Contradiction)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub m: i64,
    pub k: i64,
    pub manifold: String,
    pub l_space: bool,
    pub negative: NegativeDefiniteReport,
    pub positive: PositiveOutcome,
    pub conclusion: String,
    pub symplectic: Option<String>,
}

/// Both obstructions for `mP # −kO`, plus the symplectic consequence when
/// neither sign of definite filling exists.
pub fn main_theorem_audit(
    registry: &Registry,
    m: i64,
    k: i64,
    config: &OracleConfig,
) -> Result<TheoremReport, LedgerError> {
    let manifold = Manifold::family(m, k);
    let negative = negative_definite_obstruction(registry, &manifold)?;
    let positive = match positive_definite_audit(registry, &manifold, None, config) {
        Ok(report) => PositiveOutcome::Audited(Box::new(report)),
        Err(LedgerError::NoIncomingP) => PositiveOutcome::Inapplicable {
            reason: LedgerError::NoIncomingP.to_string(),
        },
        Err(e) => return Err(e),
    };
    let l_space = manifold.is_elliptic_sum(registry)?;
    let neg = negative.verdict == NegativeVerdict::Obstructed;
    let pos = positive.is_obstructed();
    let conclusion = match (pos, neg) {
        (true, true) if l_space => {
            format!(
                "{manifold}: no definite filling of either sign; does not embed in any closed symplectic 4-manifold"
            )
        }
        (true, true) => format!("{manifold}: no definite filling of either sign"),
        (true, false) => format!("{manifold}: no positive-definite filling; negative-definite inconclusive"),
        (false, true) => format!("{manifold}: no negative-definite filling; positive-definite inconclusive"),
        (false, false) => format!("{manifold}: no obstruction found"),
    };
    let symplectic = (pos && neg && l_space).then(|| SYMPLECTIC_CITATION.to_string());
    Ok(TheoremReport {
        m,
        k,
        manifold: manifold.to_string(),
        l_space,
        negative,
        positive,
        conclusion,
        symplectic,
    })
}
