//! Instanton bookkeeping on a negative-definite cobordism out of `P`.
//!
//! A positive-definite filling of `mP # −kO` with `m ≥ 1` yields, after
//! reversing orientation and cutting out one copy of `P`, a cobordism
//! `W: P → ⊔(m−1)(−P) ⊔ |k|(±O)` with `b₁ = b⁺ = 0`. This module does the
//! arithmetic on `W`: counting reducibles, the dimension of the moduli space
//! through the minimal irreducible on `P`, the shapes its ends can take, and
//! which of those shapes survive the energy budget.

mod audit;
mod ends;

use serde::Serialize;
use thiserror::Error;

use crate::dinv::DInvariantError;
use crate::flat::FlatError;
use crate::group::{hom_counts, FiniteAbelianGroup};
#[cfg(test)]
use crate::manifold::Orientation;
use crate::manifold::{Atom, Manifold, ManifoldError, Registry};

pub use audit::{
    audit_profile, energy_prune, main_theorem_audit, positive_definite_audit, AuditReport, AuditVerdict, EndCount,
    EnergySplit, Fate, PatternFate, PositiveOutcome, TheoremReport, SYMPLECTIC_CITATION,
};
pub use ends::{
    classify_end_patterns, EndPattern, EndType, RuleSet, CENTRAL_STABILIZER_DIM, MAX_TOTAL_INDEX, REDUCIBLE_INDEX,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LedgerError {
    #[error("no incoming P; argument inapplicable")]
    NoIncomingP,
    #[error("incoming end must be a single positively oriented P, got {0}")]
    UnsupportedIncoming(String),
    #[error("b1 = {0}, the audit needs b1 = 0")]
    NonZeroB1(u32),
    #[error("b+ = {0}, the audit needs b+ = 0")]
    NonZeroBPlus(u32),
    #[error("boundary atom {0} is not a two-torsion homology sphere")]
    NotTwoTorsion(String),
    #[error("total index {0} exceeds the supported maximum {MAX_TOTAL_INDEX}")]
    IndexTooLarge(i64),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error(transparent)]
    DInvariant(#[from] DInvariantError),
}

/// Reducible flat connections on `W` with prescribed boundary behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReducibleCounts {
    /// Central ones: characters `H → {±1}`.
    pub central: u64,
    /// Abelian non-central ones, counted up to conjugation.
    pub abelian: u64,
}

impl ReducibleCounts {
    /// `z + 2a`, the number of ends contributed by gluing.
    pub fn end_count(&self) -> u64 {
        self.central + 2 * self.abelian
    }
}

/// Flat reducibles on `W` correspond to characters of
/// `H = H₁(W)/i*H₁(∂W)`; real characters are central and the rest pair up
/// under conjugation.
pub fn reducible_counts(h: &FiniteAbelianGroup) -> ReducibleCounts {
    let (all, real) = hom_counts(h);
    ReducibleCounts {
        central: real,
        abelian: (all - real) / 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CobordismProfile {
    pub incoming: Vec<Atom>,
    pub outgoing: Vec<Atom>,
    pub b1: u32,
    pub b_plus: u32,
    /// `H₁(W)/i*H₁(∂W)` when known.
    pub quotient_group: Option<FiniteAbelianGroup>,
}

impl CobordismProfile {
    /// The cobordism obtained from a positive-definite filling of `manifold`:
    /// one `P` summand becomes the incoming end and every other summand is
    /// reversed onto the outgoing end.
    pub fn for_filling(manifold: &Manifold) -> Result<Self, LedgerError> {
        let p = Atom::poincare();
        if manifold.multiplicity(&p) == 0 {
            return Err(LedgerError::NoIncomingP);
        }
        let mut outgoing = Vec::new();
        for (atom, mult) in manifold.summands() {
            let copies = if *atom == p { mult - 1 } else { mult };
            outgoing.extend(std::iter::repeat_n(atom.reversed(), copies as usize));
        }
        Ok(CobordismProfile {
            incoming: vec![p],
            outgoing,
            b1: 0,
            b_plus: 0,
            quotient_group: None,
        })
    }

    pub fn with_group(mut self, group: FiniteAbelianGroup) -> Self {
        self.quotient_group = Some(group);
        self
    }

    pub fn validate(&self, registry: &Registry) -> Result<(), LedgerError> {
        if self.b1 != 0 {
            return Err(LedgerError::NonZeroB1(self.b1));
        }
        if self.b_plus != 0 {
            return Err(LedgerError::NonZeroBPlus(self.b_plus));
        }
        for atom in self.incoming.iter().chain(&self.outgoing) {
            if !registry.lookup(atom)?.is_two_torsion() {
                return Err(LedgerError::NotTwoTorsion(atom.to_string()));
            }
        }
        Ok(())
    }

    /// The single incoming atom, which must be `+P`.
    pub fn incoming_poincare(&self) -> Result<&Atom, LedgerError> {
        match self.incoming.as_slice() {
            [a] if *a == Atom::poincare() => Ok(a),
            [] => Err(LedgerError::NoIncomingP),
            other => Err(LedgerError::UnsupportedIncoming(
                other.iter().map(Atom::to_string).collect::<Vec<_>>().join(", "),
            )),
        }
    }
}

/// Index contributions entering the dimension count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexConstants {
    /// Index of the cylinder factor from the minimal irreducible on `P` down
    /// to the trivial connection.
    pub incoming_cylinder: i64,
    pub stabilizer: i64,
    pub reducible: i64,
}

impl Default for IndexConstants {
    fn default() -> Self {
        IndexConstants {
            incoming_cylinder: 1,
            stabilizer: CENTRAL_STABILIZER_DIM,
            reducible: REDUCIBLE_INDEX,
        }
    }
}

pub fn moduli_dimension(registry: &Registry, profile: &CobordismProfile) -> Result<i64, LedgerError> {
    moduli_dimension_with(registry, profile, &IndexConstants::default())
}

/// `ind(B) + 3 + ind(Θ)` for the component containing the glued
/// configurations `B # Θ`.
pub fn moduli_dimension_with(
    registry: &Registry,
    profile: &CobordismProfile,
    constants: &IndexConstants,
) -> Result<i64, LedgerError> {
    profile.validate(registry)?;
    profile.incoming_poincare()?;
    Ok(constants.incoming_cylinder + constants.stabilizer + constants.reducible)
}

#[cfg(test)]
pub(crate) fn octahedral(orientation: Orientation) -> Atom {
    Atom::named("O", orientation)
}
