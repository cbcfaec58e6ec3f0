//! Finite abelian groups in invariant-factor normal form.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cyclic factor of order 0 (infinite) is not allowed")]
    InfiniteFactor,
    #[error("group order overflows u64")]
    Overflow,
}

/// `ℤ/d₁ ⊕ … ⊕ ℤ/dₙ` with `2 ≤ d₁ | d₂ | … | dₙ`. The empty list is the
/// trivial group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::from_cyclic_orders(&[n])
    }

    /// Normalizes an arbitrary direct sum of cyclic groups. Orders equal to 1
    /// are dropped; coprime pieces are merged through their primary parts.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self, GroupError> {
        if orders.contains(&0) {
            return Err(GroupError::InfiniteFactor);
        }
        // prime -> exponents, one per cyclic summand containing that prime
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in orders {
            for (p, e) in factorize(n) {
                primary.entry(p).or_default().push(e);
            }
        }
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, mut exps) in primary {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // largest exponent goes to the last (largest) invariant factor
            for (slot, e) in factors.iter_mut().rev().zip(exps) {
                let pe = p.checked_pow(e).ok_or(GroupError::Overflow)?;
                *slot = slot.checked_mul(pe).ok_or(GroupError::Overflow)?;
            }
        }
        factors.retain(|&d| d > 1);
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when the group is `(ℤ/2)^a` for some `a ≥ 0`.
    pub fn is_two_torsion(&self) -> bool {
        self.factors.iter().all(|&d| d == 2)
    }

    /// Iterates all elements as residue tuples, lexicographically.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = self.order();
        (0..total).map(move |mut idx| {
            let mut label = vec![0u64; self.factors.len()];
            for (slot, &d) in label.iter_mut().zip(&self.factors).rev() {
                *slot = idx % d;
                idx /= d;
            }
            label
        })
    }

    pub fn direct_sum(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut orders = self.factors.clone();
        orders.extend_from_slice(&other.factors);
        Self::from_cyclic_orders(&orders).expect("sum of finite groups is finite")
    }
}

/// Homomorphism counts `(|Hom(G, S¹)|, |Hom(G, {±1})|)`.
///
/// By Pontryagin duality the first equals `|G|`; a character into `{±1}` is a
/// choice of sign on each generator of even order.
pub fn hom_counts(group: &FiniteAbelianGroup) -> (u64, u64) {
    let even = group.factors.iter().filter(|&&d| d % 2 == 0).count() as u32;
    (group.order(), 1u64 << even)
}

impl TryFrom<Vec<u64>> for FiniteAbelianGroup {
    type Error = GroupError;
    fn try_from(v: Vec<u64>) -> Result<Self, GroupError> {
        Self::from_cyclic_orders(&v)
    }
}

impl From<FiniteAbelianGroup> for Vec<u64> {
    fn from(g: FiniteAbelianGroup) -> Vec<u64> {
        g.factors
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup({self})")
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
