//! Broken-trajectory end patterns of a low-dimensional instanton moduli space.
//!
//! A limit `(B₁, …, Bₙ, A, C₁, …, Cₘ)` has `n` incoming-cylinder factors, one
//! factor `A` on the cobordism and `m` outgoing-cylinder factors. With `r` of
//! the intermediate flat limits reducible, the indices satisfy
//!
//! ```text
//! Σ ind(Bᵢ) + ind(A) + 3r + Σ ind(Cⱼ) = total
//! ```
//!
//! and, since every cylinder factor has index at least 1,
//! `total ≥ n + m + 3r + ind(A)`. `ind(A)` is either `−3` (flat reducible) or
//! non-negative (irreducible).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::LedgerError;

/// Index of the ASD operator at a flat reducible on the cobordism.
pub const REDUCIBLE_INDEX: i64 = -3;
/// Dimension of the stabilizer of a central intermediate flat connection.
pub const CENTRAL_STABILIZER_DIM: i64 = 3;
pub const MAX_TOTAL_INDEX: i64 = 8;

/// Optional constraints on end patterns beyond the index identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    /// A flat reducible `A` is central at its incoming end, which therefore
    /// is an intermediate limit: `ind(A) = −3` forces `r ≥ 1` and `n ≥ 1`.
    pub reducible_intermediate: bool,
    /// Require `r ≤ n`; off by default.
    pub reducibles_incoming_only: bool,
}

impl RuleSet {
    pub fn standard() -> Self {
        RuleSet {
            reducible_intermediate: true,
            reducibles_incoming_only: false,
        }
    }

    pub fn relaxed() -> Self {
        RuleSet {
            reducible_intermediate: false,
            reducibles_incoming_only: false,
        }
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::standard()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EndPattern {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    pub ind_a: i64,
    /// Indices of the `Bᵢ`, sorted ascending.
    pub b_indices: Vec<i64>,
    /// Indices of the `Cⱼ`, sorted ascending.
    pub c_indices: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndType {
    /// Incoming cylinder instanton glued to an irreducible on the cobordism.
    IncomingCylinder,
    /// Irreducible on the cobordism glued to an outgoing cylinder instanton.
    OutgoingCylinder,
    /// Incoming cylinder instanton glued to a flat reducible.
    ReducibleGluing,
    Other,
}

impl fmt::Display for EndType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndType::IncomingCylinder => "(i) incoming cylinder",
            EndType::OutgoingCylinder => "(ii) outgoing cylinder",
            EndType::ReducibleGluing => "(iii) reducible gluing",
            EndType::Other => "other",
        })
    }
}

impl EndPattern {
    pub fn total_index(&self) -> i64 {
        self.b_indices.iter().sum::<i64>()
            + self.ind_a
            + CENTRAL_STABILIZER_DIM * self.r as i64
            + self.c_indices.iter().sum::<i64>()
    }

    pub fn end_type(&self) -> EndType {
        match (self.n, self.m, self.r, self.ind_a) {
            (1, 0, 0, a) if a >= 0 => EndType::IncomingCylinder,
            (0, 1, 0, a) if a >= 0 => EndType::OutgoingCylinder,
            (1, 0, 1, REDUCIBLE_INDEX) => EndType::ReducibleGluing,
            _ => EndType::Other,
        }
    }

    /// Checks the structural identities every pattern must satisfy.
    pub fn is_consistent(&self, total: i64) -> bool {
        self.b_indices.len() == self.n as usize
            && self.c_indices.len() == self.m as usize
            && self.b_indices.iter().chain(&self.c_indices).all(|&i| i >= 1)
            && self.total_index() == total
            && total >= (self.n + self.m) as i64 + CENTRAL_STABILIZER_DIM * self.r as i64 + self.ind_a
            && self.r <= self.n + self.m
            && (self.n, self.m, self.r) != (0, 0, 0)
            && (self.ind_a == REDUCIBLE_INDEX || self.ind_a >= 0)
    }
}

impl fmt::Display for EndPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={} r={} ind(A)={} ind(B)={:?} ind(C)={:?}",
            self.n, self.m, self.r, self.ind_a, self.b_indices, self.c_indices
        )
    }
}

/// Every end pattern of the given total index allowed by `rules`, without
/// duplicates and sorted lexicographically.
pub fn classify_end_patterns(total: i64, rules: RuleSet) -> Result<Vec<EndPattern>, LedgerError> {
    if total > MAX_TOTAL_INDEX {
        return Err(LedgerError::IndexTooLarge(total));
    }
    let mut out = Vec::new();
    let a_values = std::iter::once(REDUCIBLE_INDEX).chain(0..=total.max(-1));
    for ind_a in a_values {
        for r in 0u32.. {
            let budget = total - ind_a - CENTRAL_STABILIZER_DIM * r as i64;
            if budget < 0 {
                break;
            }
            for n in 0..=budget as u32 {
                for m in 0..=(budget as u32 - n) {
                    if n + m == 0 || r > n + m {
                        continue;
                    }
                    if rules.reducible_intermediate && ind_a == REDUCIBLE_INDEX && (r == 0 || n == 0) {
                        continue;
                    }
                    if rules.reducibles_incoming_only && r > n {
                        continue;
                    }
                    for b_sum in n as i64..=budget - m as i64 {
                        if n == 0 && b_sum != 0 {
                            continue;
                        }
                        let c_sum = budget - b_sum;
                        if m == 0 && c_sum != 0 {
                            continue;
                        }
                        for b in partitions(b_sum, n) {
                            for c in partitions(c_sum, m) {
                                out.push(EndPattern {
                                    n,
                                    m,
                                    r,
                                    ind_a,
                                    b_indices: b.clone(),
                                    c_indices: c,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Partitions of `sum` into exactly `parts` positive integers, each listed in
/// ascending order.
fn partitions(sum: i64, parts: u32) -> Vec<Vec<i64>> {
    fn go(sum: i64, parts: u32, min: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 0 {
            if sum == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut v = min;
        while v * parts as i64 <= sum {
            prefix.push(v);
            go(sum - v, parts - 1, v, prefix, out);
            prefix.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    go(sum, parts, 1, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: &EndPattern) -> (u32, u32, u32, i64) {
        (p.n, p.m, p.r, p.ind_a)
    }

    #[test]
    fn dimension_one_standard_rules() {
        let pats = classify_end_patterns(1, RuleSet::standard()).unwrap();
        let sigs: Vec<_> = pats.iter().map(sig).collect();
        assert_eq!(sigs, vec![(0, 1, 0, 0), (1, 0, 0, 0), (1, 0, 1, -3)]);
        assert_eq!(pats[0].c_indices, vec![1]);
        assert_eq!(pats[1].b_indices, vec![1]);
        assert_eq!(pats[2].b_indices, vec![1]);
        let types: Vec<_> = pats.iter().map(EndPattern::end_type).collect();
        assert_eq!(
            types,
            vec![
                EndType::OutgoingCylinder,
                EndType::IncomingCylinder,
                EndType::ReducibleGluing
            ]
        );
    }

    #[test]
    fn relaxed_rules_admit_spurious_patterns() {
        let strict = classify_end_patterns(1, RuleSet::standard()).unwrap();
        let relaxed = classify_end_patterns(1, RuleSet::relaxed()).unwrap();
        assert!(strict.iter().all(|p| relaxed.contains(p)));
        assert!(relaxed.len() > strict.len());
        let spurious = EndPattern {
            n: 1,
            m: 0,
            r: 0,
            ind_a: -3,
            b_indices: vec![4],
            c_indices: vec![],
        };
        assert!(relaxed.contains(&spurious));
        assert!(!strict.contains(&spurious));
    }

    #[test]
    fn dimension_zero_has_no_ends() {
        assert!(classify_end_patterns(0, RuleSet::standard()).unwrap().is_empty());
    }

    #[test]
    fn large_index_rejected() {
        assert_eq!(
            classify_end_patterns(9, RuleSet::standard()),
            Err(LedgerError::IndexTooLarge(9))
        );
    }

    #[test]
    fn every_pattern_is_consistent() {
        for total in -3..=MAX_TOTAL_INDEX {
            for rules in [RuleSet::standard(), RuleSet::relaxed()] {
                for p in classify_end_patterns(total, rules).unwrap() {
                    assert!(p.is_consistent(total), "{p} at {total}");
                }
            }
        }
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions(4, 2), vec![vec![1, 3], vec![2, 2]]);
        assert_eq!(partitions(0, 0), vec![Vec::<i64>::new()]);
        assert!(partitions(1, 2).is_empty());
    }
}
