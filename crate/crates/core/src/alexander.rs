//! Symmetrized Alexander polynomials of torus knots and their torsion
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::gcd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error("torus knot parameters must be positive, got T({0},{1})")]
    NonPositive(i64, i64),
    #[error("torus knot parameters must be coprime, got T({0},{1})")]
    NotCoprime(i64, i64),
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
}

/// A torus knot `T(p, q)` with `1 ≤ p ≤ q` coprime. Every `T(1, q)` is the
/// unknot and is stored as `T(1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusKnot {
    p: i64,
    q: i64,
}

impl TorusKnot {
    pub fn new(p: i64, q: i64) -> Result<Self, AlexanderError> {
        if p < 1 || q < 1 {
            return Err(AlexanderError::NonPositive(p, q));
        }
        if gcd(p, q) != 1 {
            return Err(AlexanderError::NotCoprime(p, q));
        }
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        if p == 1 {
            return Ok(TorusKnot { p: 1, q: 1 });
        }
        Ok(TorusKnot { p, q })
    }

    pub fn unknot() -> Self {
        TorusKnot { p: 1, q: 1 }
    }

    pub fn trefoil() -> Self {
        TorusKnot { p: 2, q: 3 }
    }

    pub fn params(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1
    }

    /// Seifert genus `(p−1)(q−1)/2`.
    pub fn genus(&self) -> i64 {
        (self.p - 1) * (self.q - 1) / 2
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.p, self.q)
    }
}

/// Laurent polynomial `Σ a_k t^k` with `a_k = a_{−k}` and value 1 at `t = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrizedAlexander {
    coefficients: BTreeMap<i64, i64>,
}

impl SymmetrizedAlexander {
    /// Builds from explicit coefficients; zero entries are dropped. Returns
    /// `None` unless the data is symmetric and evaluates to 1 at `t = 1`.
    pub fn from_coefficients(coefficients: BTreeMap<i64, i64>) -> Option<Self> {
        let coefficients: BTreeMap<i64, i64> = coefficients.into_iter().filter(|&(_, a)| a != 0).collect();
        let symmetric = coefficients.iter().all(|(&k, &a)| coefficients.get(&-k) == Some(&a));
        let at_one: i64 = coefficients.values().sum();
        (symmetric && at_one == 1).then_some(SymmetrizedAlexander { coefficients })
    }

    pub fn coefficient(&self, k: i64) -> i64 {
        self.coefficients.get(&k).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, i64> {
        &self.coefficients
    }

    /// Largest exponent with nonzero coefficient.
    pub fn degree(&self) -> i64 {
        self.coefficients.keys().next_back().copied().unwrap_or(0)
    }

    /// `t_i = Σ_{j≥1} j·a_{|i|+j}`.
    pub fn torsion_coefficient(&self, i: i64) -> i64 {
        let base = i.abs();
        self.coefficients.range(base + 1..).map(|(&k, &a)| (k - base) * a).sum()
    }

    /// Torsion coefficients `t_0, …, t_{degree}`; the last one is always 0.
    pub fn torsion_coefficients(&self) -> Vec<i64> {
        (0..=self.degree()).map(|i| self.torsion_coefficient(i)).collect()
    }
}

impl fmt::Display for SymmetrizedAlexander {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&k, &a) in &self.coefficients {
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let mag = a.unsigned_abs();
            let body = match (mag, mono.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => mono,
                (_, false) => format!("{mag}{mono}"),
            };
            match (first, a < 0) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Symmetrization of `(t^{pq} − 1)(t − 1) / ((t^p − 1)(t^q − 1))`.
pub fn torus_knot_alexander(knot: TorusKnot) -> Result<SymmetrizedAlexander, AlexanderError> {
    let (p, q) = (knot.p as usize, knot.q as usize);
    let numerator = poly_mul(&binomial(p * q), &binomial(1));
    let denominator = poly_mul(&binomial(p), &binomial(q));
    let quotient = exact_div(&numerator, &denominator)?;
    let shift = knot.genus();
    let coefficients = quotient
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(k, &a)| (k as i64 - shift, a))
        .collect();
    SymmetrizedAlexander::from_coefficients(coefficients).ok_or(AlexanderError::InexactDivision)
}

/// Dense coefficients of `t^n − 1`, lowest degree first.
fn binomial(n: usize) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    v[0] = -1;
    v[n] += 1;
    v
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Long division by a monic divisor; fails unless the remainder vanishes.
fn exact_div(num: &[i64], den: &[i64]) -> Result<Vec<i64>, AlexanderError> {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    if num.len() <= dd {
        return Err(AlexanderError::InexactDivision);
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(AlexanderError::InexactDivision);
    }
    Ok(quot)
}
