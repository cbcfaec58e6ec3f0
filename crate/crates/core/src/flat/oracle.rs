//! Numeric search for irreducible SU(2) representations of Brieskorn sphere
//! groups.
//!
//! `π₁Σ(a₁,a₂,a₃) = ⟨x₁, x₂, x₃, h | h central, xᵢ^{aᵢ} h^{bᵢ} = 1, x₁x₂x₃ = 1⟩`
//! where `Σ bᵢ·(a₁a₂a₃/aᵢ) = 1`. The `bᵢ` are chosen odd, which is always
//! possible and fixes how rotation triples label representations.
//!
//! For each candidate triple the oracle puts `x₁` and `x₂` in the conjugacy
//! classes of angles `πl₁/a₁` and `πl₂/a₂`, bisects on the angle between
//! their axes until `x₁x₂` has angle `πl₃/a₃`, sets `x₃ = (x₁x₂)⁻¹`, and then
//! evaluates every relator for both choices `h = ±1`. Nothing about which
//! triples are admissible is assumed.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use super::quaternion::Quaternion;
use super::{chern_simons, RotationTriple};
use crate::exact::{mod_one, ModOne, Rational};
use crate::manifold::BrieskornParams;

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
pub const DEFAULT_SNAP_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_PQR: i64 = 2 * 3 * 13;

/// Relator residuals at or above this are a clean rejection; between the
/// acceptance tolerance and this value the triple is undecided.
const REJECT_RESIDUAL: f64 = 1e-3;
/// Minimum commutator norm for a solution to count as irreducible.
const IRREDUCIBLE_MIN: f64 = 1e-6;
const BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("pqr = {product} exceeds the oracle bound {bound}")]
    BoundExceeded { product: i64, bound: i64 },
    #[error("no odd Seifert invariants found for {0}")]
    NoSeifertInvariants(BrieskornParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub residual_tol: f64,
    pub snap_tol: f64,
    pub max_pqr: i64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            residual_tol: DEFAULT_RESIDUAL_TOL,
            snap_tol: DEFAULT_SNAP_TOL,
            max_pqr: DEFAULT_MAX_PQR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Accepted,
    Rejected,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub triple: RotationTriple,
    pub status: OracleStatus,
    /// Why a triple was rejected or left undecided.
    pub reason: Option<String>,
    /// Image of the central generator, when a solution was found.
    pub central_sign: Option<i8>,
    /// Rotation angles of `x₁, x₂, x₃` read back from the matrices.
    pub angles: Option<[f64; 3]>,
    pub axis_angle: Option<f64>,
    pub residual: Option<f64>,
    pub cs_approx: Option<f64>,
    pub cs: Option<ModOne>,
}

impl OracleOutcome {
    fn rejected(triple: RotationTriple, reason: impl Into<String>, residual: Option<f64>) -> Self {
        OracleOutcome {
            triple,
            status: OracleStatus::Rejected,
            reason: Some(reason.into()),
            central_sign: None,
            angles: None,
            axis_angle: None,
            residual,
            cs_approx: None,
            cs: None,
        }
    }
}

/// Odd `(b₁, b₂, b₃)` with `Σ bᵢ·(pqr/aᵢ) = 1`, smallest in max-norm.
pub fn odd_seifert_invariants(params: BrieskornParams) -> Option<[i64; 3]> {
    let a = params.as_array();
    let total = params.product();
    let c = a.map(|ai| total / ai);
    let mut best: Option<[i64; 3]> = None;
    let span = |x: i64| -2 * x..=2 * x;
    for b1 in span(a[0]) {
        for b2 in span(a[1]) {
            let rest = 1 - b1 * c[0] - b2 * c[1];
            if rest % c[2] != 0 {
                continue;
            }
            let b = [b1, b2, rest / c[2]];
            if b.iter().any(|x| x % 2 == 0) {
                continue;
            }
            let size = |v: &[i64; 3]| v.iter().map(|x| x.abs()).max().unwrap();
            if best.is_none_or(|cur| size(&b) < size(&cur)) {
                best = Some(b);
            }
        }
    }
    best
}

/// Runs the oracle over every in-bounds triple, in lexicographic order.
pub fn su2_oracle(params: BrieskornParams, config: &OracleConfig) -> Result<Vec<OracleOutcome>, OracleError> {
    if params.product() > config.max_pqr {
        return Err(OracleError::BoundExceeded {
            product: params.product(),
            bound: config.max_pqr,
        });
    }
    let b = odd_seifert_invariants(params).ok_or(OracleError::NoSeifertInvariants(params))?;
    Ok(RotationTriple::all(params)
        .into_iter()
        .map(|t| solve_triple(params, b, t, config))
        .collect())
}

/// Oracle verdict for one triple.
pub fn solve_triple(
    params: BrieskornParams,
    seifert: [i64; 3],
    triple: RotationTriple,
    config: &OracleConfig,
) -> OracleOutcome {
    let a = params.as_array();
    let l = triple.as_array();
    let theta: [f64; 3] = std::array::from_fn(|i| PI * l[i] as f64 / a[i] as f64);

    let Some(phi) = composing_axis_angle(theta) else {
        return OracleOutcome::rejected(triple, "no axis angle composes the conjugacy classes", None);
    };
    let x1 = Quaternion::from_axis_angle([1.0, 0.0, 0.0], theta[0]);
    let x2 = Quaternion::from_axis_angle([phi.cos(), phi.sin(), 0.0], theta[1]);
    let x3 = (x1 * x2).conj();

    let commutator = (x1 * x2).distance(x2 * x1);
    if commutator < IRREDUCIBLE_MIN {
        return OracleOutcome::rejected(triple, "solution is abelian", None);
    }

    let gens = [x1, x2, x3];
    let residual_for = |sign: f64| -> f64 {
        let h = Quaternion::scalar(sign);
        let mut worst = (x1 * x2 * x3).distance(Quaternion::ONE);
        for i in 0..3 {
            let hb = h.pow(seifert[i].unsigned_abs() as u32);
            let hb = if seifert[i] < 0 { hb.conj() } else { hb };
            let rel = gens[i].pow(a[i] as u32) * hb;
            worst = worst.max(rel.distance(Quaternion::ONE));
        }
        worst
    };
    let (sign, residual) = [1.0, -1.0]
        .into_iter()
        .map(|s| (s, residual_for(s)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("two signs");

    if residual >= REJECT_RESIDUAL {
        return OracleOutcome::rejected(triple, "relators fail for both central signs", Some(residual));
    }
    let angles = gens.map(Quaternion::angle);
    let mut out = OracleOutcome {
        triple,
        status: OracleStatus::Undecided,
        reason: None,
        central_sign: Some(sign as i8),
        angles: Some(angles),
        axis_angle: Some(phi),
        residual: Some(residual),
        cs_approx: None,
        cs: None,
    };
    if residual >= config.residual_tol {
        out.reason = Some(format!("relator residual {residual:e} above tolerance"));
        return out;
    }

    let approx = numeric_cs(params, angles);
    out.cs_approx = Some(approx);
    match snap(approx, 4 * params.product(), config.snap_tol) {
        Some(v) if v == chern_simons(params, triple) => {
            out.status = OracleStatus::Accepted;
            out.cs = Some(v);
        }
        Some(v) => out.reason = Some(format!("numeric CS snaps to {v}, formula disagrees")),
        None => out.reason = Some("numeric CS does not snap to the 1/4pqr lattice".into()),
    }
    out
}

/// Solves `cos θ₁cos θ₂ − sin θ₁ sin θ₂ cos φ = cos θ₃` for `φ ∈ [0, π]` by
/// bisection; `None` when the left side never reaches `cos θ₃`.
fn composing_axis_angle(theta: [f64; 3]) -> Option<f64> {
    let target = theta[2].cos();
    let trace = |phi: f64| {
        let x1 = Quaternion::from_axis_angle([1.0, 0.0, 0.0], theta[0]);
        let x2 = Quaternion::from_axis_angle([phi.cos(), phi.sin(), 0.0], theta[1]);
        (x1 * x2).w - target
    };
    let (mut lo, mut hi) = (0.0, PI);
    let (flo, fhi) = (trace(lo), trace(hi));
    if flo.signum() == fhi.signum() && flo != 0.0 && fhi != 0.0 {
        return None;
    }
    let increasing = fhi > flo;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let f = trace(mid);
        if (f < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Evaluates `(Σ lᵢ·pqr/aᵢ)² / 4pqr mod 1` with `lᵢ` recovered from the
/// measured rotation angles.
fn numeric_cs(params: BrieskornParams, angles: [f64; 3]) -> f64 {
    let a = params.as_array();
    let total = params.product() as f64;
    let e: f64 = (0..3)
        .map(|i| angles[i] * a[i] as f64 / PI * (total / a[i] as f64))
        .sum();
    let v = e * e / (4.0 * total);
    v - v.floor()
}

fn snap(value: f64, denom: i64, tol: f64) -> Option<ModOne> {
    let k = (value * denom as f64).round();
    let dist = (value - k / denom as f64).abs();
    (dist < tol).then(|| mod_one(&Rational::new(k as i64, denom)))
}
