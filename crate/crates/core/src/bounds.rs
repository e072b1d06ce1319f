//! Upper bounds for `d²(x, M)` computed from raw inner products.
//!
//! The unconditional bounds all have the shape `‖x‖² − Σ|⟨x,x_i⟩|² / C`
//! where `C ≥ ‖Σ β_i x_i‖² / Σ|β_i|²` is a constant of the system obtained
//! from a Cauchy–Schwarz-type estimate. The interval bounds assume
//! `Re⟨Σ Γ_i x_i − x, x − Σ γ_i x_i⟩ ≥ 0`.
//!
//! None of these evaluate the exact distance; the exact value enters only in
//! [`full_bound_report`] to measure slack.

use std::fmt;

use crate::distance::{exact_distance, orthogonal_by_coefficients};
use crate::error::{Error, Result};
use crate::gram::{GramStats, VectorSystem};
use crate::scalar::{check_coefficient, linear_combination, norm_sq, Scalar, ToleranceConfig, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundMethod {
    /// Constant `Σ ‖x_i‖²`; strict for `n ≥ 2`.
    SumNorms,
    /// Constant `max ‖x_i‖² + (Σ_{i≠j} |⟨x_i,x_j⟩|²)^{1/2}`.
    BoasBellman,
    /// Constant `max ‖x_i‖² + (n − 1) max_{i≠j} |⟨x_i,x_j⟩|`.
    MaxOffDiagonal,
    /// Constant `max_i Σ_j |⟨x_i,x_j⟩|`.
    Bombieri,
    /// Constant `(Σ_{i,j} |⟨x_i,x_j⟩|²)^{1/2}`.
    Frobenius,
    /// `¼ ‖Σ (Γ_i − γ_i) x_i‖²`.
    Interval,
    /// `¼ Σ |Γ_i − γ_i|² · [max ‖x_i‖² + (n − 1) max |⟨x_i,x_j⟩|]`.
    IntervalMaxOffDiagonal,
    /// `¼ Σ |Γ_i − γ_i|² · [max ‖x_i‖² + (Σ_{i≠j} |⟨x_i,x_j⟩|²)^{1/2}]`.
    IntervalBoasBellman,
    /// `¼ Σ |Γ_i − γ_i|² · max_i Σ_j |⟨x_i,x_j⟩|`.
    IntervalBombieri,
}

impl BoundMethod {
    pub const UNCONDITIONAL: [BoundMethod; 5] = [
        BoundMethod::SumNorms,
        BoundMethod::BoasBellman,
        BoundMethod::MaxOffDiagonal,
        BoundMethod::Bombieri,
        BoundMethod::Frobenius,
    ];

    pub const RELAXED_INTERVAL: [BoundMethod; 3] = [
        BoundMethod::IntervalMaxOffDiagonal,
        BoundMethod::IntervalBoasBellman,
        BoundMethod::IntervalBombieri,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::SumNorms => "sum-norms",
            BoundMethod::BoasBellman => "boas-bellman",
            BoundMethod::MaxOffDiagonal => "max-off-diagonal",
            BoundMethod::Bombieri => "bombieri",
            BoundMethod::Frobenius => "frobenius",
            BoundMethod::Interval => "interval",
            BoundMethod::IntervalMaxOffDiagonal => "interval-max-off-diagonal",
            BoundMethod::IntervalBoasBellman => "interval-boas-bellman",
            BoundMethod::IntervalBombieri => "interval-bombieri",
        }
    }

    pub fn is_conditional(self) -> bool {
        self >= BoundMethod::Interval
    }

    /// The system constant `C` the method is built on, if any.
    pub fn system_constant(self, stats: &GramStats) -> Option<f64> {
        Some(match self {
            BoundMethod::SumNorms => stats.sum_norms(),
            BoundMethod::BoasBellman | BoundMethod::IntervalBoasBellman => stats.boas_bellman(),
            BoundMethod::MaxOffDiagonal | BoundMethod::IntervalMaxOffDiagonal => stats.max_off_diagonal(),
            BoundMethod::Bombieri | BoundMethod::IntervalBombieri => stats.bombieri(),
            BoundMethod::Frobenius => stats.frobenius(),
            BoundMethod::Interval => return None,
        })
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lower and upper coefficient data `γ_i`, `Γ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalData {
    pub lower: Vec<Scalar>,
    pub upper: Vec<Scalar>,
}

impl IntervalData {
    pub fn new(lower: Vec<Scalar>, upper: Vec<Scalar>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::LengthMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        Ok(IntervalData { lower, upper })
    }

    pub fn real(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let s = |v: &[f64]| v.iter().map(|&r| Scalar::new(r, 0.0)).collect();
        Self::new(s(lower), s(upper))
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn widths(&self) -> Vec<Scalar> {
        self.upper.iter().zip(&self.lower).map(|(u, l)| u - l).collect()
    }

    pub fn midpoints(&self) -> Vec<Scalar> {
        self.upper.iter().zip(&self.lower).map(|(u, l)| (u + l) * 0.5).collect()
    }

    fn check(&self, system: &VectorSystem) -> Result<()> {
        if self.len() != system.len() {
            return Err(Error::LengthMismatch {
                expected: system.len(),
                found: self.len(),
            });
        }
        for (i, c) in self.lower.iter().chain(&self.upper).enumerate() {
            check_coefficient(system.field(), *c, i)?;
        }
        Ok(())
    }
}

fn check_bound_hypotheses(system: &VectorSystem, x: &Vector, beta: &[Scalar]) -> Result<()> {
    system.require_independent()?;
    if x.is_zero() || orthogonal_by_coefficients(beta, system, x, system.tolerance()) {
        let max_coefficient = beta.iter().map(|b| b.norm()).fold(0.0, f64::max);
        return Err(Error::InOrthogonalComplement { max_coefficient });
    }
    Ok(())
}

/// `‖x‖² − Σ|⟨x,x_i⟩|² / C` for one of the unconditional methods.
pub fn distance_bound(system: &VectorSystem, x: &Vector, method: BoundMethod) -> Result<f64> {
    let constant = method
        .system_constant(&system.gram().stats())
        .filter(|_| !method.is_conditional())
        .ok_or_else(|| Error::Numerical(format!("{method} needs interval data")))?;
    let beta = system.coefficients(x)?;
    check_bound_hypotheses(system, x, &beta)?;
    let s: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
    Ok(norm_sq(x) - s / constant)
}

pub fn bound_sum_norms(system: &VectorSystem, x: &Vector) -> Result<f64> {
    distance_bound(system, x, BoundMethod::SumNorms)
}

pub fn bound_boas_bellman(system: &VectorSystem, x: &Vector) -> Result<f64> {
    distance_bound(system, x, BoundMethod::BoasBellman)
}

pub fn bound_max_off_diagonal(system: &VectorSystem, x: &Vector) -> Result<f64> {
    distance_bound(system, x, BoundMethod::MaxOffDiagonal)
}

pub fn bound_bombieri(system: &VectorSystem, x: &Vector) -> Result<f64> {
    distance_bound(system, x, BoundMethod::Bombieri)
}

pub fn bound_frobenius(system: &VectorSystem, x: &Vector) -> Result<f64> {
    distance_bound(system, x, BoundMethod::Frobenius)
}

/// `Σ |⟨x, x_i⟩|²`.
pub fn bessel_sum(system: &VectorSystem, x: &Vector) -> Result<f64> {
    Ok(system.coefficients(x)?.iter().map(|b| b.norm_sqr()).sum())
}

/// Right-hand side `‖x‖² · C` of a Bessel-type inequality; valid for
/// arbitrary (even dependent) systems.
fn bessel_rhs(system: &VectorSystem, x: &Vector, constant: impl Fn(&GramStats) -> f64) -> Result<f64> {
    system.coefficients(x)?;
    Ok(norm_sq(x) * constant(&system.gram().stats()))
}

/// `‖x‖² [max ‖x_i‖² + (Σ_{i≠j} |⟨x_i,x_j⟩|²)^{1/2}]`.
pub fn boas_bellman_rhs(system: &VectorSystem, x: &Vector) -> Result<f64> {
    bessel_rhs(system, x, GramStats::boas_bellman)
}

/// `‖x‖² [max ‖x_i‖² + (n − 1) max_{i≠j} |⟨x_i,x_j⟩|]`.
pub fn max_off_diagonal_rhs(system: &VectorSystem, x: &Vector) -> Result<f64> {
    bessel_rhs(system, x, GramStats::max_off_diagonal)
}

/// `‖x‖² max_i Σ_j |⟨x_i,x_j⟩|`.
pub fn bombieri_rhs(system: &VectorSystem, x: &Vector) -> Result<f64> {
    bessel_rhs(system, x, GramStats::bombieri)
}

/// Both equivalent forms of the interval condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalCondition {
    /// `Re⟨Σ Γ_i x_i − x, x − Σ γ_i x_i⟩`.
    pub inner: f64,
    /// `‖x − Σ (Γ_i + γ_i)/2 · x_i‖²`.
    pub center_dist_sq: f64,
    /// `¼ ‖Σ (Γ_i − γ_i) x_i‖²`.
    pub radius_sq: f64,
    pub holds_inner: bool,
    pub holds_ball: bool,
    /// The two verdicts coincide, or differ only inside the tolerance band.
    pub forms_agree: bool,
}

impl IntervalCondition {
    pub fn holds(&self) -> bool {
        self.holds_inner && self.holds_ball
    }

    fn into_error(self) -> Error {
        Error::ConditionViolated {
            inner: self.inner,
            center_dist_sq: self.center_dist_sq,
            radius_sq: self.radius_sq,
        }
    }
}

pub fn condition_holds(system: &VectorSystem, x: &Vector, iv: &IntervalData) -> Result<IntervalCondition> {
    iv.check(system)?;
    system.coefficients(x)?;
    let upper = linear_combination(&iv.upper, system.vectors())?;
    let lower = linear_combination(&iv.lower, system.vectors())?;
    let center = linear_combination(&iv.midpoints(), system.vectors())?;
    let spread = linear_combination(&iv.widths(), system.vectors())?;

    let a = upper.sub(x)?;
    let b = x.sub(&lower)?;
    let inner = crate::scalar::inner_product(&a, &b)?.re;
    let center_dist_sq = norm_sq(&x.sub(&center)?);
    let radius_sq = 0.25 * norm_sq(&spread);

    let scale = norm_sq(x).max(norm_sq(&upper)).max(norm_sq(&lower));
    let slack = system.tolerance().compare_rel_tol * scale;
    let holds_inner = inner >= -slack;
    let holds_ball = center_dist_sq <= radius_sq + slack;
    let forms_agree = holds_inner == holds_ball || (inner - (radius_sq - center_dist_sq)).abs() <= slack;
    Ok(IntervalCondition {
        inner,
        center_dist_sq,
        radius_sq,
        holds_inner,
        holds_ball,
        forms_agree,
    })
}

/// `¼ ‖Σ (Γ_i − γ_i) x_i‖²`, provided the interval condition holds.
pub fn bound_interval(system: &VectorSystem, x: &Vector, iv: &IntervalData) -> Result<f64> {
    let cond = condition_holds(system, x, iv)?;
    if !cond.holds() {
        return Err(cond.into_error());
    }
    Ok(cond.radius_sq)
}

/// `¼ Σ |Γ_i − γ_i|² · C` for one of the relaxed interval methods.
pub fn bound_interval_relaxed(
    system: &VectorSystem,
    x: &Vector,
    iv: &IntervalData,
    method: BoundMethod,
) -> Result<f64> {
    if !BoundMethod::RELAXED_INTERVAL.contains(&method) {
        return Err(Error::Numerical(format!("{method} is not a relaxed interval bound")));
    }
    let cond = condition_holds(system, x, iv)?;
    if !cond.holds() {
        return Err(cond.into_error());
    }
    let widths: f64 = iv.widths().iter().map(|w| w.norm_sqr()).sum();
    let constant = method.system_constant(&system.gram().stats()).unwrap_or_default();
    Ok(0.25 * widths * constant)
}

/// Both sides of `0 ≤ ‖x‖² − Σ|⟨x,e_i⟩|² ≤ ¼ Σ |Φ_i − φ_i|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverseBesselVerdict {
    pub bessel_gap: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Reverse Bessel inequality for an orthonormal system under
/// `‖x − Σ (φ_i + Φ_i)/2 · e_i‖ ≤ ½ (Σ |Φ_i − φ_i|²)^{1/2}`.
pub fn reverse_bessel(system: &VectorSystem, x: &Vector, iv: &IntervalData) -> Result<ReverseBesselVerdict> {
    system.require_orthonormal()?;
    iv.check(system)?;
    let tol = system.tolerance().compare_rel_tol;
    let center = linear_combination(&iv.midpoints(), system.vectors())?;
    let dist = norm_sq(&x.sub(&center)?).sqrt();
    let widths: f64 = iv.widths().iter().map(|w| w.norm_sqr()).sum();
    let radius = 0.5 * widths.sqrt();
    let nx = norm_sq(x);
    if dist > radius + tol * nx.sqrt().max(radius) {
        return Err(Error::ConditionViolated {
            inner: radius * radius - dist * dist,
            center_dist_sq: dist * dist,
            radius_sq: radius * radius,
        });
    }
    let bessel_gap = nx - bessel_sum(system, x)?;
    let bound = 0.25 * widths;
    let slack = tol * nx.max(bound);
    Ok(ReverseBesselVerdict {
        bessel_gap,
        bound,
        holds: bessel_gap >= -slack && bessel_gap <= bound + slack,
    })
}

/// One row of a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEntry {
    pub method: BoundMethod,
    pub value: f64,
    /// `value − exact_d2`.
    pub slack: f64,
    /// `exact_d2 / value`, with `0/0 = 1`.
    pub tightness: f64,
    /// The bound is known to be strict on this instance.
    pub strict_expected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub exact_d2: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, method: BoundMethod) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.method == method)
    }

    /// Every slack is at least `−compare_rel_tol · (1 + exact_d2)`.
    pub fn all_dominate(&self, tol: &ToleranceConfig) -> bool {
        self.entries
            .iter()
            .all(|e| e.slack >= -tol.compare_rel_tol * (1.0 + self.exact_d2))
    }
}

pub fn tightness(exact: f64, value: f64) -> f64 {
    if value == 0.0 && exact == 0.0 {
        1.0
    } else {
        exact / value
    }
}

/// Exact distance together with every applicable bound, ordered by
/// [`BoundMethod`]. Interval bounds are appended only when `iv` is given and
/// the interval condition holds.
pub fn full_bound_report(
    system: &VectorSystem,
    x: &Vector,
    iv: Option<&IntervalData>,
    tol: &ToleranceConfig,
) -> Result<BoundReport> {
    let exact = exact_distance(system, x, tol)?.d2();
    let entry = |method: BoundMethod, value: f64| BoundEntry {
        method,
        value,
        slack: value - exact,
        tightness: tightness(exact, value),
        strict_expected: method == BoundMethod::SumNorms && system.len() >= 2,
    };
    let mut entries = Vec::with_capacity(9);
    for method in BoundMethod::UNCONDITIONAL {
        entries.push(entry(method, distance_bound(system, x, method)?));
    }
    if let Some(iv) = iv {
        if condition_holds(system, x, iv)?.holds() {
            entries.push(entry(BoundMethod::Interval, bound_interval(system, x, iv)?));
            for method in BoundMethod::RELAXED_INTERVAL {
                entries.push(entry(method, bound_interval_relaxed(system, x, iv, method)?));
            }
        }
    }
    Ok(BoundReport {
        exact_d2: exact,
        entries,
    })
}
