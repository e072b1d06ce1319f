//! Exact squared distance from a vector to `M = span{x_1, …, x_n}`.
//!
//! Three routes are provided:
//!
//! * the Gram-determinant ratio `Γ(x_1..x_n, x) / Γ(x_1..x_n)`;
//! * the quadratic form `‖x‖² − βᴴ G⁻¹ β` with `β_i = ⟨x, x_i⟩`;
//! * the one-dimensional projection estimate
//!   `‖x‖² − (Σ|β_i|²)² / ‖Σ β_i x_i‖²`.
//!
//! The last one is the squared distance from `x` to the line through
//! `y = Σ β_i x_i ∈ M`, since `⟨x, y⟩ = Σ |β_i|²`. It equals `d²(x, M)` when
//! `y` is the orthogonal projection of `x` (for instance, for orthonormal
//! systems) and is an upper estimate otherwise. The quadratic form is the
//! canonical value used everywhere else in the crate.

use crate::error::{Error, Result};
use crate::gram::{gram_determinant, VectorSystem};
use crate::scalar::{norm_sq, Scalar, ToleranceConfig, Vector};

/// Exact distance by each representation, with membership flags.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub d2_gram_ratio: f64,
    pub d2_quadratic: f64,
    pub d2_projection: f64,
    pub norm_sq: f64,
    pub in_orth_complement: bool,
    pub in_subspace: bool,
    /// `⟨x, x_i⟩` for each vector of the system.
    pub beta: Vec<Scalar>,
    /// Coefficients of the orthogonal projection `Σ c_i x_i`.
    pub projection_coeffs: Vec<Scalar>,
    /// Gram-ratio and quadratic-form values agree within tolerance.
    pub representations_agree: bool,
    /// The projection estimate coincides with the exact distance.
    pub projection_exact: bool,
    /// Disagreement on a well-conditioned Gram matrix, or a quadratic-form
    /// value outside `[0, ‖x‖²]` beyond tolerance.
    pub numerical_warning: bool,
}

impl DistanceResult {
    /// The canonical squared distance (quadratic form).
    pub fn d2(&self) -> f64 {
        self.d2_quadratic
    }
}

/// Gram condition number up to which representation disagreement is
/// reported as a numerical warning.
pub const WELL_CONDITIONED: f64 = 1e6;

/// `Γ(x_1, …, x_n, x) / Γ(x_1, …, x_n)`.
pub fn distance_sq_gram_ratio(system: &VectorSystem, x: &Vector) -> Result<f64> {
    system.require_independent()?;
    let augmented = system.augmented(x)?;
    Ok(gram_determinant(&augmented) / gram_determinant(system))
}

struct Quadratic {
    value: f64,
    coeffs: Vec<Scalar>,
    out_of_range: bool,
}

fn quadratic(system: &VectorSystem, x: &Vector) -> Result<Quadratic> {
    system.require_independent()?;
    let beta = system.coefficients(x)?;
    // G w = conj(β) gives w = conj(c) for the projection p = Σ c_i x_i.
    let rhs: Vec<Scalar> = beta.iter().map(Scalar::conj).collect();
    let w = system.factorization().solve(&rhs)?;
    let projected: f64 = beta.iter().zip(&w).map(|(b, w)| (b * w).re).sum();
    let nx = norm_sq(x);
    let raw = nx - projected;
    let slack = system.tolerance().compare_rel_tol * nx;
    let (value, out_of_range) = if raw < 0.0 {
        (0.0, raw < -slack)
    } else if raw > nx {
        (nx, raw > nx + slack)
    } else {
        (raw, false)
    };
    Ok(Quadratic {
        value: if out_of_range { raw } else { value },
        coeffs: w.iter().map(Scalar::conj).collect(),
        out_of_range,
    })
}

/// `‖x‖² − βᴴ G⁻¹ β`, solved through the pivoted factorization.
///
/// Values within `compare_rel_tol · ‖x‖²` outside `[0, ‖x‖²]` are clamped;
/// larger excursions are reported as [`Error::Numerical`].
pub fn distance_sq_quadratic(system: &VectorSystem, x: &Vector) -> Result<f64> {
    let q = quadratic(system, x)?;
    if q.out_of_range {
        return Err(Error::Numerical(format!(
            "quadratic-form distance {:e} outside [0, {:e}]",
            q.value,
            norm_sq(x)
        )));
    }
    Ok(q.value)
}

/// Max-norm orthogonality test `‖β‖∞ ≤ orth_rel_tol · ‖x‖ · max‖x_i‖`.
pub fn in_orthogonal_complement(system: &VectorSystem, x: &Vector, tol: &ToleranceConfig) -> Result<bool> {
    let beta = system.coefficients(x)?;
    Ok(orthogonal_by_coefficients(&beta, system, x, tol))
}

pub(crate) fn orthogonal_by_coefficients(
    beta: &[Scalar],
    system: &VectorSystem,
    x: &Vector,
    tol: &ToleranceConfig,
) -> bool {
    let max_beta = beta.iter().map(|b| b.norm()).fold(0.0, f64::max);
    max_beta <= tol.orth_rel_tol * norm_sq(x).sqrt() * system.max_norm()
}

/// Projection estimate; returns `‖x‖²` on the orthogonal-complement branch
/// and 0 for `x = 0`.
pub fn distance_sq_projection(system: &VectorSystem, x: &Vector, tol: &ToleranceConfig) -> Result<f64> {
    let beta = system.coefficients(x)?;
    if x.is_zero() {
        return Ok(0.0);
    }
    let nx = norm_sq(x);
    if orthogonal_by_coefficients(&beta, system, x, tol) {
        return Ok(nx);
    }
    let s: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
    let y = crate::scalar::linear_combination(&beta, system.vectors())?;
    Ok(nx - s * s / norm_sq(&y))
}

/// `‖x‖² − Σ |⟨x, x_i⟩|²` for orthonormal systems.
pub fn distance_sq_orthonormal(system: &VectorSystem, x: &Vector) -> Result<f64> {
    system.require_orthonormal()?;
    let beta = system.coefficients(x)?;
    let nx = norm_sq(x);
    let raw = nx - beta.iter().map(|b| b.norm_sqr()).sum::<f64>();
    let slack = system.tolerance().compare_rel_tol * nx;
    Ok(if raw < 0.0 && raw >= -slack { 0.0 } else { raw })
}

/// Computes all representations and cross-checks them.
pub fn exact_distance(system: &VectorSystem, x: &Vector, tol: &ToleranceConfig) -> Result<DistanceResult> {
    let q = quadratic(system, x)?;
    let beta = system.coefficients(x)?;
    let gram_ratio = distance_sq_gram_ratio(system, x)?;
    let projection = distance_sq_projection(system, x, tol)?;
    let nx = norm_sq(x);

    let agree_scale = tol.compare_rel_tol * (1.0 + q.value.abs()).max(nx);
    let representations_agree = (gram_ratio - q.value).abs() <= agree_scale;
    let projection_exact = (projection - q.value).abs() <= agree_scale;
    let in_orth_complement = !x.is_zero() && orthogonal_by_coefficients(&beta, system, x, tol);
    let in_subspace = x.is_zero() || q.value <= tol.compare_rel_tol * nx;

    let mut numerical_warning = q.out_of_range;
    if !representations_agree && system.gram().condition_number() <= WELL_CONDITIONED {
        numerical_warning = true;
    }
    if in_orth_complement && (q.value - nx).abs() > agree_scale {
        numerical_warning = true;
    }

    Ok(DistanceResult {
        d2_gram_ratio: gram_ratio,
        d2_quadratic: q.value,
        d2_projection: projection,
        norm_sq: nx,
        in_orth_complement,
        in_subspace,
        beta,
        projection_coeffs: q.coeffs,
        representations_agree,
        projection_exact,
        numerical_warning,
    })
}
