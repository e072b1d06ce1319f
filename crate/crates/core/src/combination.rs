//! Upper bounds for `‖Σ α_i z_i‖²` in terms of the coefficients and the
//! Gram matrix of `{z_i}`.
//!
//! Every bound splits `‖Σ α_i z_i‖² = Σ_{i,j} α_i conj(α_j) ⟨z_i, z_j⟩` into
//! a diagonal part and an off-diagonal part and estimates each. Aggregates
//! over empty off-diagonal index sets (`n = 1`) are 0.

use crate::error::{Error, Result};
use crate::gram::{GramStats, VectorSystem};
use crate::scalar::{linear_combination, norm_sq, norm_sq_coords, Scalar};

/// Estimate for the diagonal part `Σ |α_i|² ‖z_i‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagonalTerm {
    /// `max |α_i|² · Σ ‖z_i‖²`
    MaxCoefficient,
    /// `(Σ |α_i|^{2a})^{1/a} (Σ ‖z_i‖^{2b})^{1/b}` with `1/a + 1/b = 1`
    Holder(f64),
    /// `Σ |α_i|² · max ‖z_i‖²`
    MaxNorm,
}

/// Estimate for the off-diagonal part `Σ_{i≠j} |α_i| |α_j| |⟨z_i, z_j⟩|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffDiagonalTerm {
    /// `max_{i≠j} |α_i α_j| · Σ_{i≠j} |⟨z_i, z_j⟩|`
    MaxCoefficientProduct,
    /// `[(Σ |α_i|^c)² − Σ |α_i|^{2c}]^{1/c} (Σ_{i≠j} |⟨z_i, z_j⟩|^d)^{1/d}` with `1/c + 1/d = 1`
    Holder(f64),
    /// `[(Σ |α_i|)² − Σ |α_i|²] · max_{i≠j} |⟨z_i, z_j⟩|`
    MaxInnerProduct,
}

/// Relaxation of the row-sum bound `Σ_i |α_i|² Σ_j |⟨z_i, z_j⟩|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowSumRelaxation {
    /// `Σ |α_i|² · max_i Σ_j |⟨z_i, z_j⟩|`
    MaxRow,
    /// `(Σ |α_i|^{2p})^{1/p} (Σ_i (Σ_j |⟨z_i, z_j⟩|)^q)^{1/q}`
    Holder(f64),
    /// `max |α_i|² · Σ_{i,j} |⟨z_i, z_j⟩|`
    MaxCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CombinationMethod {
    /// `Σ |α_i|² · Σ ‖z_i‖²`
    CauchySchwarz,
    /// Any diagonal estimate added to any off-diagonal estimate.
    Split(DiagonalTerm, OffDiagonalTerm),
    /// `MaxNorm + MaxInnerProduct`, relaxed to `Σ|α_i|² (max‖z_i‖² + (n−1) max|⟨z_i,z_j⟩|)`.
    MaxInner,
    /// `MaxNorm + Holder(2)`, relaxed to `Σ|α_i|² (max‖z_i‖² + (Σ_{i≠j}|⟨z_i,z_j⟩|²)^{1/2})`.
    OffDiagonalFrobenius,
    /// `Σ_i |α_i|² Σ_j |⟨z_i, z_j⟩|` followed by the chosen relaxation.
    RowSum(RowSumRelaxation),
    /// `(Σ |α_i|^p)^{2/p} (Σ_{i,j} |⟨z_i, z_j⟩|^q)^{1/q}`.
    GramHolder(f64),
}

impl CombinationMethod {
    pub fn name(&self) -> String {
        fn diag(d: &DiagonalTerm) -> String {
            match d {
                DiagonalTerm::MaxCoefficient => "max-coefficient".into(),
                DiagonalTerm::Holder(a) => format!("holder({a})"),
                DiagonalTerm::MaxNorm => "max-norm".into(),
            }
        }
        fn off(o: &OffDiagonalTerm) -> String {
            match o {
                OffDiagonalTerm::MaxCoefficientProduct => "max-coefficient-product".into(),
                OffDiagonalTerm::Holder(c) => format!("holder({c})"),
                OffDiagonalTerm::MaxInnerProduct => "max-inner-product".into(),
            }
        }
        match self {
            CombinationMethod::CauchySchwarz => "cauchy-schwarz".into(),
            CombinationMethod::Split(d, o) => format!("split[{}+{}]", diag(d), off(o)),
            CombinationMethod::MaxInner => "max-inner".into(),
            CombinationMethod::OffDiagonalFrobenius => "off-diagonal-frobenius".into(),
            CombinationMethod::RowSum(RowSumRelaxation::MaxRow) => "row-sum[max-row]".into(),
            CombinationMethod::RowSum(RowSumRelaxation::Holder(p)) => format!("row-sum[holder({p})]"),
            CombinationMethod::RowSum(RowSumRelaxation::MaxCoefficient) => "row-sum[max-coefficient]".into(),
            CombinationMethod::GramHolder(p) => format!("gram-holder({p})"),
        }
    }
}

/// Outcome of one combination bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationBoundResult {
    pub method: CombinationMethod,
    /// `‖Σ α_i z_i‖²`, computed from coordinates.
    pub lhs: f64,
    /// The tighter bound.
    pub bound: f64,
    /// Coarser bound for methods with a two-step chain (`bound ≤ relaxed`).
    pub relaxed: Option<f64>,
    /// `lhs ≤ bound` and, when present, `bound ≤ relaxed`, both within the
    /// comparison tolerance.
    pub holds: bool,
}

/// Conjugate exponent `p / (p − 1)` of a finite `p > 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(p / (p - 1.0))
}

fn check_lengths(alphas: &[Scalar], zs: &VectorSystem) -> Result<()> {
    if alphas.len() != zs.len() {
        return Err(Error::LengthMismatch {
            expected: zs.len(),
            found: alphas.len(),
        });
    }
    Ok(())
}

/// `‖Σ α_i z_i‖²`.
pub fn combination_norm_sq(alphas: &[Scalar], zs: &VectorSystem) -> Result<f64> {
    check_lengths(alphas, zs)?;
    Ok(norm_sq(&linear_combination(alphas, zs.vectors())?))
}

/// `|LHS − RHS|` of
/// `Σ|α_i|² Σ‖z_i‖² − ‖Σ α_i z_i‖² = ½ Σ_{i,j} ‖conj(α_i) z_j − conj(α_j) z_i‖²`.
pub fn lagrange_identity_residual(alphas: &[Scalar], zs: &VectorSystem) -> Result<f64> {
    let lhs = cbs_product(alphas, zs) - combination_norm_sq(alphas, zs)?;
    let vs = zs.vectors();
    let mut rhs = 0.0;
    for (i, (ai, zi)) in alphas.iter().zip(vs).enumerate() {
        for (aj, zj) in alphas[i + 1..].iter().zip(&vs[i + 1..]) {
            // the (i, j) and (j, i) terms are equal
            let diff: Vec<Scalar> = zj
                .coords()
                .iter()
                .zip(zi.coords())
                .map(|(&b, &a)| ai.conj() * b - aj.conj() * a)
                .collect();
            rhs += norm_sq_coords(&diff);
        }
    }
    Ok((lhs - rhs).abs())
}

fn cbs_product(alphas: &[Scalar], zs: &VectorSystem) -> f64 {
    let a: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
    a * zs.gram().stats().sum_norm_sq
}

struct Coefficients {
    abs: Vec<f64>,
    sum_abs: f64,
    sum_sq: f64,
    max_sq: f64,
}

impl Coefficients {
    fn new(alphas: &[Scalar]) -> Self {
        let abs: Vec<f64> = alphas.iter().map(|a| a.norm()).collect();
        Coefficients {
            sum_abs: abs.iter().sum(),
            sum_sq: abs.iter().map(|a| a * a).sum(),
            max_sq: abs.iter().map(|a| a * a).fold(0.0, f64::max),
            abs,
        }
    }

    fn power_sum(&self, p: f64) -> f64 {
        self.abs.iter().map(|a| a.powf(p)).sum()
    }

    /// `max_{i≠j} |α_i| |α_j|`.
    fn max_pair_product(&self) -> f64 {
        let mut top = [0.0f64; 2];
        for &a in &self.abs {
            if a > top[0] {
                top = [a, top[0]];
            } else if a > top[1] {
                top[1] = a;
            }
        }
        if self.abs.len() < 2 {
            0.0
        } else {
            top[0] * top[1]
        }
    }
}

fn diagonal_term(term: DiagonalTerm, c: &Coefficients, zs: &VectorSystem, s: &GramStats) -> Result<f64> {
    Ok(match term {
        DiagonalTerm::MaxCoefficient => c.max_sq * s.sum_norm_sq,
        DiagonalTerm::Holder(a) => {
            let b = conjugate_exponent(a)?;
            let norms: f64 = zs.norms_sq().iter().map(|n| n.powf(b)).sum();
            c.power_sum(2.0 * a).powf(1.0 / a) * norms.powf(1.0 / b)
        }
        DiagonalTerm::MaxNorm => c.sum_sq * s.max_norm_sq,
    })
}

fn off_diagonal_term(term: OffDiagonalTerm, c: &Coefficients, zs: &VectorSystem, s: &GramStats) -> Result<f64> {
    Ok(match term {
        OffDiagonalTerm::MaxCoefficientProduct => c.max_pair_product() * s.off_diagonal_abs_sum,
        OffDiagonalTerm::Holder(gamma) => {
            let delta = conjugate_exponent(gamma)?;
            let sum = c.power_sum(gamma);
            let pairs = (sum * sum - c.power_sum(2.0 * gamma)).max(0.0);
            pairs.powf(1.0 / gamma) * off_diagonal_power_sum(zs, delta).powf(1.0 / delta)
        }
        OffDiagonalTerm::MaxInnerProduct => (c.sum_abs * c.sum_abs - c.sum_sq).max(0.0) * s.off_diagonal_max_abs,
    })
}

fn off_diagonal_power_sum(zs: &VectorSystem, q: f64) -> f64 {
    let g = zs.gram();
    let mut acc = 0.0;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if i != j {
                acc += g.get(i, j).norm().powf(q);
            }
        }
    }
    acc
}

fn finish(
    method: CombinationMethod,
    lhs: f64,
    bound: f64,
    relaxed: Option<f64>,
    compare_rel_tol: f64,
) -> CombinationBoundResult {
    let mut holds = lhs <= bound * (1.0 + compare_rel_tol);
    if let Some(r) = relaxed {
        holds &= bound <= r * (1.0 + compare_rel_tol);
    }
    CombinationBoundResult {
        method,
        lhs,
        bound,
        relaxed,
        holds,
    }
}

/// Evaluates any combination bound.
pub fn combination_bound(
    alphas: &[Scalar],
    zs: &VectorSystem,
    method: CombinationMethod,
) -> Result<CombinationBoundResult> {
    let lhs = combination_norm_sq(alphas, zs)?;
    let c = Coefficients::new(alphas);
    let s = zs.gram().stats();
    let n = zs.len() as f64;
    let tol = zs.tolerance().compare_rel_tol;

    let (bound, relaxed) = match method {
        CombinationMethod::CauchySchwarz => (c.sum_sq * s.sum_norm_sq, None),
        CombinationMethod::Split(d, o) => (diagonal_term(d, &c, zs, &s)? + off_diagonal_term(o, &c, zs, &s)?, None),
        CombinationMethod::MaxInner => {
            let tight = diagonal_term(DiagonalTerm::MaxNorm, &c, zs, &s)?
                + off_diagonal_term(OffDiagonalTerm::MaxInnerProduct, &c, zs, &s)?;
            let coarse = c.sum_sq * (s.max_norm_sq + (n - 1.0) * s.off_diagonal_max_abs);
            (tight, Some(coarse))
        }
        CombinationMethod::OffDiagonalFrobenius => {
            let pairs = (c.sum_sq * c.sum_sq - c.power_sum(4.0)).max(0.0);
            let off = s.off_diagonal_sq_sum.sqrt();
            let tight = s.max_norm_sq * c.sum_sq + pairs.sqrt() * off;
            let coarse = c.sum_sq * (s.max_norm_sq + off);
            (tight, Some(coarse))
        }
        CombinationMethod::RowSum(relaxation) => {
            let base: f64 = c.abs.iter().zip(&s.row_abs_sums).map(|(a, r)| a * a * r).sum();
            let relaxed = match relaxation {
                RowSumRelaxation::MaxRow => c.sum_sq * s.bombieri(),
                RowSumRelaxation::Holder(p) => {
                    let q = conjugate_exponent(p)?;
                    let rows: f64 = s.row_abs_sums.iter().map(|r| r.powf(q)).sum();
                    c.power_sum(2.0 * p).powf(1.0 / p) * rows.powf(1.0 / q)
                }
                RowSumRelaxation::MaxCoefficient => c.max_sq * s.total_abs_sum(),
            };
            (base, Some(relaxed))
        }
        CombinationMethod::GramHolder(p) => {
            let q = conjugate_exponent(p)?;
            let g = zs.gram();
            let mut entries = 0.0;
            for i in 0..g.n() {
                for j in 0..g.n() {
                    entries += g.get(i, j).norm().powf(q);
                }
            }
            (c.power_sum(p).powf(2.0 / p) * entries.powf(1.0 / q), None)
        }
    };
    Ok(finish(method, lhs, bound, relaxed, tol))
}

pub fn cbs_bound(alphas: &[Scalar], zs: &VectorSystem) -> Result<CombinationBoundResult> {
    combination_bound(alphas, zs, CombinationMethod::CauchySchwarz)
}

pub fn split_bound(
    alphas: &[Scalar],
    zs: &VectorSystem,
    diagonal: DiagonalTerm,
    off_diagonal: OffDiagonalTerm,
) -> Result<CombinationBoundResult> {
    combination_bound(alphas, zs, CombinationMethod::Split(diagonal, off_diagonal))
}

pub fn max_inner_bound(alphas: &[Scalar], zs: &VectorSystem) -> Result<CombinationBoundResult> {
    combination_bound(alphas, zs, CombinationMethod::MaxInner)
}

pub fn off_diagonal_frobenius_bound(alphas: &[Scalar], zs: &VectorSystem) -> Result<CombinationBoundResult> {
    combination_bound(alphas, zs, CombinationMethod::OffDiagonalFrobenius)
}

pub fn row_sum_bound(
    alphas: &[Scalar],
    zs: &VectorSystem,
    relaxation: RowSumRelaxation,
) -> Result<CombinationBoundResult> {
    combination_bound(alphas, zs, CombinationMethod::RowSum(relaxation))
}

pub fn gram_holder_bound(alphas: &[Scalar], zs: &VectorSystem, p: f64) -> Result<CombinationBoundResult> {
    combination_bound(alphas, zs, CombinationMethod::GramHolder(p))
}

/// The nine diagonal × off-diagonal combinations for the given exponents.
pub fn all_splits(diagonal_exponent: f64, off_diagonal_exponent: f64) -> Vec<CombinationMethod> {
    let diagonals = [
        DiagonalTerm::MaxCoefficient,
        DiagonalTerm::Holder(diagonal_exponent),
        DiagonalTerm::MaxNorm,
    ];
    let offs = [
        OffDiagonalTerm::MaxCoefficientProduct,
        OffDiagonalTerm::Holder(off_diagonal_exponent),
        OffDiagonalTerm::MaxInnerProduct,
    ];
    diagonals
        .iter()
        .flat_map(|&d| offs.iter().map(move |&o| CombinationMethod::Split(d, o)))
        .collect()
}
