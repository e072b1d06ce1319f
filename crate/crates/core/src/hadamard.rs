//! Refinements of Hadamard's inequality `Γ(x_1..x_n) ≤ Π ‖x_k‖²`.
//!
//! Each chain replaces the factor `‖x_k‖²` by `‖x_k‖² − S_k / C_{k−1}` where
//! `S_k = Σ_{i<k} |⟨x_k,x_i⟩|²` and `C_{k−1}` is a Bessel-type constant of the
//! leading `k − 1` vectors. Every factor still dominates `d²(x_k, span(x_1..x_{k−1}))`,
//! so the product stays above the Gram determinant. Chains depend on the
//! ordering of the vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::gram::{gram_determinant, pairwise_orthogonal, GramStats, VectorSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HadamardVariant {
    /// `C = Σ_{i<k} ‖x_i‖²`.
    SumNorms,
    /// `C = max_{i<k} ‖x_i‖² + (Σ_{i≠j<k} |⟨x_i,x_j⟩|²)^{1/2}`.
    BoasBellman,
    /// `C = max_{i<k} ‖x_i‖² + (k − 2) max_{i≠j<k} |⟨x_i,x_j⟩|`.
    MaxOffDiagonal,
    /// `C = max_{i<k} Σ_{j<k} |⟨x_i,x_j⟩|`.
    Bombieri,
}

impl HadamardVariant {
    pub const ALL: [HadamardVariant; 4] = [
        HadamardVariant::SumNorms,
        HadamardVariant::BoasBellman,
        HadamardVariant::MaxOffDiagonal,
        HadamardVariant::Bombieri,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HadamardVariant::SumNorms => "sum-norms",
            HadamardVariant::BoasBellman => "boas-bellman",
            HadamardVariant::MaxOffDiagonal => "max-off-diagonal",
            HadamardVariant::Bombieri => "bombieri",
        }
    }

    fn constant(self, prefix: &GramStats) -> f64 {
        match self {
            HadamardVariant::SumNorms => prefix.sum_norms(),
            HadamardVariant::BoasBellman => prefix.boas_bellman(),
            HadamardVariant::MaxOffDiagonal => prefix.max_off_diagonal(),
            HadamardVariant::Bombieri => prefix.bombieri(),
        }
    }
}

impl fmt::Display for HadamardVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for HadamardVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        HadamardVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown Hadamard variant '{s}'"))
    }
}

/// `gamma ≤ refined ≤ hadamard`.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardChainResult {
    pub variant: HadamardVariant,
    /// Gram determinant of the system.
    pub gamma: f64,
    /// `‖x_1‖² Π_{k≥2} per_step_factors[k−2]`.
    pub refined: f64,
    /// `Π ‖x_k‖²`.
    pub hadamard: f64,
    pub per_step_factors: Vec<f64>,
    /// Some step factor went negative beyond tolerance and was clamped to 0.
    pub numerical_warning: bool,
}

impl HadamardChainResult {
    /// Both inequalities of the chain hold up to `rel_tol`.
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.gamma <= self.refined * (1.0 + rel_tol) && self.refined <= self.hadamard * (1.0 + rel_tol)
    }
}

pub fn hadamard_chain(system: &VectorSystem, variant: HadamardVariant) -> Result<HadamardChainResult> {
    if system.len() < 2 {
        return Err(Error::TooFewVectors {
            required: 2,
            found: system.len(),
        });
    }
    system.require_independent()?;
    let g = system.gram();
    let tol = system.tolerance().compare_rel_tol;
    let mut numerical_warning = false;
    let mut per_step_factors = Vec::with_capacity(system.len() - 1);
    for k in 1..system.len() {
        let norm_k = g.norm_sq(k);
        let s: f64 = (0..k).map(|i| g.get(k, i).norm_sqr()).sum();
        let factor = norm_k - s / variant.constant(&g.leading_stats(k));
        if factor < -tol * norm_k {
            numerical_warning = true;
        }
        per_step_factors.push(factor.max(0.0));
    }
    let refined = g.norm_sq(0) * per_step_factors.iter().product::<f64>();
    Ok(HadamardChainResult {
        variant,
        gamma: gram_determinant(system),
        refined,
        hadamard: system.norms_sq().iter().product(),
        per_step_factors,
        numerical_warning,
    })
}

/// `Γ < Π ‖x_k‖²` for a system that is not pairwise orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictHadamardVerdict {
    pub gram_det: f64,
    pub norm_product: f64,
    /// `norm_product − gram_det`.
    pub margin: f64,
    pub strict: bool,
}

pub fn check_hadamard_strict(system: &VectorSystem) -> Result<StrictHadamardVerdict> {
    if pairwise_orthogonal(system) {
        return Err(Error::PairwiseOrthogonal);
    }
    let gram_det = gram_determinant(system);
    let norm_product: f64 = system.norms_sq().iter().product();
    Ok(StrictHadamardVerdict {
        gram_det,
        norm_product,
        margin: norm_product - gram_det,
        strict: gram_det < norm_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sys(rows: &[&[f64]]) -> VectorSystem {
        VectorSystem::from_real_rows(rows).unwrap()
    }

    #[test]
    fn orthonormal_fixed_point() {
        let e = sys(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        for v in HadamardVariant::ALL {
            let r = hadamard_chain(&e, v).unwrap();
            assert_eq!((r.gamma, r.refined, r.hadamard), (1.0, 1.0, 1.0));
            assert!(!r.numerical_warning);
        }
    }

    #[test]
    fn two_vector_chain_is_tight() {
        let b = sys(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]);
        for v in HadamardVariant::ALL {
            let r = hadamard_chain(&b, v).unwrap();
            assert_relative_eq!(r.refined, 1.0, max_relative = 1e-15);
            assert_relative_eq!(r.gamma, 1.0, max_relative = 1e-14);
            assert_eq!(r.hadamard, 2.0);
            assert_eq!(r.per_step_factors, vec![1.0]);
            assert!(r.holds(1e-8));
        }
    }

    #[test]
    fn three_vector_chain() {
        let s = sys(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[1.0, 1.0, 1.0]]);
        // k = 3 with sum-norms: 3 − (1 + 4) / 3
        let r = hadamard_chain(&s, HadamardVariant::SumNorms).unwrap();
        assert_relative_eq!(r.per_step_factors[1], 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(r.refined, 4.0 / 3.0, max_relative = 1e-15);
        assert_eq!(r.hadamard, 6.0);
        for v in HadamardVariant::ALL {
            assert!(hadamard_chain(&s, v).unwrap().holds(1e-8));
        }
    }

    #[test]
    fn chain_preconditions() {
        assert!(matches!(
            hadamard_chain(&sys(&[&[1.0, 0.0]]), HadamardVariant::SumNorms),
            Err(Error::TooFewVectors { .. })
        ));
        assert!(matches!(
            hadamard_chain(&sys(&[&[1.0, 0.0], &[2.0, 0.0]]), HadamardVariant::Bombieri),
            Err(Error::LinearlyDependent { .. })
        ));
    }

    #[test]
    fn strict_examples() {
        let b = sys(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]);
        let v = check_hadamard_strict(&b).unwrap();
        assert!(v.strict);
        assert_relative_eq!(v.gram_det, 1.0, max_relative = 1e-14);
        assert_eq!(v.norm_product, 2.0);

        let eps = 1e-3;
        let near = sys(&[&[1.0, 0.0], &[1.0, eps]]);
        let v = check_hadamard_strict(&near).unwrap();
        assert!(v.strict);
        assert_relative_eq!(v.gram_det, eps * eps, max_relative = 1e-8);

        let e = sys(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(check_hadamard_strict(&e), Err(Error::PairwiseOrthogonal));
    }

    #[test]
    fn variant_names_round_trip() {
        for v in HadamardVariant::ALL {
            assert_eq!(v.name().parse::<HadamardVariant>().unwrap(), v);
        }
    }
}
