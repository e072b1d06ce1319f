//! Distance from a vector to the span of a finite system in a real or complex
//! inner-product space, computed exactly through Gram determinants and bounded
//! from above by Bessel-type estimates that need only raw inner products.
//!
//! ```
//! use gramdist::{exact_distance, bound_sum_norms, ToleranceConfig, Vector, VectorSystem};
//!
//! let system = VectorSystem::from_real_rows(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]).unwrap();
//! let x = Vector::real([1.0, 1.0, 1.0]).unwrap();
//! let exact = exact_distance(&system, &x, &ToleranceConfig::default()).unwrap();
//! assert!((exact.d2() - 1.0).abs() < 1e-12);
//! assert!(bound_sum_norms(&system, &x).unwrap() >= exact.d2());
//! ```

pub mod bounds;
pub mod combination;
pub mod distance;
pub mod error;
pub mod gram;
pub mod hadamard;
pub mod scalar;

pub use bounds::{
    bessel_sum, boas_bellman_rhs, bombieri_rhs, bound_boas_bellman, bound_bombieri, bound_frobenius, bound_interval,
    bound_interval_relaxed, bound_max_off_diagonal, bound_sum_norms, condition_holds, distance_bound,
    full_bound_report, max_off_diagonal_rhs, reverse_bessel, tightness, BoundEntry, BoundMethod, BoundReport,
    IntervalCondition, IntervalData, ReverseBesselVerdict,
};
pub use combination::{
    all_splits, cbs_bound, combination_bound, combination_norm_sq, conjugate_exponent, gram_holder_bound,
    lagrange_identity_residual, max_inner_bound, off_diagonal_frobenius_bound, row_sum_bound, split_bound,
    CombinationBoundResult, CombinationMethod, DiagonalTerm, OffDiagonalTerm, RowSumRelaxation,
};
pub use distance::{
    distance_sq_gram_ratio, distance_sq_orthonormal, distance_sq_projection, distance_sq_quadratic, exact_distance,
    in_orthogonal_complement, DistanceResult, WELL_CONDITIONED,
};
pub use error::{Error, Result};
pub use gram::{
    check_gram_hadamard, check_gram_product_split, check_gram_triangle, gram_determinant, gram_matrix,
    pairwise_orthogonal, rank_diagnostics, GramHadamardVerdict, GramMatrix, GramStats, PivotedCholesky,
    ProductSplitVerdict, RankDiagnostics, TriangleVerdict, VectorSystem,
};
pub use hadamard::{
    check_hadamard_strict, hadamard_chain, HadamardChainResult, HadamardVariant, StrictHadamardVerdict,
};
pub use scalar::{inner_product, linear_combination, norm, norm_sq, Field, Scalar, ToleranceConfig, Vector};
