//! Gram matrices and their determinants, with linear-independence diagnostics.
//!
//! Determinants are taken from a diagonally pivoted `L D Lᴴ` factorization of
//! the Gram matrix, so a Gram determinant is a product of nonnegative pivots
//! and can never come out negative. A system whose smallest pivot falls below
//! `rank_rel_tol · max_pivot` is reported as dependent with determinant
//! exactly zero.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{check_compatible, dot, norm_sq_coords, Field, Scalar, ToleranceConfig, Vector};

/// Hermitian matrix of pairwise inner products `⟨x_i, x_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl GramMatrix {
    pub fn from_vectors(vectors: &[Vector]) -> GramMatrix {
        let n = vectors.len();
        let mut entries = vec![Scalar::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Scalar::new(norm_sq_coords(vectors[i].coords()), 0.0);
            for j in i + 1..n {
                let g = dot(vectors[i].coords(), vectors[j].coords());
                entries[i * n + j] = g;
                entries[j * n + i] = g.conj();
            }
        }
        GramMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.n + j]
    }

    /// `‖x_i‖²`.
    #[inline]
    pub fn norm_sq(&self, i: usize) -> f64 {
        self.entries[i * self.n + i].re
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n).map(<[Scalar]>::to_vec).collect()
    }

    /// Aggregates of the leading `k × k` block.
    pub fn leading_stats(&self, k: usize) -> GramStats {
        assert!(k >= 1 && k <= self.n, "leading block size out of range");
        let mut stats = GramStats {
            n: k,
            max_norm_sq: 0.0,
            sum_norm_sq: 0.0,
            off_diagonal_sq_sum: 0.0,
            off_diagonal_abs_sum: 0.0,
            off_diagonal_max_abs: 0.0,
            row_abs_sums: vec![0.0; k],
            frobenius_sq: 0.0,
        };
        for i in 0..k {
            let d = self.norm_sq(i);
            stats.max_norm_sq = stats.max_norm_sq.max(d);
            stats.sum_norm_sq += d;
            for j in 0..k {
                let g = self.get(i, j);
                let a = g.norm();
                stats.row_abs_sums[i] += a;
                stats.frobenius_sq += g.norm_sqr();
                if i != j {
                    stats.off_diagonal_sq_sum += g.norm_sqr();
                    stats.off_diagonal_abs_sum += a;
                    stats.off_diagonal_max_abs = stats.off_diagonal_max_abs.max(a);
                }
            }
        }
        stats
    }

    pub fn stats(&self) -> GramStats {
        self.leading_stats(self.n)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j));
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Ratio of extreme eigenvalues; infinite for singular matrices.
    pub fn condition_number(&self) -> f64 {
        let ev = self.eigenvalues();
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        if lo <= 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// `max |G_ij − δ_ij|`.
    pub fn identity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let delta = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((self.get(i, j) - delta).norm());
            }
        }
        dev
    }
}

/// Aggregates of absolute Gram entries used by the Bessel-type constants.
///
/// Off-diagonal aggregates range over ordered pairs `i ≠ j`; over an empty
/// index set (a single vector) maxima and sums are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GramStats {
    pub n: usize,
    pub max_norm_sq: f64,
    pub sum_norm_sq: f64,
    pub off_diagonal_sq_sum: f64,
    pub off_diagonal_abs_sum: f64,
    pub off_diagonal_max_abs: f64,
    pub row_abs_sums: Vec<f64>,
    pub frobenius_sq: f64,
}

impl GramStats {
    /// `Σ ‖x_i‖²`.
    pub fn sum_norms(&self) -> f64 {
        self.sum_norm_sq
    }

    /// `max ‖x_i‖² + (Σ_{i≠j} |⟨x_i,x_j⟩|²)^{1/2}`.
    pub fn boas_bellman(&self) -> f64 {
        self.max_norm_sq + self.off_diagonal_sq_sum.sqrt()
    }

    /// `max ‖x_i‖² + (n − 1) max_{i≠j} |⟨x_i,x_j⟩|`.
    pub fn max_off_diagonal(&self) -> f64 {
        self.max_norm_sq + (self.n as f64 - 1.0) * self.off_diagonal_max_abs
    }

    /// `max_i Σ_j |⟨x_i,x_j⟩|`.
    pub fn bombieri(&self) -> f64 {
        self.row_abs_sums.iter().copied().fold(0.0, f64::max)
    }

    /// `Σ_{i,j} |⟨x_i,x_j⟩|`.
    pub fn total_abs_sum(&self) -> f64 {
        self.row_abs_sums.iter().sum()
    }

    /// `(Σ_{i,j} |⟨x_i,x_j⟩|²)^{1/2}`.
    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq.sqrt()
    }
}

/// `Pᵀ G P = L D Lᴴ` with diagonal pivoting, stopped at numerical rank.
#[derive(Debug, Clone)]
pub struct PivotedCholesky {
    n: usize,
    rank: usize,
    /// `perm[k]` is the original index placed at position `k`.
    perm: Vec<usize>,
    /// Row-major `n × n`; the strict lower triangle of the first `rank`
    /// columns holds `L`.
    lower: Vec<Scalar>,
    pivots: Vec<f64>,
    max_pivot: f64,
    min_pivot: f64,
}

impl PivotedCholesky {
    pub fn factor(gram: &GramMatrix, rank_rel_tol: f64) -> Result<Self> {
        let n = gram.n;
        let mut a = gram.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut max_pivot = 0.0;
        let mut min_pivot = 0.0;
        let mut rank = n;

        for k in 0..n {
            let (p, d) = (k..n)
                .map(|i| (i, a[i * n + i].re))
                .fold(
                    (k, f64::NEG_INFINITY),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if k == 0 {
                max_pivot = d.max(0.0);
            }
            if d <= rank_rel_tol * max_pivot {
                let most_negative = (k..n).map(|i| a[i * n + i].re).fold(f64::INFINITY, f64::min);
                if most_negative < -rank_rel_tol * max_pivot {
                    return Err(Error::NotPositiveSemidefinite {
                        pivot: most_negative,
                        max_pivot,
                    });
                }
                min_pivot = d.max(0.0);
                rank = k;
                break;
            }
            if p != k {
                swap_symmetric(&mut a, n, k, p);
                perm.swap(k, p);
            }
            pivots.push(d);
            min_pivot = d;
            for i in k + 1..n {
                a[i * n + k] /= d;
            }
            for i in k + 1..n {
                let lik = a[i * n + k];
                for j in k + 1..n {
                    // A_ij −= l_ik · d · conj(l_jk)
                    let ljk = a[j * n + k];
                    a[i * n + j] -= lik * d * ljk.conj();
                }
            }
        }

        Ok(PivotedCholesky {
            n,
            rank,
            perm,
            lower: a,
            pivots,
            max_pivot,
            min_pivot,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.n
    }

    pub fn pivots(&self) -> &[f64] {
        &self.pivots
    }

    pub fn max_pivot(&self) -> f64 {
        self.max_pivot
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// Product of pivots, or exactly 0 when rank-deficient.
    pub fn determinant(&self) -> f64 {
        if self.is_full_rank() {
            self.pivots.iter().product()
        } else {
            0.0
        }
    }

    /// Solves `G w = b` for full-rank factorizations.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: b.len(),
            });
        }
        if !self.is_full_rank() {
            return Err(Error::LinearlyDependent {
                min_pivot: self.min_pivot,
                max_pivot: self.max_pivot,
            });
        }
        let l = |i: usize, j: usize| self.lower[i * n + j];
        let mut y: Vec<Scalar> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = l(i, j) * y[j];
                y[i] -= t;
            }
        }
        for (yi, d) in y.iter_mut().zip(&self.pivots) {
            *yi /= d;
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = l(j, i).conj() * y[j];
                y[i] -= t;
            }
        }
        let mut w = vec![Scalar::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            w[p] = y[k];
        }
        if w.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numerical("non-finite solution of Gram system".into()));
        }
        Ok(w)
    }
}

fn swap_symmetric(a: &mut [Scalar], n: usize, k: usize, p: usize) {
    for c in 0..n {
        a.swap(k * n + c, p * n + c);
    }
    for r in 0..n {
        a.swap(r * n + k, r * n + p);
    }
}

/// Linear-independence diagnostics from the pivoted factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankDiagnostics {
    pub gram_det: f64,
    pub min_pivot: f64,
    pub max_pivot: f64,
    pub independent: bool,
}

/// An ordered finite system `{x_1, …, x_n}` with its Gram matrix and
/// factorization computed at construction.
#[derive(Debug, Clone)]
pub struct VectorSystem {
    vectors: Vec<Vector>,
    field: Field,
    dim: usize,
    tol: ToleranceConfig,
    gram: GramMatrix,
    factor: PivotedCholesky,
}

/// Systems are equal when their vectors and tolerances are; everything else
/// is derived from those.
impl PartialEq for VectorSystem {
    fn eq(&self, other: &Self) -> bool {
        self.vectors == other.vectors && self.tol == other.tol
    }
}

impl VectorSystem {
    pub fn new(vectors: Vec<Vector>) -> Result<Self> {
        Self::with_tolerance(vectors, ToleranceConfig::default())
    }

    pub fn with_tolerance(vectors: Vec<Vector>, tol: ToleranceConfig) -> Result<Self> {
        tol.validate()?;
        let first = vectors.first().ok_or(Error::EmptySystem)?;
        for v in &vectors[1..] {
            check_compatible(first, v)?;
        }
        let field = first.field();
        let dim = first.dim();
        let gram = GramMatrix::from_vectors(&vectors);
        let factor = PivotedCholesky::factor(&gram, tol.rank_rel_tol)?;
        Ok(VectorSystem {
            vectors,
            field,
            dim,
            tol,
            gram,
            factor,
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| Vector::real(r.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn factorization(&self) -> &PivotedCholesky {
        &self.factor
    }

    pub fn diagnostics(&self) -> RankDiagnostics {
        RankDiagnostics {
            gram_det: self.factor.determinant(),
            min_pivot: self.factor.min_pivot,
            max_pivot: self.factor.max_pivot,
            independent: self.factor.is_full_rank(),
        }
    }

    pub fn is_independent(&self) -> bool {
        self.factor.is_full_rank()
    }

    pub fn require_independent(&self) -> Result<()> {
        if self.is_independent() {
            Ok(())
        } else {
            Err(Error::LinearlyDependent {
                min_pivot: self.factor.min_pivot,
                max_pivot: self.factor.max_pivot,
            })
        }
    }

    /// Orthonormal within `orth_rel_tol` (entrywise deviation of the Gram
    /// matrix from the identity).
    pub fn require_orthonormal(&self) -> Result<()> {
        let deviation = self.gram.identity_deviation();
        if deviation <= self.tol.orth_rel_tol {
            Ok(())
        } else {
            Err(Error::NotOrthonormal { deviation })
        }
    }

    pub fn norms_sq(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.gram.norm_sq(i)).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.norms_sq().into_iter().fold(0.0, f64::max).sqrt()
    }

    /// `β_i = ⟨x, x_i⟩`.
    pub fn coefficients(&self, x: &Vector) -> Result<Vec<Scalar>> {
        check_compatible(&self.vectors[0], x)?;
        Ok(self.vectors.iter().map(|xi| dot(x.coords(), xi.coords())).collect())
    }

    /// The system `{x_1, …, x_n, x}` with the same tolerances.
    pub fn augmented(&self, x: &Vector) -> Result<VectorSystem> {
        let mut vectors = self.vectors.clone();
        vectors.push(x.clone());
        Self::with_tolerance(vectors, self.tol)
    }

    /// The subsystem made of `vectors[range]`.
    pub fn subsystem(&self, range: std::ops::Range<usize>) -> Result<VectorSystem> {
        Self::with_tolerance(self.vectors[range].to_vec(), self.tol)
    }

    pub fn with_tolerance_config(&self, tol: ToleranceConfig) -> Result<VectorSystem> {
        Self::with_tolerance(self.vectors.clone(), tol)
    }
}

pub fn gram_matrix(system: &VectorSystem) -> &GramMatrix {
    system.gram()
}

/// `Γ(x_1, …, x_n)`, exactly 0 for numerically dependent systems.
pub fn gram_determinant(system: &VectorSystem) -> f64 {
    system.factor.determinant()
}

/// Rank diagnostics under `tol`, reusing the cached factorization when the
/// rank tolerance matches the one the system was built with.
pub fn rank_diagnostics(system: &VectorSystem, tol: &ToleranceConfig) -> Result<RankDiagnostics> {
    if tol.rank_rel_tol == system.tol.rank_rel_tol {
        return Ok(system.diagnostics());
    }
    tol.validate()?;
    let f = PivotedCholesky::factor(&system.gram, tol.rank_rel_tol)?;
    Ok(RankDiagnostics {
        gram_det: f.determinant(),
        min_pivot: f.min_pivot,
        max_pivot: f.max_pivot,
        independent: f.is_full_rank(),
    })
}

fn norm_product(system: &VectorSystem) -> f64 {
    system.norms_sq().iter().product()
}

/// Verdict for `0 ≤ Γ(x_1..x_n) ≤ Π ‖x_i‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramHadamardVerdict {
    pub gram_det: f64,
    pub norm_product: f64,
    pub left_ok: bool,
    pub right_ok: bool,
    /// Left side attained: the system is dependent.
    pub left_equality: bool,
    /// Right side attained: the system is pairwise orthogonal.
    pub right_equality: bool,
}

pub fn check_gram_hadamard(system: &VectorSystem) -> Result<GramHadamardVerdict> {
    if let Some(index) = (0..system.len()).find(|&i| system.gram.norm_sq(i) == 0.0) {
        return Err(Error::ZeroVector { index });
    }
    let tol = system.tol.compare_rel_tol;
    let gram_det = gram_determinant(system);
    let prod = norm_product(system);
    Ok(GramHadamardVerdict {
        gram_det,
        norm_product: prod,
        left_ok: gram_det >= -tol * prod,
        right_ok: gram_det <= prod * (1.0 + tol),
        left_equality: !system.is_independent(),
        right_equality: pairwise_orthogonal(system),
    })
}

/// All pairs satisfy `|⟨x_i,x_j⟩| ≤ orth_rel_tol · ‖x_i‖ ‖x_j‖`.
pub fn pairwise_orthogonal(system: &VectorSystem) -> bool {
    let g = &system.gram;
    let tol = system.tol.orth_rel_tol;
    (0..g.n).all(|i| (i + 1..g.n).all(|j| g.get(i, j).norm() <= tol * (g.norm_sq(i) * g.norm_sq(j)).sqrt()))
}

/// Verdict for `Γ(x_1..x_n) ≤ Γ(x_1..x_k) Γ(x_{k+1}..x_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductSplitVerdict {
    pub gram_det: f64,
    pub head_det: f64,
    pub tail_det: f64,
    pub holds: bool,
}

/// `k` is the number of vectors in the head block, `1 ≤ k < n`.
pub fn check_gram_product_split(system: &VectorSystem, k: usize) -> Result<ProductSplitVerdict> {
    let n = system.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidSplit { k, n });
    }
    let head = system.subsystem(0..k)?;
    let tail = system.subsystem(k..n)?;
    let gram_det = gram_determinant(system);
    let head_det = gram_determinant(&head);
    let tail_det = gram_determinant(&tail);
    let rhs = head_det * tail_det;
    let scale = rhs.max(norm_product(system));
    Ok(ProductSplitVerdict {
        gram_det,
        head_det,
        tail_det,
        holds: gram_det <= rhs + system.tol.compare_rel_tol * scale,
    })
}

/// Verdict for `Γ^{1/2}(x_1+y_1, rest) ≤ Γ^{1/2}(x_1, rest) + Γ^{1/2}(y_1, rest)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleVerdict {
    pub sum_root: f64,
    pub first_root: f64,
    pub second_root: f64,
    pub holds: bool,
}

pub fn check_gram_triangle(
    x1: &Vector,
    y1: &Vector,
    rest: &[Vector],
    tol: &ToleranceConfig,
) -> Result<TriangleVerdict> {
    check_compatible(x1, y1)?;
    for v in rest {
        check_compatible(x1, v)?;
    }
    let system_with = |head: Vector| -> Result<VectorSystem> {
        let mut vectors = Vec::with_capacity(rest.len() + 1);
        vectors.push(head);
        vectors.extend_from_slice(rest);
        VectorSystem::with_tolerance(vectors, *tol)
    };
    let sum = system_with(x1.add(y1)?)?;
    let first = system_with(x1.clone())?;
    let second = system_with(y1.clone())?;
    let sum_root = gram_determinant(&sum).sqrt();
    let first_root = gram_determinant(&first).sqrt();
    let second_root = gram_determinant(&second).sqrt();
    let rest_prod: f64 = rest.iter().map(|v| norm_sq_coords(v.coords())).product();
    let scale = rest_prod.sqrt() * (crate::scalar::norm(x1) + crate::scalar::norm(y1));
    let rhs = first_root + second_root;
    Ok(TriangleVerdict {
        sum_root,
        first_root,
        second_root,
        holds: sum_root <= rhs + tol.compare_rel_tol * rhs.max(scale),
    })
}
