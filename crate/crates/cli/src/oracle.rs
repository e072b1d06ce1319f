//! Reference values computed by modified Gram–Schmidt with a full second
//! orthogonalization pass. Shares no code path with the Gram-matrix
//! factorization used by the library.

use gramdist::{Field, Scalar, Vector};

fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

fn orthogonalize(r: &mut [Scalar], basis: &[Vec<Scalar>]) {
    for _ in 0..2 {
        for e in basis {
            let c = dot(r, e);
            for (ri, ei) in r.iter_mut().zip(e) {
                *ri -= c * ei;
            }
        }
    }
}

/// Residual norms `‖x_k − P_{k−1} x_k‖²` of each vector against the span of
/// its predecessors, plus the orthonormal basis built along the way.
/// A vector whose residual is at most `drop_tol` times its norm adds no
/// basis vector.
pub fn residuals(vectors: &[Vector], drop_tol: f64) -> (Vec<f64>, Vec<Vec<Scalar>>) {
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    let mut res = Vec::with_capacity(vectors.len());
    for v in vectors {
        let norm0 = dot(v.coords(), v.coords()).re.sqrt();
        let mut r = v.coords().to_vec();
        orthogonalize(&mut r, &basis);
        let norm = dot(&r, &r).re.sqrt();
        res.push(norm * norm);
        if norm > drop_tol * norm0 {
            basis.push(r.into_iter().map(|c| c / norm).collect());
        }
    }
    (res, basis)
}

/// Orthonormal basis of the span.
pub fn orthonormal_basis(vectors: &[Vector], drop_tol: f64) -> Vec<Vector> {
    let field = vectors.first().map_or(Field::Real, Vector::field);
    residuals(vectors, drop_tol)
        .1
        .into_iter()
        .map(|c| {
            let c = if field == Field::Real {
                c.into_iter().map(|z| Scalar::new(z.re, 0.0)).collect()
            } else {
                c
            };
            Vector::new(field, c).expect("finite basis coordinates")
        })
        .collect()
}

/// `d²(x, span)` as the squared norm of the orthogonalized residual.
pub fn distance_sq(vectors: &[Vector], x: &Vector) -> f64 {
    let (_, basis) = residuals(vectors, 1e-12);
    let mut r = x.coords().to_vec();
    orthogonalize(&mut r, &basis);
    dot(&r, &r).re
}

/// `Γ(x_1..x_n) = Π_k ‖x_k − P_{k−1} x_k‖²`.
pub fn gram_determinant(vectors: &[Vector]) -> f64 {
    residuals(vectors, 0.0).0.iter().product()
}
