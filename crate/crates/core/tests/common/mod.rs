#![allow(dead_code)]

use gramdist::{Field, Scalar, Vector, VectorSystem};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// A random system of `n` vectors in dimension `dim` together with a target `x`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub system: VectorSystem,
    pub x: Vector,
}

fn scalars(field: Field, len: usize) -> BoxedStrategy<Vec<Scalar>> {
    match field {
        Field::Real => prop::collection::vec(-1.0f64..1.0, len)
            .prop_map(|v| v.into_iter().map(|r| Scalar::new(r, 0.0)).collect())
            .boxed(),
        Field::Complex => prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
            .prop_map(|v| v.into_iter().map(|(a, b)| Scalar::new(a, b)).collect())
            .boxed(),
    }
}

pub fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

pub fn vector(field: Field, dim: usize) -> impl Strategy<Value = Vector> {
    scalars(field, dim).prop_map(move |c| Vector::new(field, c).unwrap())
}

pub fn system(field: Field, n: usize, dim: usize) -> impl Strategy<Value = VectorSystem> {
    prop::collection::vec(vector(field, dim), n).prop_map(|v| VectorSystem::new(v).unwrap())
}

/// `n ∈ n_lo..=n_hi`, `dim ∈ n..=dim_hi`, either field.
pub fn instance(n_lo: usize, n_hi: usize, dim_hi: usize) -> impl Strategy<Value = Instance> {
    (field(), n_lo..=n_hi)
        .prop_flat_map(move |(f, n)| (Just(f), Just(n), n..=dim_hi.max(n)))
        .prop_flat_map(|(f, n, d)| (system(f, n, d), vector(f, d)))
        .prop_map(|(system, x)| Instance { system, x })
}

/// Random unitary (orthogonal for the real field) `dim × dim` matrix in
/// row-major order.
pub fn unitary(field: Field, dim: usize) -> impl Strategy<Value = Vec<Scalar>> {
    scalars(field, dim * dim).prop_map(move |entries| {
        let m = DMatrix::from_row_slice(dim, dim, &entries);
        let q = m.qr().q();
        let mut out = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut v = q[(i, j)];
                if field == Field::Real {
                    v.im = 0.0;
                }
                out.push(v);
            }
        }
        out
    })
}

fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

fn subtract_projections(r: &mut [Scalar], basis: &[Vec<Scalar>]) {
    for e in basis {
        let c = dot(r, e);
        for (ri, ei) in r.iter_mut().zip(e) {
            *ri -= c * ei;
        }
    }
}

/// Orthonormal basis of the span by Gram–Schmidt with one full
/// re-orthogonalization pass per vector. Vectors whose residual falls below
/// `drop_tol` relative to their norm are skipped.
pub fn orthonormal_basis(vectors: &[Vector], drop_tol: f64) -> Vec<Vec<Scalar>> {
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        let norm0 = dot(v.coords(), v.coords()).re.sqrt();
        let mut r = v.coords().to_vec();
        subtract_projections(&mut r, &basis);
        subtract_projections(&mut r, &basis);
        let norm = dot(&r, &r).re.sqrt();
        if norm > drop_tol * norm0 {
            basis.push(r.into_iter().map(|c| c / norm).collect());
        }
    }
    basis
}

/// `‖x − P x‖²` with `P` the orthogonal projection built from
/// [`orthonormal_basis`].
pub fn oracle_distance_sq(vectors: &[Vector], x: &Vector) -> f64 {
    let basis = orthonormal_basis(vectors, 1e-12);
    let mut r = x.coords().to_vec();
    subtract_projections(&mut r, &basis);
    subtract_projections(&mut r, &basis);
    dot(&r, &r).re
}
