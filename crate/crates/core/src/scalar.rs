//! Vectors in `K^d` and the Hermitian inner product.
//!
//! The field is a runtime tag: real vectors are stored with the same complex
//! coordinates as complex ones, with every imaginary part pinned to zero at
//! construction. All arithmetic runs through one code path.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A real or complex double-precision value.
pub type Scalar = Complex64;

/// The scalar field of the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }

    /// Checks that `value` belongs to this field.
    pub fn admits(self, value: Scalar) -> bool {
        value.re.is_finite() && value.im.is_finite() && (self == Field::Complex || value.im == 0.0)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative pivot threshold below which a system counts as dependent.
    pub rank_rel_tol: f64,
    /// Relative threshold for orthogonality decisions.
    pub orth_rel_tol: f64,
    /// Relative slack allowed when comparing two sides of an inequality.
    pub compare_rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_tol: 1e-12,
            orth_rel_tol: 1e-10,
            compare_rel_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, orth_rel_tol: f64, compare_rel_tol: f64) -> Result<Self> {
        let tol = ToleranceConfig {
            rank_rel_tol,
            orth_rel_tol,
            compare_rel_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("orth_rel_tol", self.orth_rel_tol),
            ("compare_rel_tol", self.compare_rel_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

/// A dense coordinate vector in `K^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    field: Field,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: Field, coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, c) in coords.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if field == Field::Real && c.im != 0.0 {
                return Err(Error::ImaginaryInReal { index, im: c.im });
            }
        }
        Ok(Vector { field, coords })
    }

    pub fn real<I: IntoIterator<Item = f64>>(coords: I) -> Result<Self> {
        Self::new(Field::Real, coords.into_iter().map(|re| Scalar::new(re, 0.0)).collect())
    }

    pub fn complex<I: IntoIterator<Item = Scalar>>(coords: I) -> Result<Self> {
        Self::new(Field::Complex, coords.into_iter().collect())
    }

    pub fn zeros(field: Field, dim: usize) -> Result<Self> {
        Self::new(field, vec![Scalar::new(0.0, 0.0); dim])
    }

    /// The `k`-th standard basis vector of `K^dim`.
    pub fn basis(field: Field, dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k + 1,
            });
        }
        let mut coords = vec![Scalar::new(0.0, 0.0); dim];
        coords[k] = Scalar::new(1.0, 0.0);
        Self::new(field, coords)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Largest coordinate modulus.
    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Scalar) -> Result<Vector> {
        check_coefficient(self.field, c, 0)?;
        Ok(Vector {
            field: self.field,
            coords: self.coords.iter().map(|&u| c * u).collect(),
        })
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        check_compatible(self, other)?;
        Ok(Vector {
            field: self.field,
            coords: zip_map(&self.coords, &other.coords, |a, b| a + b),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        check_compatible(self, other)?;
        Ok(Vector {
            field: self.field,
            coords: zip_map(&self.coords, &other.coords, |a, b| a - b),
        })
    }

    /// Applies a `dim × dim` matrix (row-major) to the coordinates.
    pub fn transformed(&self, matrix: &[Scalar]) -> Result<Vector> {
        let d = self.dim();
        if matrix.len() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                found: matrix.len(),
            });
        }
        let coords = (0..d)
            .map(|i| {
                matrix[i * d..(i + 1) * d]
                    .iter()
                    .zip(&self.coords)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Vector::new(self.field, coords)
    }
}

fn zip_map(a: &[Scalar], b: &[Scalar], f: impl Fn(Scalar, Scalar) -> Scalar) -> Vec<Scalar> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

pub(crate) fn check_compatible(u: &Vector, v: &Vector) -> Result<()> {
    if u.field != v.field {
        return Err(Error::FieldMismatch {
            expected: u.field,
            found: v.field,
        });
    }
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(())
}

pub(crate) fn check_coefficient(field: Field, c: Scalar, index: usize) -> Result<()> {
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::NonFinite { index });
    }
    if field == Field::Real && c.im != 0.0 {
        return Err(Error::FieldMismatch {
            expected: Field::Real,
            found: Field::Complex,
        });
    }
    Ok(())
}

/// `Σ u_k conj(v_k)` on raw coordinates.
#[inline]
pub(crate) fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

#[inline]
pub(crate) fn norm_sq_coords(u: &[Scalar]) -> f64 {
    u.iter().map(|c| c.norm_sqr()).sum()
}

/// Hermitian inner product `⟨u, v⟩ = Σ u_k conj(v_k)`, linear in `u`.
pub fn inner_product(u: &Vector, v: &Vector) -> Result<Scalar> {
    check_compatible(u, v)?;
    Ok(dot(&u.coords, &v.coords))
}

/// `‖v‖² = Re⟨v, v⟩`.
pub fn norm_sq(v: &Vector) -> f64 {
    norm_sq_coords(&v.coords)
}

pub fn norm(v: &Vector) -> f64 {
    norm_sq(v).sqrt()
}

/// `Σ coeffs[i] · vectors[i]`.
pub fn linear_combination(coeffs: &[Scalar], vectors: &[Vector]) -> Result<Vector> {
    let first = vectors.first().ok_or(Error::EmptySystem)?;
    if coeffs.len() != vectors.len() {
        return Err(Error::LengthMismatch {
            expected: vectors.len(),
            found: coeffs.len(),
        });
    }
    let mut acc = vec![Scalar::new(0.0, 0.0); first.dim()];
    for (i, (c, v)) in coeffs.iter().zip(vectors).enumerate() {
        check_compatible(first, v)?;
        check_coefficient(first.field, *c, i)?;
        for (a, x) in acc.iter_mut().zip(&v.coords) {
            *a += c * x;
        }
    }
    Ok(Vector {
        field: first.field,
        coords: acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let e1 = Vector::real([1.0, 0.0]).unwrap();
        let e2 = Vector::real([0.0, 1.0]).unwrap();
        assert_eq!(inner_product(&e1, &e2).unwrap(), c(0.0, 0.0));

        let u = Vector::real([1.0, 1.0, 1.0]).unwrap();
        let v = Vector::real([1.0, 1.0, 0.0]).unwrap();
        assert_eq!(inner_product(&u, &v).unwrap(), c(2.0, 0.0));

        // i·conj(1) + 0 = i
        let u = Vector::complex([c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let v = Vector::complex([c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(inner_product(&u, &v).unwrap(), c(0.0, 1.0));
        // second argument is conjugated
        assert_eq!(inner_product(&v, &u).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn inner_product_rejects_mismatch() {
        let u = Vector::real([1.0, 0.0]).unwrap();
        let v = Vector::real([1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(inner_product(&u, &v), Err(Error::DimensionMismatch { .. })));
        let w = Vector::complex([c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(inner_product(&u, &w), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(norm_sq(&Vector::real([1.0, 1.0, 1.0]).unwrap()), 3.0);
        assert_eq!(norm_sq(&Vector::zeros(Field::Real, 4).unwrap()), 0.0);
        // |1+i|² + |1|² = 3
        let v = Vector::complex([c(1.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(norm_sq(&v), 3.0);
    }

    #[test]
    fn linear_combination_examples() {
        let e1 = Vector::real([1.0, 0.0]).unwrap();
        let e2 = Vector::real([0.0, 1.0]).unwrap();
        let v = linear_combination(&[c(1.0, 0.0), c(1.0, 0.0)], &[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(v, Vector::real([1.0, 1.0]).unwrap());

        let z = linear_combination(&[c(0.0, 0.0), c(0.0, 0.0)], &[e1, e2]).unwrap();
        assert!(z.is_zero());

        let a = Vector::real([1.0, 0.0, 0.0]).unwrap();
        let b = Vector::real([1.0, 1.0, 0.0]).unwrap();
        let v = linear_combination(&[c(2.0, 0.0), c(-1.0, 0.0)], &[a, b]).unwrap();
        assert_eq!(v, Vector::real([1.0, -1.0, 0.0]).unwrap());
    }

    #[test]
    fn linear_combination_errors() {
        let a = Vector::real([1.0, 0.0]).unwrap();
        assert!(matches!(
            linear_combination(&[c(1.0, 0.0)], &[]),
            Err(Error::EmptySystem)
        ));
        assert!(matches!(
            linear_combination(&[c(1.0, 0.0), c(1.0, 0.0)], std::slice::from_ref(&a)),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            linear_combination(&[c(0.0, 1.0)], &[a]),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn construction_invariants() {
        assert!(matches!(Vector::real([]), Err(Error::EmptyVector)));
        assert!(matches!(
            Vector::real([1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            Vector::new(Field::Real, vec![c(1.0, 0.5)]),
            Err(Error::ImaginaryInReal { .. })
        ));
        assert!(ToleranceConfig::new(0.0, 1e-10, 1e-8).is_err());
        assert!(ToleranceConfig::new(1e-12, 1.0, 1e-8).is_err());
        ToleranceConfig::default().validate().unwrap();
    }

    fn complex_vec(dim: usize) -> impl Strategy<Value = Vector> {
        prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), dim)
            .prop_map(|v| Vector::complex(v.into_iter().map(|(a, b)| c(a, b))).unwrap())
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(u in complex_vec(5), v in complex_vec(5)) {
            let uv = inner_product(&u, &v).unwrap();
            let vu = inner_product(&v, &u).unwrap();
            prop_assert!((uv - vu.conj()).norm() <= 1e-14 * (1.0 + norm(&u) * norm(&v)));
        }

        #[test]
        fn cauchy_schwarz(u in complex_vec(4), v in complex_vec(4)) {
            let uv = inner_product(&u, &v).unwrap();
            prop_assert!(uv.norm_sqr() <= norm_sq(&u) * norm_sq(&v) * (1.0 + 1e-12));
        }

        #[test]
        fn linear_in_first_argument(
            u in complex_vec(3), w in complex_vec(3), v in complex_vec(3),
            ar in -5.0f64..5.0, ai in -5.0f64..5.0,
        ) {
            let a = c(ar, ai);
            let lhs = inner_product(&u.scaled(a).unwrap().add(&w).unwrap(), &v).unwrap();
            let rhs = a * inner_product(&u, &v).unwrap() + inner_product(&w, &v).unwrap();
            let scale = (a.norm() * norm(&u) + norm(&w)) * norm(&v);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + scale));
        }
    }
}
