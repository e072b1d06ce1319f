mod common;

use common::{instance, oracle_distance_sq, unitary, Instance};
use gramdist::{
    distance_sq_gram_ratio, distance_sq_quadratic, exact_distance, gram_determinant, DistanceResult, Scalar,
    ToleranceConfig, Vector, VectorSystem,
};
use proptest::prelude::*;

fn well_conditioned(s: &VectorSystem) -> bool {
    s.is_independent() && s.gram().condition_number() <= 1e6
}

fn transform(s: &VectorSystem, u: &[Scalar]) -> VectorSystem {
    VectorSystem::new(s.vectors().iter().map(|v| v.transformed(u).unwrap()).collect()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn close_vec(a: &[Scalar], b: &[Scalar], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(p, q)| (p - q).norm() <= tol * (1.0 + p.norm().max(q.norm())))
}

fn results_match(a: &DistanceResult, b: &DistanceResult, tol: f64) -> bool {
    close(a.d2_gram_ratio, b.d2_gram_ratio, tol)
        && close(a.d2_quadratic, b.d2_quadratic, tol)
        && close(a.d2_projection, b.d2_projection, tol)
        && close(a.norm_sq, b.norm_sq, tol)
        && a.in_orth_complement == b.in_orth_complement
        && a.in_subspace == b.in_subspace
        && close_vec(&a.beta, &b.beta, tol)
        && close_vec(&a.projection_coeffs, &b.projection_coeffs, tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn representations_agree(inst in instance(1, 6, 8)) {
        let Instance { system, x } = inst;
        prop_assume!(well_conditioned(&system));
        let ratio = distance_sq_gram_ratio(&system, &x).unwrap();
        let quad = distance_sq_quadratic(&system, &x).unwrap();
        prop_assert!((ratio - quad).abs() <= 1e-8 * (1.0 + quad), "ratio {ratio} quadratic {quad}");
        let r = exact_distance(&system, &x, &ToleranceConfig::default()).unwrap();
        prop_assert!(r.representations_agree);
        prop_assert!(!r.numerical_warning);
    }

    #[test]
    fn agrees_with_orthonormalization_oracle(inst in instance(1, 6, 8)) {
        let Instance { system, x } = inst;
        prop_assume!(well_conditioned(&system));
        let oracle = oracle_distance_sq(system.vectors(), &x);
        let ratio = distance_sq_gram_ratio(&system, &x).unwrap();
        let quad = distance_sq_quadratic(&system, &x).unwrap();
        prop_assert!((quad - oracle).abs() <= 1e-8 * (1.0 + oracle), "quadratic {quad} oracle {oracle}");
        prop_assert!((ratio - oracle).abs() <= 1e-8 * (1.0 + oracle), "ratio {ratio} oracle {oracle}");
    }

    #[test]
    fn enlarging_the_system_never_increases_distance(inst in instance(2, 6, 8)) {
        let Instance { system, x } = inst;
        prop_assume!(well_conditioned(&system));
        let head = system.subsystem(0..system.len() - 1).unwrap();
        let small = distance_sq_quadratic(&head, &x).unwrap();
        let large = distance_sq_quadratic(&system, &x).unwrap();
        prop_assert!(large <= small + 1e-10, "{large} > {small}");
    }

    #[test]
    fn homogeneous_in_x(inst in instance(1, 5, 7), cr in -3.0f64..3.0, ci in -3.0f64..3.0) {
        let Instance { system, x } = inst;
        prop_assume!(well_conditioned(&system));
        let c = match system.field() {
            gramdist::Field::Real => Scalar::new(cr, 0.0),
            gramdist::Field::Complex => Scalar::new(cr, ci),
        };
        let base = distance_sq_quadratic(&system, &x).unwrap();
        let scaled = distance_sq_quadratic(&system, &x.scaled(c).unwrap()).unwrap();
        let expected = c.norm_sqr() * base;
        prop_assert!((scaled - expected).abs() <= 1e-10 * (expected + c.norm_sqr() * x.max_abs().powi(2)));
    }

    #[test]
    fn unitary_invariance(
        (inst, u) in instance(1, 5, 6).prop_flat_map(|i| {
            let (f, d) = (i.system.field(), i.system.dim());
            (Just(i), unitary(f, d))
        })
    ) {
        let Instance { system, x } = inst;
        prop_assume!(well_conditioned(&system));
        let tol = ToleranceConfig::default();
        let rotated = transform(&system, &u);
        let ux = x.transformed(&u).unwrap();

        let (g, h) = (system.gram(), rotated.gram());
        for i in 0..g.n() {
            for j in 0..g.n() {
                prop_assert!((g.get(i, j) - h.get(i, j)).norm() <= 1e-12 * (1.0 + g.norm_sq(i).max(g.norm_sq(j))));
            }
        }

        let a = exact_distance(&system, &x, &tol).unwrap();
        let b = exact_distance(&rotated, &ux, &tol).unwrap();
        prop_assert!(results_match(&a, &b, 1e-10), "{a:?} vs {b:?}");
    }

    #[test]
    fn gram_determinant_unitary_invariant(
        (inst, u) in instance(1, 4, 5).prop_flat_map(|i| {
            let (f, d) = (i.system.field(), i.system.dim());
            (Just(i), unitary(f, d))
        })
    ) {
        let rotated = transform(&inst.system, &u);
        let (a, b) = (gram_determinant(&inst.system), gram_determinant(&rotated));
        let scale: f64 = inst.system.norms_sq().iter().product();
        if inst.system.is_independent() && rotated.is_independent() {
            prop_assert!((a - b).abs() <= 1e-10 * a.max(b) + 1e-12 * scale);
        }
    }

    #[test]
    fn projection_coefficients_reproduce_the_projection(inst in instance(1, 5, 7)) {
        let Instance { system, x } = inst;
        prop_assume!(well_conditioned(&system));
        let r = exact_distance(&system, &x, &ToleranceConfig::default()).unwrap();
        let p = gramdist::linear_combination(&r.projection_coeffs, system.vectors()).unwrap();
        let residual = x.sub(&p).unwrap();
        for v in system.vectors() {
            let ip = gramdist::inner_product(&residual, v).unwrap();
            prop_assert!(ip.norm() <= 1e-8 * (1.0 + gramdist::norm(&x) * gramdist::norm(v)));
        }
        let d2 = gramdist::norm_sq(&residual);
        prop_assert!((d2 - r.d2()).abs() <= 1e-8 * (1.0 + r.norm_sq));
    }
}

#[test]
fn oracle_matches_hand_values() {
    let b = VectorSystem::from_real_rows(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]).unwrap();
    let x = Vector::real([1.0, 1.0, 1.0]).unwrap();
    assert!((oracle_distance_sq(b.vectors(), &x) - 1.0).abs() < 1e-15);
}
