mod common;

use common::{field, orthonormal_basis, system, vector};
use gramdist::{
    all_splits, combination_bound, hadamard_chain, lagrange_identity_residual, CombinationMethod, DiagonalTerm,
    HadamardVariant, OffDiagonalTerm, RowSumRelaxation, Scalar, Vector, VectorSystem,
};
use proptest::prelude::*;

fn methods(p: f64, q: f64) -> Vec<CombinationMethod> {
    let mut m = vec![
        CombinationMethod::CauchySchwarz,
        CombinationMethod::MaxInner,
        CombinationMethod::OffDiagonalFrobenius,
        CombinationMethod::RowSum(RowSumRelaxation::MaxRow),
        CombinationMethod::RowSum(RowSumRelaxation::Holder(p)),
        CombinationMethod::RowSum(RowSumRelaxation::MaxCoefficient),
        CombinationMethod::GramHolder(p),
        CombinationMethod::GramHolder(2.0),
    ];
    m.extend(all_splits(p, q));
    m
}

fn combination_case() -> impl Strategy<Value = (Vec<Scalar>, VectorSystem)> {
    (field(), 1usize..=8)
        .prop_flat_map(|(f, n)| (Just(f), Just(n), n..=12usize))
        .prop_flat_map(|(f, n, d)| (vector(f, n), system(f, n, d)))
        .prop_map(|(a, s)| (a.coords().to_vec(), s))
}

fn chain_system() -> impl Strategy<Value = VectorSystem> {
    (field(), 2usize..=6)
        .prop_flat_map(|(f, n)| (Just(f), Just(n), n..=8usize))
        .prop_flat_map(|(f, n, d)| system(f, n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn combination_bounds_hold((alphas, zs) in combination_case(), p in 1.1f64..6.0, q in 1.1f64..6.0) {
        for m in methods(p, q) {
            let r = combination_bound(&alphas, &zs, m).unwrap();
            prop_assert!(r.lhs <= r.bound * (1.0 + 1e-10), "{}: {r:?}", m.name());
            if let Some(relaxed) = r.relaxed {
                prop_assert!(r.bound <= relaxed * (1.0 + 1e-10), "{}: {r:?}", m.name());
            }
            prop_assert!(r.holds, "{}: {r:?}", m.name());
        }
    }

    #[test]
    fn lagrange_identity((alphas, zs) in combination_case()) {
        let a2: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
        let z2: f64 = zs.norms_sq().iter().sum();
        let residual = lagrange_identity_residual(&alphas, &zs).unwrap();
        prop_assert!(residual.abs() <= 1e-12 * (1.0 + a2 * z2), "residual {residual}");
    }

    #[test]
    fn coarse_step_of_the_max_inner_chain(alphas in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..12)) {
        let n = alphas.len() as f64;
        let sum: f64 = alphas.iter().map(|&(a, b)| Scalar::new(a, b).norm()).sum();
        let sum_sq: f64 = alphas.iter().map(|&(a, b)| Scalar::new(a, b).norm_sqr()).sum();
        prop_assert!(sum * sum <= n * sum_sq * (1.0 + 1e-12));
    }

    #[test]
    fn orthonormal_split_is_exact((alphas, zs) in combination_case()) {
        let basis = orthonormal_basis(zs.vectors(), 1e-8);
        prop_assume!(basis.len() == zs.len());
        let field = zs.field();
        let e = VectorSystem::new(basis.into_iter().map(|c| Vector::new(field, c).unwrap()).collect()).unwrap();
        let exact: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
        let r = combination_bound(
            &alphas,
            &e,
            CombinationMethod::Split(DiagonalTerm::MaxNorm, OffDiagonalTerm::MaxInnerProduct),
        )
        .unwrap();
        prop_assert!((r.lhs - exact).abs() <= 1e-10 * (1.0 + exact));
        prop_assert!((r.bound - exact).abs() <= 1e-8 * (1.0 + exact), "{r:?}");
    }

    #[test]
    fn hadamard_chains_are_two_sided(s in chain_system()) {
        prop_assume!(s.is_independent());
        for v in HadamardVariant::ALL {
            let r = hadamard_chain(&s, v).unwrap();
            let tol = s.tolerance().compare_rel_tol;
            prop_assert!(r.gamma <= r.refined * (1.0 + tol), "{v}: {r:?}");
            prop_assert!(r.refined <= r.hadamard * (1.0 + tol), "{v}: {r:?}");
            let product = s.gram().norm_sq(0) * r.per_step_factors.iter().product::<f64>();
            prop_assert!((product - r.refined).abs() <= 1e-12 * r.refined.abs().max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn hadamard_chains_hold_for_every_ordering(s in chain_system(), shift in 1usize..6) {
        let mut vs = s.vectors().to_vec();
        let len = vs.len();
        vs.rotate_left(shift % len);
        let p = VectorSystem::new(vs).unwrap();
        prop_assume!(p.is_independent());
        for v in HadamardVariant::ALL {
            prop_assert!(hadamard_chain(&p, v).unwrap().holds(p.tolerance().compare_rel_tol));
        }
    }

    #[test]
    fn two_vector_chains_sit_between_gram_and_hadamard(
        s in (field(), 2usize..6).prop_flat_map(|(f, d)| system(f, 2, d))
    ) {
        prop_assume!(s.is_independent());
        let g = s.gram();
        let gamma = g.norm_sq(0) * g.norm_sq(1) - g.get(0, 1).norm_sqr();
        let tol = s.tolerance().compare_rel_tol;
        for v in HadamardVariant::ALL {
            let r = hadamard_chain(&s, v).unwrap();
            prop_assert!(r.refined >= gamma * (1.0 - tol));
            prop_assert!(r.refined <= g.norm_sq(0) * g.norm_sq(1) * (1.0 + tol));
        }
    }

    #[test]
    fn orthonormal_chains_are_fixed_points(s in chain_system()) {
        let basis = orthonormal_basis(s.vectors(), 1e-8);
        prop_assume!(basis.len() >= 2);
        let field = s.field();
        let e = VectorSystem::new(basis.into_iter().map(|c| Vector::new(field, c).unwrap()).collect()).unwrap();
        for v in HadamardVariant::ALL {
            let r = hadamard_chain(&e, v).unwrap();
            prop_assert!((r.gamma - 1.0).abs() <= 1e-12);
            prop_assert!((r.refined - 1.0).abs() <= 1e-12);
            prop_assert!((r.hadamard - 1.0).abs() <= 1e-12);
        }
    }
}
