use proptest::prelude::*;
use symtensor::basis::{sym_tensor_of_vectors, wedge_of_vectors, Symmetry};
use symtensor::matrix::{c64, inner, vec_norm, ComplexMatrix, C64};
use symtensor::product::{asym_product, product_via_embedding, sym_product};
use symtensor::theorems::oracles::simple_tensor_norm_sq;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| c64(re, im))
}

fn vector(d: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(), d)
}

fn matrix(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), d * d).prop_map(move |v| ComplexMatrix::from_vec(d, d, v).unwrap())
}

fn pair(d: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (matrix(d), matrix(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_order_is_irrelevant((a, b, c) in (matrix(3), matrix(3), matrix(3))) {
        let abc = sym_product(&[&a, &b, &c]).unwrap();
        prop_assert_eq!(&abc, &sym_product(&[&c, &a, &b]).unwrap());
        prop_assert_eq!(&abc, &sym_product(&[&b, &c, &a]).unwrap());
        let w = asym_product(&[&a, &b]).unwrap();
        prop_assert_eq!(w, asym_product(&[&b, &a]).unwrap());
    }

    #[test]
    fn sparse_and_dense_routes_agree((a, b) in pair(3)) {
        let s = sym_product(&[&a, &b]).unwrap();
        let dense = product_via_embedding(&[&a, &b], Symmetry::Symmetric).unwrap();
        prop_assert!(s.max_abs_diff(&dense) < 1e-12);
        let w = asym_product(&[&a, &b]).unwrap();
        let dense = product_via_embedding(&[&a, &b], Symmetry::Antisymmetric).unwrap();
        prop_assert!(w.max_abs_diff(&dense) < 1e-12);
    }

    #[test]
    fn adjoint_commutes_with_product((a, b) in pair(3)) {
        let lhs = sym_product(&[&a, &b]).unwrap().adjoint();
        let rhs = sym_product(&[a.adjoint(), b.adjoint()]).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn product_rule((a, b, c, d) in (matrix(3), matrix(3), matrix(3), matrix(3))) {
        let lhs = sym_product(&[&a, &b]).unwrap().matmul(&sym_product(&[&c, &d]).unwrap()).unwrap();
        let ac_bd = sym_product(&[a.matmul(&c).unwrap(), b.matmul(&d).unwrap()]).unwrap();
        let ad_bc = sym_product(&[a.matmul(&d).unwrap(), b.matmul(&c).unwrap()]).unwrap();
        let rhs = (&ac_bd + &ad_bc).scale_real(0.5);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
    }

    #[test]
    fn pair_norm_identity((u, v) in (vector(4), vector(4))) {
        let uv = vec_norm(&sym_tensor_of_vectors(&[u.clone(), v.clone()]).unwrap());
        let (nu, nv) = (vec_norm(&u), vec_norm(&v));
        prop_assert!(uv <= nu * nv * (1.0 + 1e-12));
        prop_assert!(nu * nv / 2f64.sqrt() <= uv * (1.0 + 1e-12) + 1e-300);
        let identity = ((nu * nv).powi(2) + inner(&u, &v).norm_sqr()) / 2.0;
        prop_assert!((uv * uv - identity).abs() <= 1e-12 * (1.0 + (nu * nv).powi(2)));
    }

    #[test]
    fn three_vector_norm_is_a_permanent(vs in prop::collection::vec(vector(3), 3)) {
        let direct = vec_norm(&sym_tensor_of_vectors(&vs).unwrap()).powi(2);
        let scale: f64 = vs.iter().map(|v| vec_norm(v).powi(2)).product();
        prop_assert!((direct - simple_tensor_norm_sq(&vs)).abs() <= 1e-12 * (1.0 + scale));
        prop_assert!(direct * 6.0 >= scale * (1.0 - 1e-12));
    }

    #[test]
    fn wedge_of_repeated_vector_vanishes(u in vector(3), v in vector(3)) {
        let w = wedge_of_vectors(&[u.clone(), v, u]).unwrap();
        prop_assert!(vec_norm(&w) < 1e-12);
    }
}
