use gradcalc_core::calculus::{
    exterior_derivative, fn_bracket, interior, lie_bracket, lie_derivative, schouten_bracket,
};
use gradcalc_core::lifts::LiftContext;
use gradcalc_core::random::Gen;
use gradcalc_core::{Chart, Poly, Symmetry, TensorField};
use proptest::prelude::*;

fn chart(dim: usize) -> Chart {
    Chart::manifold(&["x", "y", "z"][..dim]).unwrap()
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn cases() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 0);
        let (a, b, c) = (g.poly(3, 3, 4), g.poly(3, 3, 4), g.poly(3, 3, 4));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        let v = gradcalc_core::Var(1);
        prop_assert_eq!((&a * &b).partial(v), &(&a.partial(v) * &b) + &(&a * &b.partial(v)));
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), dim in 1usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 1);
        let p = g.range(0, dim - 1);
        let w = if p == 0 { TensorField::scalar(&c, g.poly(dim, 3, 4)).unwrap() } else { g.form(&c, p) };
        prop_assert!(exterior_derivative(&exterior_derivative(&w).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn lie_bracket_jacobi(seed in any::<u64>(), dim in 1usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 2);
        let (x, y, z) = (g.vector_field(&c), g.vector_field(&c), g.vector_field(&c));
        let br = |a: &TensorField, b: &TensorField| lie_bracket(a, b).unwrap();
        let sum = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).unwrap().add(&br(&z, &br(&x, &y))).unwrap();
        prop_assert!(sum.is_zero());
        prop_assert!(br(&x, &y).add(&br(&y, &x)).unwrap().is_zero());
    }

    #[test]
    fn cartan_formula(seed in any::<u64>(), dim in 1usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 3);
        let p = g.range(1, dim);
        let x = g.vector_field(&c);
        let w = g.form(&c, p);
        let lhs = lie_derivative(&x, &w).unwrap();
        let dw = exterior_derivative(&w).unwrap();
        let i_dw = if p + 1 > dim { TensorField::zero(&c, 0, p, Symmetry::ANTISYM_COV) } else { interior(&x, &dw).unwrap() };
        let rhs = i_dw.add(&exterior_derivative(&interior(&x, &w).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs.full(), rhs.full());
    }

    #[test]
    fn schouten_graded_antisymmetry(seed in any::<u64>()) {
        let c = chart(3);
        let mut g = Gen::new(seed, 4);
        let (k, l) = (g.range(1, 2), g.range(1, 2));
        let (a, b) = (g.multivector(&c, k), g.multivector(&c, l));
        let ab = schouten_bracket(&a, &b).unwrap();
        let ba = schouten_bracket(&b, &a).unwrap();
        prop_assert!(ab.add(&ba.scale(&gradcalc_core::int(sign((k - 1) * (l - 1))))).unwrap().is_zero());
    }

    #[test]
    fn schouten_extends_lie_bracket(seed in any::<u64>(), dim in 1usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 5);
        let (x, y) = (g.vector_field(&c), g.vector_field(&c));
        prop_assert_eq!(schouten_bracket(&x, &y).unwrap().full(), lie_bracket(&x, &y).unwrap().full());
    }

    #[test]
    fn frolicher_nijenhuis_graded_antisymmetry(seed in any::<u64>()) {
        let c = chart(2);
        let mut g = Gen::new(seed, 6);
        let (k, l) = (g.range(0, 2), g.range(0, 2));
        let (a, b) = (g.vector_valued_form(&c, k), g.vector_valued_form(&c, l));
        let ab = fn_bracket(&a, &b).unwrap();
        let ba = fn_bracket(&b, &a).unwrap();
        prop_assert!(ab.add(&ba.scale(&gradcalc_core::int(sign(k * l)))).unwrap().is_zero());
    }

    #[test]
    fn homogeneity_matches_weight_field(seed in any::<u64>(), w in -2i64..=4) {
        let c = Chart::simple(&[("x", 1), ("y", 2), ("z", -1)]).unwrap();
        let mut g = Gen::new(seed, 7);
        let f = g.homogeneous_poly(&c, 0, w, 3).unwrap();
        let euler = c.weight_vector_field(0).unwrap();
        let lf = lie_derivative(&euler, &TensorField::scalar(&c, f.clone()).unwrap()).unwrap();
        prop_assert_eq!(lf.as_scalar().unwrap(), f.scale(&gradcalc_core::int(w)));
        prop_assert!(c.degree_of_function(&f, 0).is(w));
    }

    #[test]
    fn function_lifts_are_multiplicative(seed in any::<u64>(), dim in 1usize..=2, r in 0usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 8);
        let (f, h) = (g.poly(dim, 2, 3), g.poly(dim, 2, 3));
        let ctx = LiftContext::new(&c, r).unwrap();
        let fh = &f * &h;
        for lam in 0..=r as i64 {
            let want: Poly = (0..=lam).map(|a| &ctx.lift_function(&f, a) * &ctx.lift_function(&h, lam - a)).sum();
            prop_assert_eq!(ctx.lift_function(&fh, lam), want);
        }
    }

    #[test]
    fn lie_derivative_leibniz(seed in any::<u64>(), dim in 1usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 9);
        let x = g.vector_field(&c);
        let a = g.tensor(&c, 1, 0, Symmetry::NONE, 2);
        let b = g.tensor(&c, 0, 1, Symmetry::NONE, 2);
        let lhs = lie_derivative(&x, &a.tensor_product(&b).unwrap()).unwrap();
        let rhs = lie_derivative(&x, &a).unwrap().tensor_product(&b).unwrap()
            .add(&a.tensor_product(&lie_derivative(&x, &b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs.full(), rhs.full());
    }

    #[test]
    fn lie_derivative_commutes_with_contraction(seed in any::<u64>(), dim in 1usize..=3) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 10);
        let x = g.vector_field(&c);
        let k = g.tensor(&c, 1, 2, Symmetry::NONE, 3);
        let lhs = lie_derivative(&x, &k.contract(0, 1).unwrap()).unwrap();
        let rhs = lie_derivative(&x, &k).unwrap().contract(0, 1).unwrap();
        prop_assert_eq!(lhs.full(), rhs.full());
    }

    #[test]
    fn lifts_are_linear(seed in any::<u64>(), dim in 1usize..=2, r in 0usize..=2) {
        let c = chart(dim);
        let mut g = Gen::new(seed, 11);
        let a = g.tensor(&c, 1, 1, Symmetry::NONE, 3);
        let b = g.tensor(&c, 1, 1, Symmetry::NONE, 3);
        let ctx = LiftContext::new(&c, r).unwrap();
        for lam in 0..=r as i64 {
            let lhs = ctx.lift_tensor(&a.add(&b).unwrap(), lam).unwrap();
            let rhs = ctx.lift_tensor(&a, lam).unwrap().add(&ctx.lift_tensor(&b, lam).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
