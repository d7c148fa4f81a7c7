use proptest::prelude::*;

use clifgeo::clifford::{Blade, Multivector};
use clifgeo::energy::{stress_algebra, stress_components};
use clifgeo::expr::{eval_f64, parse};
use clifgeo::selftest::{corpus_params, corpus_table, random_expr, EXPR_DEPTH};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mv() -> impl Strategy<Value = Multivector<f64>> {
    prop::array::uniform16(-1.0..1.0f64).prop_map(|c| Multivector { c })
}

fn grade_k(k: usize) -> impl Strategy<Value = Multivector<f64>> {
    mv().prop_map(move |m| m.grade(k))
}

fn bivector() -> impl Strategy<Value = Multivector<f64>> {
    grade_k(2)
}

fn diff(a: &Multivector<f64>, b: &Multivector<f64>) -> f64 {
    (0..16).map(|i| (a.c[i] - b.c[i]).abs()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn geometric_product_associative(a in mv(), b in mv(), c in mv()) {
        let l = a.geometric(&b).geometric(&c);
        let r = a.geometric(&b.geometric(&c));
        prop_assert!(diff(&l, &r) < 1e-12);
    }

    #[test]
    fn reverse_is_antiautomorphism(a in mv(), b in mv()) {
        prop_assert!(diff(&a.geometric(&b).reverse(), &b.reverse().geometric(&a.reverse())) < 1e-12);
    }

    #[test]
    fn hodge_inverse_round_trip(a in mv()) {
        prop_assert!(diff(&a.hodge().hodge_inv(), &a) < 1e-12);
    }

    #[test]
    fn double_hodge_sign(k in 0usize..=4, seed in mv()) {
        // ⋆⋆ = (−1)^{k+1} on k-forms in this signature.
        let a = seed.grade(k);
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        prop_assert!(diff(&a.hodge().hodge(), &a.scale(sign)) < 1e-12);
    }

    #[test]
    fn vector_product_splits(v in grade_k(1), b in mv()) {
        let split = v.left_contract(&b) + v.wedge(&b);
        prop_assert!(diff(&v.geometric(&b), &split) < 1e-12);
    }

    #[test]
    fn stress_tensor_symmetric_traceless(f in bivector()) {
        let (sym, trace, two_path) = stress_algebra(&f);
        prop_assert!(sym.normalized() < 1e-12);
        prop_assert!(trace.normalized() < 1e-12);
        prop_assert!(two_path.normalized() < 1e-12);
        let t = stress_components(&f);
        // With this sign convention 𝒯_00 is never positive.
        prop_assert!(t[0][0] <= 1e-12);
    }

    #[test]
    fn printed_expression_reparses_to_same_values(seed in any::<u64>(), x in prop::array::uniform4(0.5..1.5f64)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, EXPR_DEPTH);
        let table = corpus_table();
        let printed = e.to_string();
        let back = parse(&printed, &table).unwrap();
        prop_assert_eq!(&back, &e, "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
        let p = corpus_params();
        if let (Ok(u), Ok(v)) = (eval_f64(&e, &x, &p), eval_f64(&back, &x, &p)) {
            prop_assert!(u == v || (u.is_nan() && v.is_nan()));
        }
    }
}

#[test]
fn blade_masks_cover_all_grades() {
    let counts: Vec<usize> = (0..=4).map(|k| Blade::of_grade(k).count()).collect();
    assert_eq!(counts, [1, 4, 6, 4, 1]);
}
