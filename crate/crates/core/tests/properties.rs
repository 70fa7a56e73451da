use proptest::prelude::*;

use pseudoheat::laws::{asymmetry_and_scale, nu_from_asymmetry};
use pseudoheat::stable::{zn_cf_general, CompositionSpec};
use pseudoheat::{evaluate_point, EquationOrder, Method, NumericControls, StableLaw};

fn order(m: u32) -> EquationOrder {
    EquationOrder::new(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn self_similarity(m in 2u32..8, x in -3.0f64..3.0, t in 0.2f64..3.0) {
        let c = NumericControls::default();
        let base = evaluate_point(order(m), Method::Auto, x * t.powf(-1.0 / m as f64), 1.0, &c).unwrap().value;
        let v = evaluate_point(order(m), Method::Auto, x, t, &c).unwrap().value;
        prop_assert!((v * t.powf(1.0 / m as f64) - base).abs() < 1e-9);
    }

    #[test]
    fn mirror_reflects(n in 1u32..4, x in -4.0f64..4.0, t in 0.2f64..3.0) {
        let c = NumericControls::default();
        let o = order(2 * n + 1);
        let a = evaluate_point(o.mirrored(), Method::Auto, x, t, &c).unwrap().value;
        let b = evaluate_point(o, Method::Auto, -x, t, &c).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn even_orders_are_symmetric_and_bounded(n in 1u32..4, x in 0.0f64..4.0) {
        let c = NumericControls::default();
        let o = order(2 * n);
        let a = evaluate_point(o, Method::Auto, x, 1.0, &c).unwrap().value;
        let b = evaluate_point(o, Method::Auto, -x, 1.0, &c).unwrap().value;
        let origin = evaluate_point(o, Method::Auto, 0.0, 1.0, &c).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a <= origin + 1e-12);
    }

    #[test]
    fn series_and_damped_agree(n in 1u32..4, x in -3.0f64..3.0, t in 0.3f64..2.0) {
        let c = NumericControls::default();
        let o = order(2 * n + 1);
        let s = evaluate_point(o, Method::Series, x, t, &c).unwrap().value;
        let d = evaluate_point(o, Method::Damped, x, t, &c).unwrap().value;
        prop_assert!((s - d).abs() < 1e-7, "series {s} damped {d}");
    }

    #[test]
    fn zn_cf_is_a_semigroup(depth in 1u32..5, base in 1u32..4, beta in -3.0f64..3.0, s in 0.1f64..2.0, t in 0.1f64..2.0) {
        let split = zn_cf_general(base, depth, beta, s) * zn_cf_general(base, depth, beta, t);
        prop_assert!((split - zn_cf_general(base, depth, beta, s + t)).norm() < 1e-12);
    }

    #[test]
    fn zn_cf_modulus_at_most_one(depth in 1u32..6, beta in -10.0f64..10.0, t in 0.01f64..5.0) {
        let spec = CompositionSpec::new(depth, t).unwrap();
        prop_assert!(pseudoheat::stable::zn_cf(&spec, beta).norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn asymmetry_round_trip(alpha in 0.05f64..1.95, frac in -1.0f64..1.0) {
        prop_assume!((alpha - 1.0).abs() > 1e-3);
        let nu = frac * alpha.min(2.0 - alpha);
        let (theta, sigma) = asymmetry_and_scale(alpha, nu);
        prop_assert!(theta.abs() <= 1.0 + 1e-12);
        prop_assert!((nu_from_asymmetry(alpha, theta) - nu).abs() < 1e-12);
        let law = StableLaw::from_asymmetry(alpha, theta, 1.0).unwrap();
        prop_assert!((law.sigma() - sigma).abs() < 1e-12);
    }
}
