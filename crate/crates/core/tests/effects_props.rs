use proptest::prelude::*;
use seqprod::{prob, rand_effect, rand_state, Effect, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn seeds() -> impl Strategy<Value = (usize, u64, u64, u64)> {
    (2usize..=4, any::<u64>(), any::<u64>(), any::<u64>())
}

proptest! {
    #[test]
    fn probabilities_add_on_perpendicular_pairs((d, s1, s2, s3) in seeds(), split in 0.0f64..1.0) {
        let a = rand_effect(d, s1).scaled(split).unwrap();
        let b = rand_effect(d, s2).scaled(1.0 - split).unwrap();
        prop_assert!(a.is_perp(&b, tol()).unwrap());
        let sum = a.sum(&b, tol()).unwrap();
        let rho = rand_state(d, s3);
        let lhs = prob(&rho, &sum).unwrap();
        prop_assert!((lhs - prob(&rho, &a).unwrap() - prob(&rho, &b).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn order_matches_probabilities((d, s1, s2, s3) in seeds(), shrink in 0.0f64..1.0) {
        let b = rand_effect(d, s1);
        let a = b.scaled(shrink).unwrap();
        prop_assert!(seqprod::loewner_leq(a.matrix(), b.matrix(), tol()).unwrap());
        let rho = rand_state(d, s2);
        prop_assert!(prob(&rho, &a).unwrap() <= prob(&rho, &b).unwrap() + 1e-12);
        let c = rand_effect(d, s3);
        let p = prob(&rho, &c).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn complement_is_an_involution((d, s1, _, s2) in seeds()) {
        let a = rand_effect(d, s1);
        prop_assert!(a.complement().complement().matrix().max_abs_diff(a.matrix()) <= 1e-15);
        let rho = rand_state(d, s2);
        let total = prob(&rho, &a).unwrap() + prob(&rho, &a.complement()).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(a.is_perp(&a.complement(), tol()).unwrap());
    }

    #[test]
    fn sampled_effects_and_states_are_valid((d, s1, s2, _) in seeds()) {
        let a = rand_effect(d, s1);
        prop_assert!(Effect::new(a.matrix().clone(), tol()).is_ok());
        let rho = rand_state(d, s2);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-12);
    }
}
