use proptest::prelude::*;

use et14::galilean::{galilean_residual_h, LinearCombination, XScalar};
use et14::material::PolynomialMaterial;
use et14::sample::{rotation, trial_rng};
use et14::scalar::{ratio, Rational, Scalar};
use et14::state::{rotate_state, scalar_invariants, DIM};
use et14::{compute_v, compute_x, eval_potentials, RationalState, State};

const DEGREES: [u32; 8] = [1, 2, 3, 4, 2, 3, 4, 5];

fn rational_state() -> impl Strategy<Value = RationalState> {
    proptest::array::uniform14(-2000i64..=2000)
        .prop_map(|n| RationalState::from_flat(&std::array::from_fn::<_, DIM, _>(|i| ratio(n[i], 1000))))
}

fn float_state() -> impl Strategy<Value = State> {
    proptest::array::uniform14(-1.0f64..=1.0).prop_map(|x| State::from_flat(&x))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalars_are_homogeneous(s in rational_state()) {
        let x = compute_x(&s);
        for t in [ratio(2, 1), ratio(1, 3)] {
            let xt = compute_x(&s.scaled(&t));
            for (n, deg) in DEGREES.iter().enumerate() {
                prop_assert_eq!(&xt.0[n], &(t.powi(*deg) * &x.0[n]), "X{}", n + 1);
            }
        }
    }

    #[test]
    fn rotation_leaves_scalars_invariant(s in float_state(), seed in any::<u64>()) {
        let r = rotation(&mut trial_rng(seed, 0));
        let rs = rotate_state(&s, &r).unwrap();
        for (a, b) in scalar_invariants(&s).to_array().iter().zip(scalar_invariants(&rs).to_array()) {
            prop_assert!(close(*a, b, 1e-12));
        }
        for (a, b) in compute_x(&s).0.iter().zip(compute_x(&rs).0) {
            prop_assert!(close(*a, b, 1e-11));
        }
    }

    #[test]
    fn vectors_and_fluxes_rotate_covariantly(s in float_state(), seed in any::<u64>()) {
        let r = rotation(&mut trial_rng(seed, 1));
        let rs = rotate_state(&s, &r).unwrap();
        let (v, vr) = (compute_v(&s), compute_v(&rs));
        for j in 0..4 {
            let expected = r.mul_vec(&v.0[j]);
            for i in 0..3 {
                prop_assert!(close(vr.0[j].0[i], expected.0[i], 1e-11));
            }
        }
        let mat = PolynomialMaterial::quadratic_fixture();
        let (p, pr) = (eval_potentials(&s, &mat).unwrap(), eval_potentials(&rs, &mat).unwrap());
        prop_assert!(close(p.hprime, pr.hprime, 1e-10));
    }

    #[test]
    fn residual_is_linear(s in rational_state(), a in -50i64..=50, b in -50i64..=50, n in 0usize..8, m in 0usize..8) {
        let (qa, qb): (Rational, Rational) = (ratio(a, 7), ratio(b, 3));
        let combined = LinearCombination { first: (qa.clone(), XScalar(n + 1)), second: (qb.clone(), XScalar(m + 1)) };
        let lhs = galilean_residual_h(&s, &combined).unwrap();
        let rn = galilean_residual_h(&s, &XScalar(n + 1)).unwrap();
        let rm = galilean_residual_h(&s, &XScalar(m + 1)).unwrap();
        for i in 0..3 {
            prop_assert_eq!(&lhs.0[i], &(&qa * &rn.0[i] + &qb * &rm.0[i]));
        }
    }

    #[test]
    fn x_scalars_satisfy_the_galilean_identity(s in rational_state(), n in 0usize..8) {
        let r = galilean_residual_h(&s, &XScalar(n + 1)).unwrap();
        prop_assert!(r.0.iter().all(num_traits::Zero::is_zero));
    }
}
