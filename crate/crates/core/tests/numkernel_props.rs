use adelab_core::numkernel::{binom, complex_log, from_polar_f64, gen_binom, rel_err};
use adelab_core::Precision;
use proptest::prelude::*;
use rug::{Integer, Rational};

#[test]
fn pascal_identity_up_to_fifty() {
    for n in 1..=50u64 {
        for k in 1..n {
            assert_eq!(binom(n, k), Integer::from(binom(n - 1, k - 1) + binom(n - 1, k)), "n={n} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn exp_inverts_log_in_annulus(
        lr in -13.8f64..13.8,
        theta in -3.14159f64..3.14159,
        bits in prop::sample::select(vec![64u32, 128, 256]),
    ) {
        let prec = Precision::bits(bits).unwrap();
        let z = from_polar_f64(prec.working(), lr.exp(), theta);
        let back = complex_log(&z).unwrap().exp().unwrap();
        let bound = (-(bits as f64) + prec.guard() as f64).exp2();
        prop_assert!(rel_err(&back, &z) < bound);
    }

    #[test]
    fn generalized_binomial_agrees_on_naturals(a in 0i64..80, j in 0u64..80) {
        prop_assert_eq!(gen_binom(a, j), Rational::from(binom(a as u64, j)));
    }
}
