mod common;

use adelab_core::indexcalc::{
    a_from_b, a_table, b_from_a, decompose, first_nonzero_b, lambda_from_qr, reassemble, star_weight, upoly_eval,
    AdePoly, LambdaIndex, UPoly,
};
use adelab_core::numkernel::rel_err;
use adelab_core::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn qr_indexing_is_a_bijection() {
    for ell in 2..=3u32 {
        for p in 0..=8u32 {
            let mut hit = 0;
            for q in 0..=ell * p {
                for r in 0..=p {
                    if let Some(l) = lambda_from_qr(p, q, r, ell) {
                        assert_eq!(star_weight(&l, ell), q);
                        assert_eq!(l.total(), p);
                        assert_eq!(l.2, r);
                        hit += 1;
                    }
                }
            }
            // Every triple with |λ| = p is reached exactly once.
            assert_eq!(hit, (p + 1) * (p + 2) / 2, "ell={ell} p={p}");
        }
    }
}

#[test]
fn cancelling_input_is_structurally_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let p = common::random_poly(&mut rng, 1, 5, 5, 2, 2);
        let mut sum = p.clone();
        for (lambda, a) in p.coeffs() {
            let mut neg = UPoly::zero(1);
            neg.add_scaled(a, -1);
            sum.add(*lambda, &neg).unwrap();
        }
        assert!(sum.is_zero());
        assert!(decompose(&sum, 2).unwrap().is_empty());
    }
}

/// Σ c·Π u_i^{e_i} evaluated term by term.
fn brute_force(a: &UPoly, point: &[Complex]) -> Complex {
    let prec = point[0].prec();
    let mut total = Complex::zero(prec);
    for (exps, c) in a.terms() {
        let mut t = c.with_prec(prec);
        for (u, &e) in point.iter().zip(exps) {
            for _ in 0..e {
                t = &t * u;
            }
        }
        total += &t;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reassembles(seed in any::<u64>(), ell in 2u32..=3, m in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = common::random_poly(&mut rng, m, 8, 6, 3, 3);
        let parts = decompose(&poly, ell).unwrap();
        for part in &parts {
            prop_assert_eq!(part.part.degree(), part.p);
            prop_assert!(part.first_nonzero.is_some());
        }
        let tables: Vec<_> = parts.into_iter().map(|t| t.a).collect();
        prop_assert_eq!(reassemble(m, &tables).unwrap(), poly);
    }

    #[test]
    fn binomial_transform_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_a_table(&mut rng, 2, 6, 4);
        let b = b_from_a(&a).unwrap();
        prop_assert_eq!(a_from_b(&b).unwrap(), a.clone());
        // Zero-ness is preserved in both directions.
        prop_assert_eq!(a.is_zero(), b.is_zero());
        prop_assert_eq!(first_nonzero_b(&b).unwrap().is_none(), a.is_zero());
    }

    #[test]
    fn part_table_zero_iff_part_zero(seed in any::<u64>(), ell in 2u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = common::random_poly(&mut rng, 1, 6, 5, 2, 2);
        for (_, part) in adelab_core::indexcalc::homogeneous_parts(&poly) {
            let a = a_table(&part, ell).unwrap();
            let b = b_from_a(&a).unwrap();
            prop_assert_eq!(first_nonzero_b(&b).unwrap().is_none(), part.is_zero());
            prop_assert_eq!(a.is_zero(), part.is_zero());
        }
        prop_assert_eq!(AdePoly::zero(1).is_zero(), true);
    }

    #[test]
    fn upoly_eval_matches_term_by_term(
        seed in any::<u64>(),
        m in 0usize..=2,
        coords in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = common::random_upoly(&mut rng, m, 5, 4);
        let point: Vec<Complex> = coords[..=m].iter().map(|&(x, y)| Complex::from_f64(256, x, y)).collect();
        let fast = upoly_eval(&a, &point).unwrap();
        let slow = brute_force(&a, &point);
        if !slow.is_zero() {
            prop_assert!(rel_err(&fast, &slow) < 1e-60 || (&fast - &slow).abs_f64() < 1e-60);
        }
    }
}

#[test]
fn lambda_roundtrip_examples() {
    assert_eq!(lambda_from_qr(2, 2, 1, 2), Some(LambdaIndex(1, 0, 1)));
    assert_eq!(lambda_from_qr(2, 2, 0, 2), Some(LambdaIndex(0, 2, 0)));
    assert_eq!(lambda_from_qr(2, 1, 1, 2), None);
}
