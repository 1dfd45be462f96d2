//! Random generators shared by the integration tests.
#![allow(dead_code)]

use adelab_core::indexcalc::{AdePoly, CoeffTable, LambdaIndex, TableKind, UPoly};
use adelab_core::Complex;
use rand::Rng;

pub const PREC: u32 = 128;

fn gaussian_int<R: Rng>(rng: &mut R, bound: i64) -> Complex {
    loop {
        let re = rng.gen_range(-bound..=bound);
        let im = rng.gen_range(-bound..=bound);
        if re != 0 || im != 0 {
            return Complex::from_f64(PREC, re as f64, im as f64);
        }
    }
}

/// Nonzero u-polynomial with `terms` monomials of degree ≤ `max_exp` per variable.
pub fn random_upoly<R: Rng>(rng: &mut R, m: usize, terms: usize, max_exp: u32) -> UPoly {
    loop {
        let mut a = UPoly::zero(m);
        for _ in 0..terms {
            let exps = (0..=m).map(|_| rng.gen_range(0..=max_exp)).collect();
            a.add_term(exps, gaussian_int(rng, 3)).unwrap();
        }
        if !a.is_zero() {
            return a;
        }
    }
}

/// Nonzero polynomial with up to `max_terms` exponent triples of total degree ≤ `max_p`.
pub fn random_poly<R: Rng>(rng: &mut R, m: usize, max_terms: usize, max_p: u32, u_terms: usize, max_exp: u32) -> AdePoly {
    loop {
        let mut poly = AdePoly::zero(m);
        for _ in 0..rng.gen_range(1..=max_terms) {
            let l0 = rng.gen_range(0..=max_p);
            let l1 = rng.gen_range(0..=max_p - l0);
            let l2 = rng.gen_range(0..=max_p - l0 - l1);
            let k = rng.gen_range(1..=u_terms);
            let a = random_upoly(rng, m, k, max_exp);
            poly.add(LambdaIndex(l0, l1, l2), &a).unwrap();
        }
        if !poly.is_zero() {
            return poly;
        }
    }
}

/// Random a-table on a (max_q+1)×(max_r+1) grid.
pub fn random_a_table<R: Rng>(rng: &mut R, max_m: usize, max_p: u32, max_r: u32) -> CoeffTable {
    let m = rng.gen_range(0..=max_m);
    let p = rng.gen_range(0..=max_p);
    let ell = rng.gen_range(2..=3);
    let r_hi = rng.gen_range(0..=max_r.min(p));
    let q_hi = rng.gen_range(0..=ell * p);
    let mut t = CoeffTable::new(p, ell, m, q_hi, r_hi, TableKind::A);
    for q in 0..=q_hi {
        for r in 0..=r_hi {
            if rng.gen_bool(0.5) {
                t.set(q, r, random_upoly(rng, m, 2, 2)).unwrap();
            }
        }
    }
    t
}
