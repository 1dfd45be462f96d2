//! Multi-index algebra for polynomials P(u₀, …, u_m; v₀, v₁, v₂).
//!
//! A polynomial is stored as a map from the v-exponent triple λ to a
//! coefficient polynomial a_λ(u). Homogeneous parts group keys by
//! |λ| = λ₀+λ₁+λ₂; within a part the pair (q, r) = (λ₁+ℓλ₂, λ₂) determines λ,
//! which gives the a-table, and the binomial transform
//! b_{q,r} = Σ_{s≥r} C(s,r)·a_{q,s} gives the b-table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{binom, float_to_decimal, parse_real, Complex};

/// Rejects the degenerate regimes ℓ = 1 and n = 0.
pub fn check_regime(ell: u32, n: u32) -> Result<()> {
    if ell < 2 || n < 1 {
        return Err(Error::Unsupported(format!(
            "ell = {ell}, n = {n}: the cases ell = 1 or n = 0 reduce to a relation between Gamma \
             and a single derivative and are handled by a separate classical argument; \
             this tool requires ell >= 2 and n >= 1"
        )));
    }
    Ok(())
}

/// Polynomial in u₀..u_m with complex coefficients; zero terms are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct UPoly {
    m: usize,
    terms: BTreeMap<Vec<u32>, Complex>,
}

impl UPoly {
    pub fn zero(m: usize) -> Self {
        UPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: Complex) -> Self {
        let mut p = UPoly::zero(m);
        p.add_term(vec![0; m + 1], c).expect("length matches");
        p
    }

    /// Single monomial `c · u^exps`.
    pub fn monomial(m: usize, exps: Vec<u32>, c: Complex) -> Result<Self> {
        let mut p = UPoly::zero(m);
        p.add_term(exps, c)?;
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · u^exps`, dropping the term if the coefficient cancels exactly.
    pub fn add_term(&mut self, exps: Vec<u32>, c: Complex) -> Result<()> {
        if exps.len() != self.m + 1 {
            return Err(Error::Invalid(format!(
                "u-exponent vector has length {}, expected {}",
                exps.len(),
                self.m + 1
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &UPoly, k: i64) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.scale_i64(k)).expect("same m");
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }
}

/// Evaluates `a` at `point = (u₀, …, u_m)`.
pub fn upoly_eval(a: &UPoly, point: &[Complex]) -> Result<Complex> {
    if point.len() != a.m + 1 {
        return Err(Error::Invalid(format!(
            "evaluation point has {} coordinates, polynomial needs {}",
            point.len(),
            a.m + 1
        )));
    }
    let prec = point.iter().map(Complex::prec).max().unwrap_or(64);
    let mut powers: Vec<Vec<Complex>> = point.iter().map(|u| vec![Complex::one(prec), u.clone()]).collect();
    let mut total = Complex::zero(prec);
    for (exps, c) in &a.terms {
        let mut term = c.with_prec(prec);
        for (i, &e) in exps.iter().enumerate() {
            let list = &mut powers[i];
            while list.len() <= e as usize {
                let next = list.last().expect("seeded") * &point[i];
                list.push(next);
            }
            if e > 0 {
                term = &term * &list[e as usize];
            }
        }
        total += &term;
    }
    total.checked("upoly_eval")
}

/// Exponent triple (λ₀, λ₁, λ₂) of v₀, v₁, v₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LambdaIndex(pub u32, pub u32, pub u32);

impl LambdaIndex {
    /// |λ| = λ₀ + λ₁ + λ₂.
    pub fn total(&self) -> u32 {
        self.0 + self.1 + self.2
    }
}

impl fmt::Display for LambdaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

/// |λ|* = λ₁ + ℓλ₂.
pub fn star_weight(lambda: &LambdaIndex, ell: u32) -> u32 {
    lambda.1 + ell * lambda.2
}

/// The λ with |λ| = p, |λ|* = q, λ₂ = r, or `None` if a component is negative.
pub fn lambda_from_qr(p: u32, q: u32, r: u32, ell: u32) -> Option<LambdaIndex> {
    let l1 = q as i64 - ell as i64 * r as i64;
    let l0 = p as i64 - q as i64 + (ell as i64 - 1) * r as i64;
    if l0 < 0 || l1 < 0 {
        return None;
    }
    Some(LambdaIndex(l0 as u32, l1 as u32, r))
}

/// P = Σ_λ a_λ(u) v₀^{λ₀} v₁^{λ₁} v₂^{λ₂}; an empty map is the zero polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct AdePoly {
    m: usize,
    coeffs: BTreeMap<LambdaIndex, UPoly>,
}

impl AdePoly {
    pub fn zero(m: usize) -> Self {
        AdePoly {
            m,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// L = max |λ| over the stored keys (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(LambdaIndex::total).max().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<LambdaIndex, UPoly> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &LambdaIndex) -> Option<&UPoly> {
        self.coeffs.get(lambda)
    }

    /// Adds `a · v^λ`, removing the key if it cancels.
    pub fn add(&mut self, lambda: LambdaIndex, a: &UPoly) -> Result<()> {
        if a.m != self.m {
            return Err(Error::Invalid(format!(
                "coefficient has m = {}, polynomial has m = {}",
                a.m, self.m
            )));
        }
        let entry = self.coeffs.entry(lambda).or_insert_with(|| UPoly::zero(a.m));
        entry.add_scaled(a, 1);
        if entry.is_zero() {
            self.coeffs.remove(&lambda);
        }
        Ok(())
    }

    /// Adds `c · u^exps · v^λ`.
    pub fn add_term(&mut self, lambda: LambdaIndex, exps: Vec<u32>, c: Complex) -> Result<()> {
        let mono = UPoly::monomial(self.m, exps, c)?;
        self.add(lambda, &mono)
    }

    /// Evaluates P at u = `point`, (v₀, v₁, v₂) = `v`.
    pub fn eval(&self, point: &[Complex], v: &[Complex; 3]) -> Result<Complex> {
        let prec = v.iter().chain(point.iter()).map(Complex::prec).max().unwrap_or(64);
        let mut total = Complex::zero(prec);
        for (lambda, a) in &self.coeffs {
            let mut term = upoly_eval(a, point)?;
            for (x, e) in v.iter().zip([lambda.0, lambda.1, lambda.2]) {
                if e > 0 {
                    term = &term * &x.powi(e as i64)?;
                }
            }
            total += &term;
        }
        total.checked("AdePoly::eval")
    }
}

/// Splits P into its homogeneous parts P_p, ordered by p.
pub fn homogeneous_parts(poly: &AdePoly) -> Vec<(u32, AdePoly)> {
    let mut parts: BTreeMap<u32, AdePoly> = BTreeMap::new();
    for (lambda, a) in &poly.coeffs {
        parts
            .entry(lambda.total())
            .or_insert_with(|| AdePoly::zero(poly.m))
            .coeffs
            .insert(*lambda, a.clone());
    }
    parts.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableKind {
    A,
    B,
}

/// (q, r)-indexed coefficient table of one homogeneous part; absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub p: u32,
    pub ell: u32,
    pub m: usize,
    /// M_p = max |λ|*.
    pub max_q: u32,
    /// N_p = max λ₂.
    pub max_r: u32,
    pub kind: TableKind,
    entries: BTreeMap<(u32, u32), UPoly>,
}

impl CoeffTable {
    pub fn new(p: u32, ell: u32, m: usize, max_q: u32, max_r: u32, kind: TableKind) -> Self {
        CoeffTable {
            p,
            ell,
            m,
            max_q,
            max_r,
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Entry (q, r); `None` means zero.
    pub fn get(&self, q: u32, r: u32) -> Option<&UPoly> {
        self.entries.get(&(q, r))
    }

    /// Nonzero entries in (q, r) order.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &UPoly)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sets entry (q, r), storing nothing for a zero polynomial.
    pub fn set(&mut self, q: u32, r: u32, a: UPoly) -> Result<()> {
        if q > self.max_q || r > self.max_r {
            return Err(Error::Invalid(format!(
                "entry ({q},{r}) outside the {}x{} grid",
                self.max_q + 1,
                self.max_r + 1
            )));
        }
        if a.m != self.m {
            return Err(Error::Invalid("entry has the wrong number of u variables".into()));
        }
        if a.is_zero() {
            self.entries.remove(&(q, r));
        } else {
            self.entries.insert((q, r), a);
        }
        Ok(())
    }
}

/// a-table of a homogeneous part: a_{q,r} = a_λ with λ = lambda_from_qr(p, q, r, ℓ).
pub fn a_table(part: &AdePoly, ell: u32) -> Result<CoeffTable> {
    check_regime(ell, 1)?;
    let mut p = None;
    for lambda in part.coeffs.keys() {
        match p {
            None => p = Some(lambda.total()),
            Some(p0) if p0 != lambda.total() => {
                return Err(Error::Invalid(format!(
                    "polynomial is not homogeneous: |λ| takes values {p0} and {}",
                    lambda.total()
                )))
            }
            _ => {}
        }
    }
    let p = p.unwrap_or(0);
    let max_q = part.coeffs.keys().map(|l| star_weight(l, ell)).max().unwrap_or(0);
    let max_r = part.coeffs.keys().map(|l| l.2).max().unwrap_or(0);
    let mut table = CoeffTable::new(p, ell, part.m, max_q, max_r, TableKind::A);
    for (lambda, a) in &part.coeffs {
        let q = star_weight(lambda, ell);
        debug_assert_eq!(lambda_from_qr(p, q, lambda.2, ell), Some(*lambda));
        table.set(q, lambda.2, a.clone())?;
    }
    Ok(table)
}

fn transform(t: &CoeffTable, from: TableKind, to: TableKind, alternating: bool) -> Result<CoeffTable> {
    if t.kind != from {
        return Err(Error::Invalid(format!("expected a {from:?} table, got {:?}", t.kind)));
    }
    let mut out = CoeffTable::new(t.p, t.ell, t.m, t.max_q, t.max_r, to);
    for q in 0..=t.max_q {
        for r in 0..=t.max_r {
            let mut acc = UPoly::zero(t.m);
            for s in r..=t.max_r {
                if let Some(a) = t.get(q, s) {
                    let c = binom(s as u64, r as u64)
                        .to_i64()
                        .ok_or_else(|| Error::Invalid("binomial coefficient overflow".into()))?;
                    let sign = if alternating && (s - r) % 2 == 1 { -1 } else { 1 };
                    acc.add_scaled(a, sign * c);
                }
            }
            out.set(q, r, acc)?;
        }
    }
    Ok(out)
}

/// b_{q,r} = Σ_{s≥r} C(s,r)·a_{q,s}.
pub fn b_from_a(t: &CoeffTable) -> Result<CoeffTable> {
    transform(t, TableKind::A, TableKind::B, false)
}

/// Inverse transform a_{q,r} = Σ_{s≥r} (−1)^{s−r} C(s,r)·b_{q,s}.
pub fn a_from_b(t: &CoeffTable) -> Result<CoeffTable> {
    transform(t, TableKind::B, TableKind::A, true)
}

/// First structurally nonzero b_{q,r}, scanning r ascending and, for each r,
/// q descending from M_p; `None` when the whole table vanishes.
pub fn first_nonzero_b(t: &CoeffTable) -> Result<Option<(u32, u32)>> {
    if t.kind != TableKind::B {
        return Err(Error::Invalid("first_nonzero_b needs a B table".into()));
    }
    for r in 0..=t.max_r {
        for q in (0..=t.max_q).rev() {
            if t.get(q, r).is_some() {
                return Ok(Some((q, r)));
            }
        }
    }
    Ok(None)
}

/// Rebuilds the homogeneous part from its a-table.
pub fn reassemble_part(t: &CoeffTable) -> Result<AdePoly> {
    if t.kind != TableKind::A {
        return Err(Error::Invalid("reassembly needs an A table".into()));
    }
    let mut out = AdePoly::zero(t.m);
    for (&(q, r), a) in t.entries() {
        let lambda = lambda_from_qr(t.p, q, r, t.ell).ok_or_else(|| {
            Error::Invalid(format!("entry ({q},{r}) has no feasible exponent triple"))
        })?;
        out.add(lambda, a)?;
    }
    Ok(out)
}

/// Σ_p of the reassembled parts.
pub fn reassemble(m: usize, tables: &[CoeffTable]) -> Result<AdePoly> {
    let mut out = AdePoly::zero(m);
    for t in tables {
        for (lambda, a) in reassemble_part(t)?.coeffs {
            out.add(lambda, &a)?;
        }
    }
    Ok(out)
}

/// Per-part decomposition with a- and b-tables and the first nonzero b index.
#[derive(Debug, Clone)]
pub struct PartTables {
    pub p: u32,
    pub part: AdePoly,
    pub a: CoeffTable,
    pub b: CoeffTable,
    pub first_nonzero: Option<(u32, u32)>,
}

pub fn decompose(poly: &AdePoly, ell: u32) -> Result<Vec<PartTables>> {
    homogeneous_parts(poly)
        .into_iter()
        .map(|(p, part)| {
            let a = a_table(&part, ell)?;
            let b = b_from_a(&a)?;
            let first_nonzero = first_nonzero_b(&b)?;
            Ok(PartTables {
                p,
                part,
                a,
                b,
                first_nonzero,
            })
        })
        .collect()
}

/// On-disk form: `{"m": int, "terms": [{"lambda": [l0,l1,l2], "u_poly": [{"exps": [...], "re": "..", "im": ".."}]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AdePolyJson {
    pub m: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub lambda: [u32; 3],
    pub u_poly: Vec<UTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct UTermJson {
    pub exps: Vec<u32>,
    pub re: String,
    pub im: String,
}

impl AdePolyJson {
    /// Parses the coefficient strings at `prec` bits; repeated keys are summed.
    pub fn to_poly(&self, prec: u32) -> Result<AdePoly> {
        let mut out = AdePoly::zero(self.m);
        for t in &self.terms {
            let lambda = LambdaIndex(t.lambda[0], t.lambda[1], t.lambda[2]);
            for u in &t.u_poly {
                let c = Complex::new(parse_real(prec, &u.re)?, parse_real(prec, &u.im)?);
                out.add_term(lambda, u.exps.clone(), c)?;
            }
        }
        Ok(out)
    }

    pub fn from_poly(poly: &AdePoly, digits: Option<usize>) -> Self {
        AdePolyJson {
            m: poly.m,
            terms: poly
                .coeffs
                .iter()
                .map(|(l, a)| TermJson {
                    lambda: [l.0, l.1, l.2],
                    u_poly: upoly_to_json(a, digits),
                })
                .collect(),
        }
    }
}

pub fn upoly_to_json(a: &UPoly, digits: Option<usize>) -> Vec<UTermJson> {
    a.terms
        .iter()
        .map(|(e, c)| UTermJson {
            exps: e.clone(),
            re: float_to_decimal(&c.re, digits),
            im: float_to_decimal(&c.im, digits),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn c(re: i64, im: i64) -> Complex {
        Complex::from_f64(P, re as f64, im as f64)
    }

    fn v1sq_minus_v0v2() -> AdePoly {
        let mut p = AdePoly::zero(0);
        p.add_term(LambdaIndex(0, 2, 0), vec![0], c(1, 0)).unwrap();
        p.add_term(LambdaIndex(1, 0, 1), vec![0], c(-1, 0)).unwrap();
        p
    }

    #[test]
    fn parts_and_weights() {
        let mut p = AdePoly::zero(0);
        p.add_term(LambdaIndex(1, 1, 0), vec![0], c(1, 0)).unwrap();
        p.add_term(LambdaIndex(0, 0, 2), vec![0], c(1, 0)).unwrap();
        let parts = homogeneous_parts(&p);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, 2);

        let mut p = AdePoly::zero(0);
        p.add_term(LambdaIndex(0, 0, 0), vec![1], c(1, 0)).unwrap();
        p.add_term(LambdaIndex(1, 0, 0), vec![0], c(1, 0)).unwrap();
        let ps: Vec<u32> = homogeneous_parts(&p).iter().map(|x| x.0).collect();
        assert_eq!(ps, vec![0, 1]);

        assert_eq!(star_weight(&LambdaIndex(3, 0, 0), 5), 0);
        assert_eq!(star_weight(&LambdaIndex(0, 2, 0), 2), 2);
        assert_eq!(star_weight(&LambdaIndex(1, 0, 1), 2), 2);
    }

    #[test]
    fn lambda_recovery() {
        assert_eq!(lambda_from_qr(2, 2, 1, 2), Some(LambdaIndex(1, 0, 1)));
        assert_eq!(lambda_from_qr(2, 2, 0, 2), Some(LambdaIndex(0, 2, 0)));
        assert_eq!(lambda_from_qr(1, 2, 0, 2), None);
        for ell in 2..=4 {
            for p in 0..=6 {
                for q in 0..=ell * p {
                    for r in 0..=p {
                        if let Some(l) = lambda_from_qr(p, q, r, ell) {
                            assert_eq!(l.total(), p);
                            assert_eq!(star_weight(&l, ell), q);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tables_for_wronskian_like_polynomial() {
        let p = v1sq_minus_v0v2();
        let a = a_table(&p, 2).unwrap();
        assert_eq!((a.max_q, a.max_r), (2, 1));
        assert_eq!(a.get(2, 0), Some(&UPoly::constant(0, c(1, 0))));
        assert_eq!(a.get(2, 1), Some(&UPoly::constant(0, c(-1, 0))));
        assert_eq!(a.entries().count(), 2);
        let b = b_from_a(&a).unwrap();
        assert!(b.get(2, 0).is_none());
        assert_eq!(b.get(2, 1), Some(&UPoly::constant(0, c(-1, 0))));
        assert_eq!(first_nonzero_b(&b).unwrap(), Some((2, 1)));
        assert_eq!(a_from_b(&b).unwrap(), a);
    }

    #[test]
    fn trivial_tables() {
        let mut p = AdePoly::zero(0);
        p.add_term(LambdaIndex(3, 0, 0), vec![0], c(1, 0)).unwrap();
        let a = a_table(&p, 2).unwrap();
        assert_eq!(a.entries().count(), 1);
        assert!(a.get(0, 0).is_some());
        let b = b_from_a(&a).unwrap();
        assert_eq!(first_nonzero_b(&b).unwrap(), Some((0, 0)));
        assert_eq!(b.entries().collect::<Vec<_>>(), a.entries().collect::<Vec<_>>());

        let z = AdePoly::zero(1);
        assert!(a_table(&z, 2).unwrap().is_zero());
        let bz = b_from_a(&a_table(&z, 2).unwrap()).unwrap();
        assert_eq!(first_nonzero_b(&bz).unwrap(), None);
    }

    #[test]
    fn transform_rows() {
        let mut a = CoeffTable::new(4, 2, 0, 4, 2, TableKind::A);
        a.set(4, 0, UPoly::constant(0, c(2, 0))).unwrap();
        a.set(4, 1, UPoly::constant(0, c(3, 1))).unwrap();
        a.set(4, 2, UPoly::constant(0, c(5, 0))).unwrap();
        let b = b_from_a(&a).unwrap();
        assert_eq!(b.get(4, 0), Some(&UPoly::constant(0, c(10, 1))));
        assert_eq!(b.get(4, 1), Some(&UPoly::constant(0, c(13, 1))));
        assert_eq!(b.get(4, 2), Some(&UPoly::constant(0, c(5, 0))));
        assert_eq!(a_from_b(&b).unwrap(), a);
    }

    #[test]
    fn regime_validation() {
        assert_eq!(check_regime(1, 1).unwrap_err().kind(), "unsupported");
        assert_eq!(check_regime(2, 0).unwrap_err().kind(), "unsupported");
        assert!(check_regime(2, 1).is_ok());
        assert_eq!(a_table(&v1sq_minus_v0v2(), 1).unwrap_err().kind(), "unsupported");
    }

    #[test]
    fn syntactic_cancellation_is_structural_zero() {
        let mut p = AdePoly::zero(0);
        p.add_term(LambdaIndex(1, 0, 0), vec![1], c(1, 0)).unwrap();
        p.add_term(LambdaIndex(1, 0, 0), vec![1], c(-1, 0)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn upoly_point_values() {
        let seven = UPoly::constant(1, c(7, 0));
        assert_eq!(upoly_eval(&seven, &[c(3, 3), c(-1, 2)]).unwrap(), c(7, 0));
        let u0u1 = UPoly::monomial(1, vec![1, 1], c(1, 0)).unwrap();
        assert_eq!(upoly_eval(&u0u1, &[c(2, 0), c(3, 1)]).unwrap(), c(6, 2));
        assert!(upoly_eval(&u0u1, &[c(2, 0)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = v1sq_minus_v0v2();
        let j = AdePolyJson::from_poly(&p, None);
        let text = serde_json::to_string(&j).unwrap();
        let back: AdePolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_poly(P).unwrap(), p);
        assert!(serde_json::from_str::<AdePolyJson>(r#"{"m":0,"terms":[],"x":1}"#).is_err());
    }
}
