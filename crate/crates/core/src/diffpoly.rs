//! Exact differential polynomials in the jet variables f, f′, f″, ….
//!
//! Terms are kept in a canonical order (weight ascending; within a weight,
//! exponent vectors compared from the highest derivative down, larger first),
//! so equality and rendering are deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numkernel::Complex;
use crate::specfun::FunctionJet;

/// c · Π (f⁽ʲ⁾)^{eⱼ}; exponents sparse, sorted by derivative order, all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffMonomial {
    exps: Vec<(u32, u32)>,
    coeff: Rational,
}

impl DiffMonomial {
    /// Builds a monomial from `(order, exponent)` pairs; zero exponents are
    /// dropped and repeated orders merged.
    pub fn new(coeff: Rational, pairs: &[(u32, u32)]) -> Result<Self> {
        if coeff.cmp0() == Ordering::Equal {
            return Err(Error::Invalid("monomial coefficient must be nonzero".into()));
        }
        Ok(DiffMonomial {
            exps: normalize_exps(pairs.iter().copied()),
            coeff,
        })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    /// `(order, exponent)` pairs in increasing order.
    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn exponent_of(&self, order: u32) -> u32 {
        self.exps
            .iter()
            .find(|(j, _)| *j == order)
            .map_or(0, |(_, e)| *e)
    }

    /// Σ (j+1)·eⱼ.
    pub fn weight(&self) -> u64 {
        weight_of(&self.exps)
    }

    /// Highest derivative order present, `None` for a constant.
    pub fn max_order(&self) -> Option<u32> {
        self.exps.last().map(|(j, _)| *j)
    }
}

fn normalize_exps(pairs: impl Iterator<Item = (u32, u32)>) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = pairs.filter(|(_, e)| *e > 0).collect();
    v.sort_unstable();
    let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
    for (j, e) in v {
        match out.last_mut() {
            Some((lj, le)) if *lj == j => *le += e,
            _ => out.push((j, e)),
        }
    }
    out
}

fn weight_of(exps: &[(u32, u32)]) -> u64 {
    exps.iter().map(|(j, e)| (*j as u64 + 1) * *e as u64).sum()
}

/// Canonical order on exponent vectors.
fn canonical_cmp(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    weight_of(a).cmp(&weight_of(b)).then_with(|| {
        // walk both from the highest derivative order downward; larger exponent first
        let mut ia = a.iter().rev().peekable();
        let mut ib = b.iter().rev().peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&&(ja, ea)), Some(&&(jb, eb))) => {
                    if ja != jb {
                        // the one with the higher order has a positive exponent there
                        return jb.cmp(&ja);
                    }
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    ia.next();
                    ib.next();
                }
            }
        }
    })
}

/// Polynomial over ℚ in the jet variables, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffPolynomial {
    terms: Vec<DiffMonomial>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        DiffPolynomial { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_map(std::iter::once((Vec::new(), c)))
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    /// The jet variable f⁽ʲ⁾.
    pub fn var(order: u32) -> Self {
        Self::from_map(std::iter::once((vec![(order, 1)], Rational::from(1))))
    }

    pub fn from_monomials(monos: impl IntoIterator<Item = DiffMonomial>) -> Self {
        Self::from_map(monos.into_iter().map(|m| (m.exps, m.coeff)))
    }

    fn from_map(items: impl Iterator<Item = (Vec<(u32, u32)>, Rational)>) -> Self {
        let mut acc: HashMap<Vec<(u32, u32)>, Rational> = HashMap::new();
        for (exps, c) in items {
            *acc.entry(exps).or_default() += c;
        }
        let mut terms: Vec<DiffMonomial> = acc
            .into_iter()
            .filter(|(_, c)| c.cmp0() != Ordering::Equal)
            .map(|(exps, coeff)| DiffMonomial { exps, coeff })
            .collect();
        terms.sort_by(|a, b| canonical_cmp(&a.exps, &b.exps));
        DiffPolynomial { terms }
    }

    pub fn terms(&self) -> &[DiffMonomial] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order used, `None` if the polynomial is constant.
    pub fn max_order(&self) -> Option<u32> {
        self.terms.iter().filter_map(DiffMonomial::max_order).max()
    }

    /// Coefficient of the monomial with the given `(order, exponent)` pairs.
    pub fn coefficient_of(&self, pairs: &[(u32, u32)]) -> Rational {
        let key = normalize_exps(pairs.iter().copied());
        self.terms
            .iter()
            .find(|t| t.exps == key)
            .map_or_else(Rational::new, |t| t.coeff.clone())
    }

    /// Sum of all coefficients, i.e. the value with every jet variable set to 1.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.iter().map(|t| &t.coeff).sum()
    }

    pub fn is_homogeneous_of_weight(&self, w: u64) -> bool {
        self.terms.iter().all(|t| t.weight() == w)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|t| (t.exps.clone(), t.coeff.clone())),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_map(
            self.terms
                .iter()
                .map(|t| (t.exps.clone(), Rational::from(&t.coeff * c))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut items = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps = normalize_exps(a.exps.iter().chain(b.exps.iter()).copied());
                items.push((exps, Rational::from(&a.coeff * &b.coeff)));
            }
        }
        Self::from_map(items.into_iter())
    }

    /// Multiplication by the jet variable f⁽ʲ⁾.
    fn mul_var(&self, order: u32) -> Self {
        Self::from_map(self.terms.iter().map(|t| {
            let exps = normalize_exps(t.exps.iter().copied().chain(std::iter::once((order, 1))));
            (exps, t.coeff.clone())
        }))
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.cmp0() == Ordering::Less;
            let mag = Rational::from(t.coeff.abs_ref());
            match (idx, negative) {
                (0, true) => out.write_str("-")?,
                (0, false) => {}
                (_, true) => out.write_str(" - ")?,
                (_, false) => out.write_str(" + ")?,
            }
            let factors: Vec<String> = t.exps.iter().map(|&(j, e)| render_factor(j, e)).collect();
            let is_one = mag == 1;
            if factors.is_empty() {
                write!(out, "{mag}")?;
            } else if is_one {
                out.write_str(&factors.join("*"))?;
            } else {
                write!(out, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn render_var(order: u32) -> String {
    match order {
        0..=3 => format!("f{}", "'".repeat(order as usize)),
        k => format!("f^({k})"),
    }
}

fn render_factor(order: u32, exp: u32) -> String {
    let v = render_var(order);
    match (order, exp) {
        (_, 1) => v,
        (0, e) => format!("{v}^{e}"),
        (_, e) => format!("({v})^{e}"),
    }
}

/// Leibniz-rule derivative with d f⁽ʲ⁾ = f⁽ʲ⁺¹⁾.
pub fn formal_derive(p: &DiffPolynomial) -> DiffPolynomial {
    let mut items = Vec::new();
    for t in &p.terms {
        for (idx, &(j, e)) in t.exps.iter().enumerate() {
            let mut exps = t.exps.clone();
            if e == 1 {
                exps.remove(idx);
            } else {
                exps[idx].1 = e - 1;
            }
            let exps = normalize_exps(exps.into_iter().chain(std::iter::once((j + 1, 1))));
            items.push((exps, Rational::from(&t.coeff * e)));
        }
    }
    DiffPolynomial::from_map(items.into_iter())
}

fn ratio_cache() -> &'static RwLock<Vec<Arc<DiffPolynomial>>> {
    static CACHE: OnceLock<RwLock<Vec<Arc<DiffPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Arc::new(DiffPolynomial::one())]))
}

/// Rₙ with Γ⁽ⁿ⁾/Γ = Rₙ(f, f′, …, f⁽ⁿ⁻¹⁾): R₀ = 1, Rₙ₊₁ = Rₙ′ + f·Rₙ.
pub fn gamma_ratio_poly(n: usize) -> Arc<DiffPolynomial> {
    {
        let cache = ratio_cache().read().expect("ratio cache poisoned");
        if let Some(p) = cache.get(n) {
            return Arc::clone(p);
        }
    }
    let mut cache = ratio_cache().write().expect("ratio cache poisoned");
    while cache.len() <= n {
        let prev = cache.last().expect("seeded");
        let next = formal_derive(prev).add(&prev.mul_var(0));
        cache.push(Arc::new(next));
    }
    Arc::clone(&cache[n])
}

/// Coefficient of f^{n−2}f′ in Rₙ (zero for n = 1, where the monomial is absent).
pub fn extract_cn(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Invalid("c_n is defined for n >= 1".into()));
    }
    if n == 1 {
        return Ok(Rational::new());
    }
    Ok(gamma_ratio_poly(n).coefficient_of(&[(0, n as u32 - 2), (1, 1)]))
}

/// Closed form n(n−1)/2.
pub fn cn_closed_form(n: u64) -> Integer {
    Integer::from(n) * (n.saturating_sub(1)) / 2u32
}

/// Evaluates `p` on a jet (base = f, derivs = f′, f″, …).
pub fn eval_diffpoly(p: &DiffPolynomial, jet: &FunctionJet) -> Result<Complex> {
    let prec = jet.base.prec();
    if let Some(need) = p.max_order() {
        if need as usize > jet.order() {
            return Err(Error::InsufficientJet {
                have: jet.order(),
                need: need as usize,
            });
        }
    }
    // cache powers of each jet entry as they are requested
    let mut powers: Vec<Vec<Complex>> = Vec::new();
    let mut total = Complex::zero(prec);
    for t in &p.terms {
        let mut term = Complex::from_rational(prec, &t.coeff);
        for &(j, e) in &t.exps {
            let j = j as usize;
            if powers.len() <= j {
                powers.resize_with(j + 1, Vec::new);
            }
            let list = &mut powers[j];
            let x = jet.get(j).expect("order checked");
            if list.is_empty() {
                list.push(x.clone());
            }
            while list.len() < e as usize {
                let next = list.last().expect("non-empty") * x;
                list.push(next);
            }
            term = &term * &list[e as usize - 1];
        }
        total += &term;
    }
    total.checked("eval_diffpoly")
}
