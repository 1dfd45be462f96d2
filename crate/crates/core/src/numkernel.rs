//! Configurable-precision complex arithmetic and exact combinatorics.
//!
//! Real numbers are MPFR floats (`rug::Float`); the complex layer, the
//! principal-branch logarithm and all combinatorial helpers live here.
//! Precision is always supplied by a [`Precision`] value passed in by the
//! caller; there is no global default.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Exact rational, always stored in lowest terms with a positive denominator.
pub type RationalValue = Rational;

/// Working precision carried explicitly through every evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
    guard_bits: u32,
}

impl Precision {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Invalid(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        if guard_bits > bits {
            return Err(Error::Invalid(format!(
                "guard bits ({guard_bits}) may not exceed precision bits ({bits})"
            )));
        }
        Ok(Precision { bits, guard_bits })
    }

    /// `bits` requested with a default of 32 guard bits (or `bits` if smaller).
    pub fn bits(bits: u32) -> Result<Self> {
        Self::new(bits, 32.min(bits))
    }

    pub fn requested(&self) -> u32 {
        self.bits
    }

    pub fn guard(&self) -> u32 {
        self.guard_bits
    }

    /// Precision at which values are actually computed.
    pub fn working(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// Same requested precision, with `extra` additional guard bits.
    pub fn with_extra_guard(&self, extra: u32) -> Precision {
        Precision {
            bits: self.bits,
            guard_bits: self.guard_bits + extra,
        }
    }

    /// Relative accuracy target `2^-bits`.
    pub fn epsilon(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }

    pub fn doubled(&self) -> Precision {
        Precision {
            bits: self.bits * 2,
            guard_bits: self.guard_bits * 2,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            bits: 128,
            guard_bits: 32,
        }
    }
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Complex::new(re, Float::new(prec))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Complex::from_real(Float::with_val(prec, q))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Complex::from_real(Float::with_val(prec, v))
    }

    /// Parses decimal strings (e.g. `"0.75"`, `"-1e-3"`) for both parts.
    pub fn parse_parts(prec: u32, re: &str, im: &str) -> Result<Self> {
        Ok(Complex::new(parse_real(prec, re)?, parse_real(prec, im)?))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(
            Float::with_val(prec, &self.re),
            Float::with_val(prec, &self.im),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Returns `self` if finite, otherwise a `NonFinite` error naming `what`.
    pub fn checked(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// |z| as f64; saturates to infinity or zero outside the f64 range.
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log2 |z|, valid far outside the f64 exponent range.
    pub fn log2_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mant, exp) = a.to_f64_exp();
        mant.log2() + exp as f64
    }

    /// Argument in (-pi, pi]; `-0` imaginary parts are treated as `+0`.
    pub fn arg(&self) -> Float {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                return Float::with_val(p, Constant::Pi);
            }
            return Float::new(p);
        }
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let p = self.prec();
        let k = Float::with_val(p, q);
        self.scale(&k)
    }

    pub fn add_real(&self, x: &Float) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re + x), self.im.clone())
    }

    pub fn add_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re + k), self.im.clone())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        let p = self.prec();
        let n = self.norm_sqr();
        Complex::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
        .checked("recip")
    }

    pub fn exp(&self) -> Result<Self> {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Complex::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s)).checked("exp")
    }

    /// Principal logarithm, imaginary part in (-pi, pi].
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let p = self.prec();
        let modulus = Float::with_val(p, self.re.hypot_ref(&self.im));
        Complex::new(modulus.ln(), self.arg()).checked("ln")
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Complex::zero(self.prec()));
        }
        let half = self.ln()?;
        let p = self.prec();
        let h = Complex::new(Float::with_val(p, &half.re / 2u32), Float::with_val(p, &half.im / 2u32));
        h.exp()
    }

    /// Principal power `self^w = exp(w log self)`.
    pub fn pow(&self, w: &Complex) -> Result<Self> {
        (w * &self.ln()?).exp()
    }

    /// Integer power by repeated squaring; negative exponents go through `recip`.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let p = self.prec();
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        let mut result = Complex::one(p);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result.checked("powi")
    }

    pub fn sin(&self) -> Result<Self> {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let ch = Float::with_val(p, self.im.cosh_ref());
        let sh = Float::with_val(p, self.im.sinh_ref());
        Complex::new(Float::with_val(p, &s * &ch), Float::with_val(p, &c * &sh)).checked("sin")
    }

    pub fn cos(&self) -> Result<Self> {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let ch = Float::with_val(p, self.im.cosh_ref());
        let sh = Float::with_val(p, self.im.sinh_ref());
        Complex::new(Float::with_val(p, &c * &ch), Float::with_val(p, -(s * sh))).checked("cos")
    }

    /// Decimal rendering `a+bi` with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: Option<usize>) -> String {
        let re = float_to_decimal(&self.re, digits);
        let im = float_to_decimal(&self.im, digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(Some(20)))
    }
}

/// Decimal string for a float; `None` prints every significant digit the
/// precision supports.
pub fn float_to_decimal(x: &Float, digits: Option<usize>) -> String {
    let d = digits.unwrap_or_else(|| decimal_digits(x.prec()));
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(d.max(1)))
}

/// Number of decimal digits represented by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

pub fn parse_real(prec: u32, s: &str) -> Result<Float> {
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_real(prec, num)?;
        let d = parse_real(prec, den)?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(n / d);
    }
    let parsed = Float::parse(t).map_err(|e| Error::Invalid(format!("bad number {s:?}: {e}")))?;
    let v = Float::with_val(prec, parsed);
    if !v.is_finite() {
        return Err(Error::Invalid(format!("non-finite number {s:?}")));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, with real parts in decimal or
/// `p/q` form, e.g. `3/4+40i`.
pub fn parse_complex(prec: u32, s: &str) -> Result<Complex> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Invalid("empty complex literal".into()));
    }
    if !t.ends_with('i') {
        return Ok(Complex::from_real(parse_real(prec, &t)?));
    }
    let body = &t[..t.len() - 1];
    // split at the last sign that is not the leading one and not an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let (re_s, im_s) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im_s = match im_s {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(Complex::new(
        parse_real(prec, re_s)?,
        parse_real(prec, im_s.trim_start_matches('+'))?,
    ))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Complex> for &'a Complex {
            type Output = Complex;
            fn $method(self, rhs: &'a Complex) -> Complex {
                let f: fn(&Complex, &Complex) -> Complex = $body;
                f(self, rhs)
            }
        }
        impl $trait<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &'a Complex) -> Complex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Complex> for &'a Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let p = a.prec().max(b.prec());
    Complex::new(Float::with_val(p, &a.re + &b.re), Float::with_val(p, &a.im + &b.im))
});

forward_binop!(Sub, sub, |a, b| {
    let p = a.prec().max(b.prec());
    Complex::new(Float::with_val(p, &a.re - &b.re), Float::with_val(p, &a.im - &b.im))
});

forward_binop!(Mul, mul, |a, b| {
    let p = a.prec().max(b.prec());
    let mut re = Float::with_val(p, &a.re * &b.re);
    re -= Float::with_val(p, &a.im * &b.im);
    let mut im = Float::with_val(p, &a.re * &b.im);
    im += Float::with_val(p, &a.im * &b.re);
    Complex::new(re, im)
});

// Division by zero yields non-finite parts; callers that can hit it use `recip` or guard first.
forward_binop!(Div, div, |a, b| {
    let p = a.prec().max(b.prec());
    let n = b.norm_sqr();
    let mut re = Float::with_val(p, &a.re * &b.re);
    re += Float::with_val(p, &a.im * &b.im);
    let mut im = Float::with_val(p, &a.im * &b.re);
    im -= Float::with_val(p, &a.re * &b.im);
    Complex::new(re / &n, im / &n)
});

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -(self.clone())
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<Complex> for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        *self += &rhs;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign<Complex> for Complex {
    fn sub_assign(&mut self, rhs: Complex) {
        *self -= &rhs;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, rhs: &Complex) {
        *self = &*self * rhs;
    }
}

/// `log z` on the principal branch (operation-level wrapper over [`Complex::ln`]).
pub fn complex_log(z: &Complex) -> Result<Complex> {
    z.ln()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binom(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    let k = k.min(n - k);
    let mut acc = Integer::from(1);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial a(a-1)...(a-j+1)/j! for any integer `a`.
pub fn gen_binom(a: i64, j: u64) -> Rational {
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for i in 0..j {
        num *= Integer::from(a) - Integer::from(i);
        den *= i + 1;
    }
    Rational::from((num, den))
}

pub fn factorial(n: u64) -> Integer {
    let mut acc = Integer::from(1);
    for i in 2..=n {
        acc *= i;
    }
    acc
}

fn bernoulli_store() -> &'static RwLock<Vec<Rational>> {
    static STORE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

/// Bernoulli number B_n with the convention B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    {
        let guard = bernoulli_store().read().expect("bernoulli cache poisoned");
        if let Some(b) = guard.get(n) {
            return b.clone();
        }
    }
    let mut guard = bernoulli_store().write().expect("bernoulli cache poisoned");
    while guard.len() <= n {
        let m = guard.len();
        if m > 1 && m % 2 == 1 {
            guard.push(Rational::new());
            continue;
        }
        // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
        let mut acc = Rational::new();
        for (k, bk) in guard.iter().enumerate() {
            if bk.cmp0().is_eq() {
                continue;
            }
            acc += Rational::from(binom((m + 1) as u64, k as u64)) * bk;
        }
        acc /= (m + 1) as u64;
        guard.push(-acc);
    }
    guard[n].clone()
}

type FloatTable = Arc<Vec<Float>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TableKind {
    Even,
    OverFactorial,
}

fn bernoulli_float_cache() -> &'static RwLock<Vec<(TableKind, u32, FloatTable)>> {
    static CACHE: OnceLock<RwLock<Vec<(TableKind, u32, FloatTable)>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

fn bernoulli_table(kind: TableKind, count: usize, prec: u32) -> FloatTable {
    {
        let guard = bernoulli_float_cache().read().expect("cache poisoned");
        if let Some((_, _, t)) = guard
            .iter()
            .find(|(k, p, t)| *k == kind && *p == prec && t.len() >= count)
        {
            return Arc::clone(t);
        }
    }
    let len = count.max(32).next_power_of_two();
    let mut table = Vec::with_capacity(len);
    let mut fact = Integer::from(1);
    for k in 0..len {
        if k > 0 {
            fact *= (2 * k - 1) as u64;
            fact *= (2 * k) as u64;
        }
        let q = match kind {
            TableKind::Even => bernoulli(2 * k),
            TableKind::OverFactorial => bernoulli(2 * k) / Rational::from(&fact),
        };
        table.push(Float::with_val(prec, &q));
    }
    let table = Arc::new(table);
    let mut guard = bernoulli_float_cache().write().expect("cache poisoned");
    guard.retain(|(k, p, _)| !(*k == kind && *p == prec));
    guard.push((kind, prec, Arc::clone(&table)));
    table
}

/// Floats `B_{2k}` for k = 0..count at `prec` bits, memoized per precision.
pub fn bernoulli_even(count: usize, prec: u32) -> FloatTable {
    bernoulli_table(TableKind::Even, count, prec)
}

/// Floats `B_{2k} / (2k)!` for k = 0..count at `prec` bits, memoized per precision.
pub fn bernoulli_over_factorial(count: usize, prec: u32) -> FloatTable {
    bernoulli_table(TableKind::OverFactorial, count, prec)
}

/// Relative distance |a - b| / max(|b|, tiny).
pub fn rel_err(a: &Complex, b: &Complex) -> f64 {
    let d = (a - b).abs();
    let scale = b.abs();
    if scale.is_zero() {
        return d.to_f64();
    }
    Float::with_val(d.prec(), &d / &scale).to_f64()
}

pub fn abs_err(a: &Complex, b: &Complex) -> f64 {
    (a - b).abs().to_f64()
}

/// Unit-circle node exp(2 pi i j / n).
pub fn root_of_unity(prec: u32, j: usize, n: usize) -> Complex {
    let mut theta = pi(prec);
    theta *= 2u32;
    theta *= j as u64;
    theta /= n as u64;
    let (s, c) = theta.sin_cos(Float::new(prec));
    Complex::new(c, s)
}

/// Converts an f64 angle-based polar form; used only for test geometry.
pub fn from_polar_f64(prec: u32, r: f64, theta: f64) -> Complex {
    let mut t = Float::with_val(prec, theta);
    if (theta.abs() - PI).abs() < 1e-15 {
        t = pi(prec) * theta.signum();
    }
    let (s, c) = t.sin_cos(Float::new(prec));
    let r = Float::with_val(prec, r);
    Complex::new(Float::with_val(prec, &r * &c), Float::with_val(prec, &r * &s))
}

/// x^k for a real float and integer k.
pub fn float_powi(x: &Float, k: i32) -> Float {
    Float::with_val(x.prec(), x.pow(k))
}
