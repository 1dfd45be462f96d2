//! High-precision evaluators: log Γ, Γ, the digamma jet ψ, ψ′, …, ζ and its
//! derivatives, and the ratio bundle Γ⁽ʲ⁾/Γ.
//!
//! * log Γ: Stirling series with Bernoulli coefficients after shifting the
//!   argument up until `(|w| + Re w)/2` clears a precision-dependent radius.
//! * ψ⁽ⁿ⁾: the matching asymptotic series plus the recurrence
//!   ψ⁽ⁿ⁾(z+1) = ψ⁽ⁿ⁾(z) + (−1)ⁿ n!/zⁿ⁺¹.
//! * ζ: Euler–Maclaurin summation; derivatives come from a trapezoidal
//!   Cauchy integral over a circle around the point.

use std::f64::consts::PI;

use rug::Float;

use crate::diffpoly;
use crate::error::{Error, Result};
use crate::numkernel::{
    bernoulli_even, bernoulli_over_factorial, factorial, pi, root_of_unity, Complex, Precision,
};

/// Evaluators refuse to run closer than this to a pole.
pub const POLE_GUARD: f64 = 1e-6;

/// Default contour radius for ζ derivatives.
pub const DEFAULT_CONTOUR_RADIUS: f64 = 0.25;

/// A point together with its membership in the sector |arg z| ≤ 5π/6.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    pub z: Complex,
    pub in_sector_d: bool,
}

impl EvalPoint {
    pub fn new(z: Complex) -> Self {
        let p = z.prec().max(64);
        let bound = Float::with_val(p, pi(p) * 5u32) / 6u32;
        let in_sector_d = z.is_zero() || Float::with_val(p, z.arg().abs()) <= bound;
        EvalPoint { z, in_sector_d }
    }

    pub fn from_f64(prec: &Precision, re: f64, im: f64) -> Self {
        EvalPoint::new(Complex::from_f64(prec.working(), re, im))
    }
}

/// Value and derivatives of a function at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionJet {
    pub base: Complex,
    pub derivs: Vec<Complex>,
}

impl FunctionJet {
    pub fn new(base: Complex, derivs: Vec<Complex>) -> Self {
        FunctionJet { base, derivs }
    }

    /// Builds a jet from `[f, f', f'', ...]`.
    pub fn from_values(mut values: Vec<Complex>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("a jet needs at least its base value".into()));
        }
        let derivs = values.split_off(1);
        let base = values.pop().expect("non-empty");
        Ok(FunctionJet { base, derivs })
    }

    pub fn order(&self) -> usize {
        self.derivs.len()
    }

    /// `j`-th derivative, `j = 0` being the base value.
    pub fn get(&self, j: usize) -> Option<&Complex> {
        if j == 0 {
            Some(&self.base)
        } else {
            self.derivs.get(j - 1)
        }
    }

    pub fn values(&self) -> Vec<Complex> {
        std::iter::once(self.base.clone())
            .chain(self.derivs.iter().cloned())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.base.is_finite() && self.derivs.iter().all(Complex::is_finite)
    }
}

fn near_gamma_pole(z: &Complex) -> bool {
    let (re, im) = z.to_f64_pair();
    if im.abs() >= POLE_GUARD || re > 0.5 {
        return false;
    }
    let k = re.round();
    k <= 0.0 && (re - k).hypot(im) < POLE_GUARD
}

fn gamma_pole_guard(z: &Complex) -> Result<()> {
    if near_gamma_pole(z) {
        Err(Error::Pole(format!(
            "Γ has a pole within {POLE_GUARD:e} of z = {}",
            z.to_decimal(Some(12))
        )))
    } else {
        Ok(())
    }
}

/// Radius beyond which the asymptotic series reach `bits` bits.
fn asymptotic_radius(bits: u32, order: usize) -> f64 {
    0.2 * bits as f64 + 10.0 + 2.0 * order as f64
}

/// Cap on the automatically chosen contour node count.
pub const MAX_CONTOUR_NODES: usize = 1024;

/// Largest argument shift the recurrences will perform.
pub const MAX_SHIFT: usize = 100_000;

/// Smallest N ≥ 0 with (|z+N| + Re(z+N))/2 ≥ radius.
fn shift_count(z: &Complex, radius: f64) -> Result<usize> {
    let (re, im) = z.to_f64_pair();
    if re < -(MAX_SHIFT as f64) {
        return Err(Error::Unsupported(format!(
            "Re z = {re:e} is too far left of the origin for the shift recurrence"
        )));
    }
    let eff = |n: f64| ((re + n).hypot(im) + re + n) / 2.0;
    if eff(0.0) >= radius {
        return Ok(0);
    }
    let mut n = 0usize;
    if re < 0.0 {
        n = (-re).ceil() as usize;
    }
    while eff(n as f64) < radius {
        n += 1;
    }
    Ok(n)
}

fn extra_bits_for(z: &Complex) -> u32 {
    let a = z.abs_f64().max(1.0);
    (16.0 + (a * (a.ln() + 1.0)).log2().max(0.0)).ceil() as u32
}

/// Principal-branch log Γ(z), continuous on ℂ minus (−∞, 0].
pub fn log_gamma(pt: &EvalPoint, prec: &Precision) -> Result<Complex> {
    let z = &pt.z;
    gamma_pole_guard(z)?;
    let out = prec.working();
    let wp = out + extra_bits_for(z);
    let z = z.with_prec(wp);
    let n = shift_count(&z, asymptotic_radius(wp, 0))?;
    let w = z.add_i64(n as i64);

    let mut result = stirling_log_gamma(&w, wp)?;
    if n > 0 {
        // log Γ(z) = log Γ(z+N) − Σ log(z+j); the product is taken once and its
        // branch fixed from the running sum of factor arguments.
        let mut product = Complex::one(wp);
        let mut arg_sum = 0.0f64;
        let (re, im) = z.to_f64_pair();
        for j in 0..n {
            let factor = z.add_i64(j as i64);
            arg_sum += im.atan2(re + j as f64);
            product = &product * &factor;
        }
        let mut log_prod = product.ln()?;
        let principal = log_prod.im.to_f64();
        let turns = ((arg_sum - principal) / (2.0 * PI)).round();
        if turns != 0.0 {
            let mut shift = pi(wp);
            shift *= 2.0 * turns;
            log_prod.im += shift;
        }
        result = &result - &log_prod;
    }
    Ok(result.with_prec(out)).and_then(|r| r.checked("log_gamma"))
}

fn stirling_log_gamma(w: &Complex, wp: u32) -> Result<Complex> {
    let half = Float::with_val(wp, 0.5);
    let log_w = w.ln()?;
    let mut two_pi = pi(wp);
    two_pi *= 2u32;
    let half_log_two_pi = Float::with_val(wp, two_pi.ln()) / 2u32;
    let mut result = &(&w.add_real(&-half) * &log_w) - w;
    result.re += &half_log_two_pi;

    let inv = w.recip()?;
    let inv2 = inv.square();
    let mut power = inv; // w^{-(2k-1)}
    let max_terms = wp as usize;
    let table = bernoulli_even(max_terms + 1, wp);
    let tol_log2 = result.log2_abs() - wp as f64;
    let mut prev = f64::INFINITY;
    for k in 1..=max_terms {
        let denom = (2 * k * (2 * k - 1)) as u64;
        let coeff = Float::with_val(wp, &table[k] / denom);
        let term = power.scale(&coeff);
        let size = term.log2_abs();
        result += &term;
        if size < tol_log2 {
            return Ok(result);
        }
        if size > prev && k > 4 {
            return Err(Error::Divergence(format!(
                "Stirling series stalled at term {k}; radius too small"
            )));
        }
        prev = size;
        power = &power * &inv2;
    }
    Err(Error::Divergence("Stirling series exhausted its term budget".into()))
}

/// Γ(z) = exp(log Γ(z)).
pub fn gamma(pt: &EvalPoint, prec: &Precision) -> Result<Complex> {
    let wp = prec.working() + extra_bits_for(&pt.z);
    let inner = prec.with_extra_guard(wp - prec.working());
    let lg = log_gamma(pt, &inner)?;
    Ok(lg.exp()?.with_prec(prec.working()))
}

/// ψ(z), ψ′(z), …, ψ⁽ᵏ⁾(z).
pub fn digamma_jet(pt: &EvalPoint, k: usize, prec: &Precision) -> Result<FunctionJet> {
    let z = &pt.z;
    gamma_pole_guard(z)?;
    let out = prec.working();
    let wp = out + extra_bits_for(z) + (2 * k) as u32;
    let z = z.with_prec(wp);
    let values = if z.re.is_sign_negative() {
        reflected_polygamma(&z, k, wp)?
    } else {
        shifted_polygamma(&z, k, wp)?
    };
    let values: Vec<Complex> = values.into_iter().map(|v| v.with_prec(out)).collect();
    for v in &values {
        if !v.is_finite() {
            return Err(Error::NonFinite("digamma_jet"));
        }
    }
    FunctionJet::from_values(values)
}

/// ψ⁽ⁿ⁾(z) = (−1)ⁿ ψ⁽ⁿ⁾(1−z) − πⁿ⁺¹ cot⁽ⁿ⁾(πz) for Re z < 0.
fn reflected_polygamma(z: &Complex, k: usize, wp: u32) -> Result<Vec<Complex>> {
    let mirror = shifted_polygamma(&(&Complex::one(wp) - z), k, wp)?;
    let pi_z = z.scale(&pi(wp));
    let c = &pi_z.cos()? / &pi_z.sin()?;
    let cot_derivs = cot_derivatives(&c, k);
    let mut pi_pow = pi(wp);
    let mut out = Vec::with_capacity(k + 1);
    for (n, (m, d)) in mirror.into_iter().zip(cot_derivs).enumerate() {
        let m = if n % 2 == 1 { -m } else { m };
        out.push(&m - &d.scale(&pi_pow));
        pi_pow *= pi(wp);
    }
    Ok(out)
}

/// cot⁽ⁿ⁾ for n = 0..=k as polynomials in c = cot x, using d/dx cot = −(1 + cot²).
fn cot_derivatives(c: &Complex, k: usize) -> Vec<Complex> {
    let wp = c.prec();
    // coefficients of the polynomial in c, lowest degree first
    let mut poly: Vec<i64> = vec![0, 1];
    let mut out = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut acc = Complex::zero(wp);
        for &a in poly.iter().rev() {
            acc = (&acc * c).add_i64(a);
        }
        out.push(acc);
        if n == k {
            break;
        }
        // P′(c)·(−1 − c²)
        let deriv: Vec<i64> = poly.iter().enumerate().skip(1).map(|(i, a)| a * i as i64).collect();
        let mut next = vec![0i64; deriv.len() + 2];
        for (i, a) in deriv.iter().enumerate() {
            next[i] -= a;
            next[i + 2] -= a;
        }
        poly = next;
    }
    out
}

/// Polygamma values via the upward shift and the asymptotic series.
fn shifted_polygamma(z: &Complex, k: usize, wp: u32) -> Result<Vec<Complex>> {
    let z = z.clone();
    let n_shift = shift_count(&z, asymptotic_radius(wp, k))?;
    let w = z.add_i64(n_shift as i64);

    let mut values = polygamma_asymptotic(&w, k, wp)?;
    if n_shift > 0 {
        let mut sums = vec![Complex::zero(wp); k + 1];
        for j in 0..n_shift {
            let inv = z.add_i64(j as i64).recip()?;
            let mut power = inv.clone();
            for s in sums.iter_mut() {
                *s += &power;
                power = &power * &inv;
            }
        }
        for (order, (v, s)) in values.iter_mut().zip(sums.iter()).enumerate() {
            // ψ⁽ⁿ⁾(z) = ψ⁽ⁿ⁾(z+N) − (−1)ⁿ n! Σ 1/(z+j)ⁿ⁺¹
            let mut c = Float::with_val(wp, &factorial(order as u64));
            if order % 2 == 1 {
                c = -c;
            }
            *v -= &s.scale(&c);
        }
    }
    Ok(values)
}

/// Asymptotic expansions of ψ⁽ⁿ⁾(w) for n = 0..=k at a point with large
/// effective radius.
fn polygamma_asymptotic(w: &Complex, k: usize, wp: u32) -> Result<Vec<Complex>> {
    let inv = w.recip()?;
    let inv2 = inv.square();
    let max_terms = wp as usize;
    let table = bernoulli_over_factorial(max_terms + 1, wp);
    let mut out = Vec::with_capacity(k + 1);

    // w^{-n}
    let mut inv_n = Complex::one(wp);
    for n in 0..=k {
        let mut leading = if n == 0 {
            let mut l = w.ln()?;
            l -= &inv.scale(&Float::with_val(wp, 0.5));
            l
        } else {
            // (n−1)!/wⁿ + n!/(2wⁿ⁺¹)
            let a = inv_n.scale(&Float::with_val(wp, &factorial(n as u64 - 1)));
            let b = (&inv_n * &inv).scale(&(Float::with_val(wp, &factorial(n as u64)) / 2u32));
            &a + &b
        };
        let tol_log2 = leading.log2_abs() - wp as f64;
        let mut series = Complex::zero(wp);
        let mut power = &inv_n * &inv2; // w^{-(2k+n)} at k = 1
        let mut prev = f64::INFINITY;
        let mut converged = false;
        for t in 1..=max_terms {
            // B_{2t} (2t+n−1)! / (2t)!
            let mut c = Float::with_val(wp, &factorial((2 * t + n - 1) as u64));
            c *= &table[t];
            let term = power.scale(&c);
            let size = term.log2_abs();
            series += &term;
            if size < tol_log2 {
                converged = true;
                break;
            }
            if size > prev && t > 4 {
                break;
            }
            prev = size;
            power = &power * &inv2;
        }
        if !converged {
            return Err(Error::Divergence(format!(
                "polygamma series of order {n} did not converge; shift radius too small"
            )));
        }
        if n == 0 {
            leading -= &series;
        } else {
            leading += &series;
            if n % 2 == 0 {
                leading = -leading;
            }
        }
        out.push(leading);
        inv_n = &inv_n * &inv;
    }
    Ok(out)
}

/// Riemann ζ(s) by Euler–Maclaurin summation, valid for every s ≠ 1.
pub fn zeta_eval(s: &Complex, prec: &Precision) -> Result<Complex> {
    let out = prec.working();
    let one = Complex::one(out.max(s.prec()));
    let dist = (s - &one).abs_f64();
    if dist < POLE_GUARD {
        return Err(Error::Pole(format!(
            "ζ has a pole at s = 1; |s − 1| = {dist:e} is below the guard {POLE_GUARD:e}"
        )));
    }
    let (sigma, _) = s.to_f64_pair();
    let modulus = s.abs_f64();
    let cutoff = (((modulus + out as f64) / PI).ceil() as u64).max(8) + 2;
    let growth = ((1.0 - sigma).max(0.0) * (cutoff as f64).log2()).ceil() as u32;
    let wp = out + 16 + growth + (modulus + 2.0).log2().ceil() as u32;
    let s = s.with_prec(wp);
    let neg_s = -&s;

    // n^{−s} is completely multiplicative: exponentials are needed only at primes.
    let len = cutoff as usize;
    let mut spf = vec![0usize; len];
    let mut powers: Vec<Complex> = Vec::with_capacity(len);
    powers.push(Complex::zero(wp));
    let mut sum = Complex::zero(wp);
    for n in 1..len {
        let value = if n == 1 {
            Complex::one(wp)
        } else if spf[n] == 0 {
            for k in (n..len).step_by(n) {
                if spf[k] == 0 {
                    spf[k] = n;
                }
            }
            neg_s.scale(&Float::with_val(wp, n).ln()).exp()?
        } else {
            &powers[spf[n]] * &powers[n / spf[n]]
        };
        sum += &value;
        powers.push(value);
    }
    let n_f = Float::with_val(wp, cutoff);
    let ln_cutoff = Float::with_val(wp, n_f.ln_ref());
    let n_neg_s = neg_s.scale(&ln_cutoff).exp()?; // N^{-s}
    let s_minus_one = s.add_i64(-1);
    // N^{1−s}/(s−1) + N^{−s}/2
    sum += &(&n_neg_s.scale(&n_f) / &s_minus_one);
    sum += &n_neg_s.scale(&Float::with_val(wp, 0.5));

    let max_terms = (wp as usize) / 2 + 8;
    let table = bernoulli_over_factorial(max_terms + 1, wp);
    let n_sq = Float::with_val(wp, &n_f * &n_f);
    let mut poch = s.clone(); // s(s+1)…(s+2k−2)
    let mut npow = n_neg_s.scale(&Float::with_val(wp, n_f.recip_ref())); // N^{−s−2k+1}
    let mut converged = false;
    for k in 1..=max_terms {
        let term = (&poch * &npow).scale(&table[k]);
        let size = term.log2_abs();
        sum += &term;
        if term.is_zero() || size < sum.log2_abs() - wp as f64 {
            converged = true;
            break;
        }
        let a = s.add_i64((2 * k - 1) as i64);
        let b = s.add_i64((2 * k) as i64);
        poch = &poch * &(&a * &b);
        npow = npow.scale(&Float::with_val(wp, n_sq.recip_ref()));
    }
    if !converged {
        return Err(Error::Divergence(
            "Euler–Maclaurin correction terms did not fall below working precision".into(),
        ));
    }
    sum.with_prec(out).checked("zeta_eval")
}

/// Node count used for contour derivatives at a given requested precision:
/// 4·bits/10 rounded up to a power of two.
pub fn default_contour_nodes(bits: u32) -> usize {
    (((4 * bits) as usize).div_ceil(10)).next_power_of_two().max(8)
}

/// Derivatives f⁽⁰⁾ … f⁽ᵐᵃˣ⁾ at `center` via the trapezoidal rule on the circle
/// |w − center| = radius with `nodes` equally spaced points.
pub fn contour_derivatives<F>(
    f: F,
    center: &Complex,
    radius: f64,
    nodes: usize,
    max_order: usize,
    wp: u32,
) -> Result<Vec<Complex>>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    if nodes <= max_order {
        return Err(Error::Invalid(format!(
            "{nodes} contour nodes cannot resolve derivative order {max_order}"
        )));
    }
    let rho = Float::with_val(wp, radius);
    let center = center.with_prec(wp);
    let mut coeffs = vec![Complex::zero(wp); max_order + 1];
    for j in 0..nodes {
        let omega = root_of_unity(wp, j, nodes);
        let point = &center + &omega.scale(&rho);
        let value = f(&point)?.with_prec(wp);
        // accumulate value · ω^{−jk}
        let omega_inv = omega.conj();
        let mut rot = Complex::one(wp);
        for c in coeffs.iter_mut() {
            *c += &(&value * &rot);
            rot = &rot * &omega_inv;
        }
    }
    let mut out = Vec::with_capacity(max_order + 1);
    let mut rho_pow = Float::with_val(wp, 1);
    for (k, c) in coeffs.into_iter().enumerate() {
        let mut scale = Float::with_val(wp, &factorial(k as u64));
        scale /= nodes as u64;
        scale /= &rho_pow;
        out.push(c.scale(&scale));
        rho_pow *= &rho;
    }
    Ok(out)
}

/// Contour settings for [`zeta_jet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    pub radius: f64,
    /// `None` picks [`default_contour_nodes`].
    pub nodes: Option<usize>,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            radius: DEFAULT_CONTOUR_RADIUS,
            nodes: None,
        }
    }
}

/// ζ(s), ζ′(s), …, ζ⁽ᵐ⁾(s); the base value comes from [`zeta_eval`] and the
/// derivatives from a Cauchy contour of radius `cfg.radius`.
pub fn zeta_jet(s: &Complex, m: usize, prec: &Precision, cfg: &ContourConfig) -> Result<FunctionJet> {
    let base = zeta_eval(s, prec)?;
    if m == 0 {
        return Ok(FunctionJet::new(base, Vec::new()));
    }
    let out = prec.working();
    let dist = (&s.with_prec(out) - &Complex::one(out)).abs_f64();
    if dist <= cfg.radius {
        return Err(Error::Pole(format!(
            "contour of radius {} around s would enclose the pole at 1 (|s − 1| = {dist:.3e})",
            cfg.radius
        )));
    }
    // Trapezoidal error decays like (ρ/|s − 1|)^N; near the pole the default
    // node count is raised until that factor reaches the working precision.
    let nodes = cfg
        .nodes
        .unwrap_or_else(|| {
            let needed = (out as f64 * std::f64::consts::LN_2 / (dist / cfg.radius).ln()).ceil() as usize;
            default_contour_nodes(prec.requested())
                .max(needed.min(MAX_CONTOUR_NODES).next_power_of_two())
        })
        .max(m + 1);
    // m!/ρᵐ amplifies rounding in the node values
    let amplification = (factorial(m as u64).to_f64() / cfg.radius.powi(m as i32)).log2();
    let extra = amplification.max(0.0).ceil() as u32 + 8;
    let inner = prec.with_extra_guard(extra);
    let derivs = contour_derivatives(
        |w| zeta_eval(w, &inner),
        s,
        cfg.radius,
        nodes,
        m,
        inner.working(),
    )?;
    let derivs = derivs
        .into_iter()
        .skip(1)
        .map(|d| d.with_prec(out).checked("zeta_jet"))
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctionJet::new(base, derivs))
}

/// Γ⁽ʲ⁾(z)/Γ(z) for each requested order, evaluated as the exact differential
/// polynomial Rⱼ on the digamma jet.
pub fn gamma_ratio_eval(pt: &EvalPoint, orders: &[usize], prec: &Precision) -> Result<Vec<Complex>> {
    let max_order = orders.iter().copied().max().unwrap_or(0);
    let wp = prec.working();
    if max_order == 0 {
        gamma_pole_guard(&pt.z)?;
        return Ok(orders.iter().map(|_| Complex::one(wp)).collect());
    }
    let jet = digamma_jet(pt, max_order - 1, prec)?;
    orders
        .iter()
        .map(|&j| {
            if j == 0 {
                Ok(Complex::one(wp))
            } else {
                diffpoly::eval_diffpoly(&diffpoly::gamma_ratio_poly(j), &jet)
            }
        })
        .collect()
}
