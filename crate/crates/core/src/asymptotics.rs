//! Ratio quantities built on Γ and its log-derivative f = Γ′/Γ:
//! F = Γ⁽ⁿ⁾/Γ, the correction terms εₙ, the bounded quotient G in its direct
//! and power-series forms, H = (f′/f²)·G, and large-|z| checks of their
//! asymptotic laws.

use std::collections::BTreeMap;

use rug::{Float, Rational};

use crate::diffpoly::{cn_closed_form, eval_diffpoly, gamma_ratio_poly};
use crate::error::{Error, Result};
use crate::indexcalc::check_regime;
use crate::numkernel::{gen_binom, pi, rel_err, Complex, Precision};
use crate::specfun::{contour_derivatives, digamma_jet, gamma, EvalPoint, FunctionJet};

/// Parameters ℓ ≥ 2, n ≥ 1 and the truncation order J of the G series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsymParams {
    ell: u32,
    n: u32,
    pub series_terms: usize,
}

impl AsymParams {
    pub const DEFAULT_SERIES_TERMS: usize = 8;

    pub fn new(ell: u32, n: u32) -> Result<Self> {
        check_regime(ell, n)?;
        Ok(AsymParams {
            ell,
            n,
            series_terms: Self::DEFAULT_SERIES_TERMS,
        })
    }

    pub fn with_series_terms(mut self, j: usize) -> Self {
        self.series_terms = j;
        self
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// ℓ(ℓ−1)n²/2, the limit of G.
    pub fn g_limit(&self) -> f64 {
        let (l, n) = (self.ell as f64, self.n as f64);
        l * (l - 1.0) * n * n / 2.0
    }
}

fn guard_threshold(prec: &Precision) -> f64 {
    (-(prec.requested() as f64) / 2.0).exp2()
}

fn guard_nonzero(x: &Complex, what: &str, prec: &Precision) -> Result<()> {
    let t = guard_threshold(prec);
    if x.abs_f64() <= t {
        return Err(Error::Singularity(format!(
            "|{what}| = {:e} is below the guard 2^-{}",
            x.abs_f64(),
            prec.requested() / 2
        )));
    }
    Ok(())
}

/// f and its derivatives at z, with Rₖ evaluation on top.
struct Jet {
    jet: FunctionJet,
    prec: Precision,
}

impl Jet {
    fn at(pt: &EvalPoint, order: usize, prec: &Precision) -> Result<Self> {
        Ok(Jet {
            jet: digamma_jet(pt, order.max(2), prec)?,
            prec: *prec,
        })
    }

    fn f(&self) -> &Complex {
        &self.jet.base
    }

    fn d(&self, k: usize) -> &Complex {
        self.jet.get(k).expect("jet order")
    }

    /// Γ⁽ᵏ⁾/Γ.
    fn ratio(&self, k: usize) -> Result<Complex> {
        eval_diffpoly(&gamma_ratio_poly(k), &self.jet)
    }

    /// εₖ = ((Γ⁽ᵏ⁾/Γ)·f^{−k} − 1)·f²/f′ − cₖ.
    fn epsilon(&self, k: usize) -> Result<Complex> {
        guard_nonzero(self.f(), "f", &self.prec)?;
        guard_nonzero(self.d(1), "f'", &self.prec)?;
        let f = self.f();
        let fk = f.powi(k as i64)?;
        let q = &self.ratio(k)? / &fk;
        let t = &f.square() / self.d(1);
        let c = Float::with_val(f.prec(), &cn_closed_form(k as u64));
        let mut eps = &q.add_i64(-1) * &t;
        eps.re -= &c;
        eps.checked("epsilon")
    }

    /// f′/f².
    fn t(&self) -> Complex {
        self.d(1) / &self.f().square()
    }
}

/// εₙ(z) from inverting Γ⁽ⁿ⁾/Γ = fⁿ[1 + (f′/f²)(cₙ + εₙ)].
pub fn epsilon_eval(pt: &EvalPoint, n: usize, prec: &Precision) -> Result<Complex> {
    if n == 0 {
        return Err(Error::Invalid("epsilon_n is defined for n >= 1".into()));
    }
    Jet::at(pt, n, prec)?.epsilon(n)
}

fn g_direct_from(jet: &Jet, params: &AsymParams) -> Result<(Complex, Complex, Complex)> {
    let (n, ln) = (params.n as usize, (params.ell * params.n) as usize);
    let fn_ = jet.ratio(n)?;
    let fln = jet.ratio(ln)?;
    guard_nonzero(&fn_, "Gamma^(n)/Gamma", &jet.prec)?;
    // (ΓΓ″ − Γ′²)/Γ² = f′
    guard_nonzero(jet.d(1), "(Gamma Gamma'' - Gamma'^2)/Gamma^2", &jet.prec)?;
    let quotient = &fln / &fn_.powi(params.ell as i64)?;
    let g = &quotient.add_i64(-1) / &jet.t();
    Ok((g.checked("G_direct")?, fn_, fln))
}

/// G = [(Γ⁽ℓⁿ⁾/Γ)(Γ/Γ⁽ⁿ⁾)^ℓ − 1]·Γ′²/(ΓΓ″ − Γ′²).
pub fn g_direct(pt: &EvalPoint, params: &AsymParams, prec: &Precision) -> Result<Complex> {
    let jet = Jet::at(pt, (params.ell * params.n) as usize, prec)?;
    Ok(g_direct_from(&jet, params)?.0)
}

fn g_series_from(jet: &Jet, params: &AsymParams) -> Result<Complex> {
    let (n, ln) = (params.n as usize, (params.ell * params.n) as usize);
    let wp = jet.f().prec();
    let a = jet.epsilon(n)?.add_i64(cn_closed_form(n as u64).to_i64().expect("small"));
    let b = jet.epsilon(ln)?.add_i64(cn_closed_form(ln as u64).to_i64().expect("small"));
    let x = &a * &jet.t();
    let size = x.abs_f64();
    if size >= 1.0 {
        return Err(Error::Divergence(format!(
            "|(c_n + eps_n) f'/f^2| = {size:.3e} is not below 1"
        )));
    }
    let ell = -(params.ell as i64);
    let mut total = Complex::zero(wp);
    let mut power = Complex::one(wp);
    for j in 0..=params.series_terms as u64 {
        let cb: Rational = gen_binom(ell, j);
        let ca: Rational = gen_binom(ell, j + 1);
        let coeff = &b.scale_rational(&cb) + &a.scale_rational(&ca);
        total += &(&coeff * &power);
        power = &power * &x;
    }
    total.checked("G_series")
}

/// Truncated power series Σ_{j≤J} [(c_{ℓn}+ε_{ℓn})C(−ℓ,j) + (cₙ+εₙ)C(−ℓ,j+1)]·xʲ,
/// x = (cₙ+εₙ)f′/f².
pub fn g_series(pt: &EvalPoint, params: &AsymParams, prec: &Precision) -> Result<Complex> {
    let jet = Jet::at(pt, (params.ell * params.n) as usize, prec)?;
    g_series_from(&jet, params)
}

/// H = (f′/f²)·G.
pub fn h_eval(pt: &EvalPoint, params: &AsymParams, prec: &Precision) -> Result<Complex> {
    let jet = Jet::at(pt, (params.ell * params.n) as usize, prec)?;
    let (g, _, _) = g_direct_from(&jet, params)?;
    Ok(&jet.t() * &g)
}

/// All ratio quantities at one point.
#[derive(Debug, Clone)]
pub struct RatioBundle {
    pub z: Complex,
    pub f: Complex,
    /// Γ⁽ⁿ⁾/Γ.
    pub big_f: Complex,
    /// Γ⁽ℓⁿ⁾/Γ from the differential polynomial.
    pub big_f_ell: Complex,
    pub g_direct: Complex,
    /// `None` when the series precondition fails.
    pub g_series: Option<Complex>,
    pub h: Complex,
    pub eps: BTreeMap<usize, Complex>,
    /// Γ⁽ℓⁿ⁾/Γ from Cauchy-contour derivatives of Γ itself.
    pub contour_ratio: Complex,
    /// |Γ⁽ℓⁿ⁾/Γ − F^ℓ(1+H)| / |Γ⁽ℓⁿ⁾/Γ| with the left side from the contour route.
    pub identity_residual: f64,
}

/// Contour settings for the independent Γ⁽ᵏ⁾/Γ route.
fn contour_nodes(prec: &Precision) -> usize {
    (prec.requested() as usize / 2).max(64).next_power_of_two()
}

const GAMMA_CONTOUR_RADIUS: f64 = 2.0;

/// Γ⁽ᵏ⁾(z)/Γ(z) from the trapezoidal Cauchy integral of Γ on |w − z| = 2.
pub fn gamma_ratio_by_contour(pt: &EvalPoint, k: usize, prec: &Precision) -> Result<Complex> {
    let (re, im) = pt.z.to_f64_pair();
    if re < GAMMA_CONTOUR_RADIUS + 1.0 && im.abs() < GAMMA_CONTOUR_RADIUS + 1.0 {
        return Err(Error::Pole(
            "contour of radius 2 would pass too close to a pole of Gamma".into(),
        ));
    }
    let inner = prec.with_extra_guard(32);
    let derivs = contour_derivatives(
        |w| gamma(&EvalPoint::new(w.clone()), &inner),
        &pt.z,
        GAMMA_CONTOUR_RADIUS,
        contour_nodes(prec),
        k,
        inner.working(),
    )?;
    Ok((&derivs[k] / &derivs[0]).with_prec(prec.working()))
}

/// Fills a [`RatioBundle`]; `eps_orders` lists the εₖ to record.
pub fn bundle(
    pt: &EvalPoint,
    params: &AsymParams,
    eps_orders: &[usize],
    prec: &Precision,
) -> Result<RatioBundle> {
    let ln = (params.ell * params.n) as usize;
    let top = eps_orders.iter().copied().max().unwrap_or(0).max(ln);
    let jet = Jet::at(pt, top, prec)?;
    let (g, big_f, big_f_ell) = g_direct_from(&jet, params)?;
    let g_series = match g_series_from(&jet, params) {
        Ok(v) => Some(v),
        Err(Error::Divergence(_)) => None,
        Err(e) => return Err(e),
    };
    let h = &jet.t() * &g;
    let mut eps = BTreeMap::new();
    for &k in eps_orders {
        eps.insert(k, jet.epsilon(k)?);
    }
    let contour_ratio = gamma_ratio_by_contour(pt, ln, prec)?;
    let rhs = &big_f.powi(params.ell as i64)? * &h.add_i64(1);
    let identity_residual = rel_err(&rhs, &contour_ratio);
    Ok(RatioBundle {
        z: pt.z.clone(),
        f: jet.f().clone(),
        big_f,
        big_f_ell,
        g_direct: g,
        g_series,
        h,
        eps,
        contour_ratio,
        identity_residual,
    })
}

fn require_sector(pt: &EvalPoint) -> Result<()> {
    if !pt.in_sector_d {
        return Err(Error::Sector(pt.z.to_decimal(Some(12))));
    }
    Ok(())
}

/// Relative deviations of f′/f² from 1/(z log²z) and of f″/(f f′) from −1/(z log z).
pub fn log_derivative_deviations(pt: &EvalPoint, prec: &Precision) -> Result<(f64, f64)> {
    require_sector(pt)?;
    let jet = Jet::at(pt, 2, prec)?;
    guard_nonzero(jet.f(), "f", prec)?;
    guard_nonzero(jet.d(1), "f'", prec)?;
    let log_z = pt.z.ln()?;
    let z_log = &pt.z * &log_z;
    let first = &(&jet.t() * &z_log) * &log_z;
    let second = -(&(&(jet.d(2) / &(jet.f() * jet.d(1))) * &z_log));
    let one = Complex::one(first.prec());
    Ok((rel_err(&first, &one), rel_err(&second, &one)))
}

/// Candidate constants K in εₙ ≈ −K/(z log z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonLaw {
    /// K = n(n−1)(n−2)/6: 1, 4, 10 for n = 3, 4, 5.
    Listed,
    /// K = n(n²−1)/6: 4, 10, 20 for n = 3, 4, 5.
    Closed,
}

impl EpsilonLaw {
    pub fn constant(&self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            EpsilonLaw::Listed => n * (n - 1.0) * (n - 2.0) / 6.0,
            EpsilonLaw::Closed => n * (n * n - 1.0) / 6.0,
        }
    }
}

/// εₙ(z)·z·log z.
pub fn epsilon_scaled(pt: &EvalPoint, n: usize, prec: &Precision) -> Result<Complex> {
    let eps = epsilon_eval(pt, n, prec)?;
    let log_z = pt.z.ln()?;
    Ok(&(&eps * &pt.z) * &log_z)
}

/// |εₙ(z) / (−K/(z log z)) − 1| for the constant K of `law`.
pub fn epsilon_asym_check(pt: &EvalPoint, n: usize, law: EpsilonLaw, prec: &Precision) -> Result<f64> {
    if n < 3 {
        return Err(Error::Invalid(
            "epsilon_1 and epsilon_2 vanish identically; the check needs n >= 3".into(),
        ));
    }
    require_sector(pt)?;
    let scaled = epsilon_scaled(pt, n, prec)?;
    let target = Complex::from_f64(scaled.prec(), -law.constant(n), 0.0);
    Ok(rel_err(&scaled, &target))
}

/// Point on the ray of angle θ at modulus r, at working precision.
pub fn ray_point(r: f64, theta: f64, prec: &Precision) -> EvalPoint {
    let wp = prec.working();
    if theta == 0.0 {
        return EvalPoint::new(Complex::from_f64(wp, r, 0.0));
    }
    let t = Float::with_val(wp, theta);
    let (s, c) = t.sin_cos(Float::new(wp));
    let r = Float::with_val(wp, r);
    EvalPoint::new(Complex::new(
        Float::with_val(wp, &r * &c),
        Float::with_val(wp, &r * &s),
    ))
}

/// Point r·e^{i·5π/6} on the boundary of the sector.
pub fn sector_boundary_point(r: f64, prec: &Precision) -> EvalPoint {
    let wp = prec.working();
    let theta = pi(wp) * 5u32 / 6u32;
    let (s, c) = theta.sin_cos(Float::new(wp));
    let r = Float::with_val(wp, r);
    let z = Complex::new(Float::with_val(wp, &r * &c), Float::with_val(wp, &r * &s));
    // the rounded angle may fall a hair outside; the point is on the boundary by construction
    EvalPoint {
        z,
        in_sector_d: true,
    }
}
