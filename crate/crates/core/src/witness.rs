//! Sampling of the curve y ↦ (ζ, ζ′, …, ζ⁽ᵐ⁾)(x + iy), selection of witness
//! heights where the leading b-coefficient is bounded below and all others
//! above, and the growth checks that exhibit P(ζ, …; Γ, Γ⁽ⁿ⁾, Γ⁽ℓⁿ⁾) ≠ 0 along
//! those heights.
//!
//! Every verdict here is a numerical observation, never a proof.

use std::collections::HashSet;
use std::fmt::Write as _;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::asymptotics::AsymParams;
use crate::diffpoly::{eval_diffpoly, gamma_ratio_poly};
use crate::error::{Error, Result};
use crate::indexcalc::{decompose, upoly_eval, AdePoly, CoeffTable, PartTables};
use crate::numkernel::{float_to_decimal, Complex, Precision};
use crate::specfun::{digamma_jet, log_gamma, zeta_eval, zeta_jet, ContourConfig, EvalPoint};

/// Default abscissa of the sampled vertical line.
pub const DEFAULT_X: f64 = 0.75;

/// Heights `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Whether `stop` itself is sampled when it lies on the grid.
    pub inclusive: bool,
}

impl YRange {
    pub fn closed(start: f64, stop: f64, step: f64) -> Self {
        YRange {
            start,
            stop,
            step,
            inclusive: true,
        }
    }

    pub fn half_open(start: f64, stop: f64, step: f64) -> Self {
        YRange {
            start,
            stop,
            step,
            inclusive: false,
        }
    }

    /// Grid heights, each computed as `start + i·step` so runs are reproducible.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Invalid(format!("step must be positive, got {}", self.step)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.stop < self.start {
            return Err(Error::Invalid(format!(
                "bad height range {}..{}",
                self.start, self.stop
            )));
        }
        let mut out = Vec::new();
        // tolerate representation error of the last grid point
        let slack = self.step * 1e-9;
        for i in 0u64.. {
            let y = self.start + i as f64 * self.step;
            let inside = if self.inclusive {
                y <= self.stop + slack
            } else {
                y < self.stop - slack
            };
            if !inside {
                break;
            }
            out.push(y);
        }
        Ok(out)
    }
}

/// One point of the curve: ζ⁽ʲ⁾(x + iy) for j = 0..=m.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub y: f64,
    pub values: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x: f64,
    pub m: usize,
    pub samples: Vec<Sample>,
}

/// ζ-jet of order `m` at x + iy.
pub fn curve_point(x: f64, y: f64, m: usize, prec: &Precision) -> Result<Sample> {
    let s = Complex::from_f64(prec.working(), x, y);
    let values = if m == 0 {
        vec![zeta_eval(&s, prec)?]
    } else {
        zeta_jet(&s, m, prec, &ContourConfig::default())?.values()
    };
    Ok(Sample { y, values })
}

/// Samples the curve at every height of `range`.
pub fn sample_curve(x: f64, range: &YRange, m: usize, prec: &Precision) -> Result<Trajectory> {
    if !(x > 0.5 && x < 1.0) {
        return Err(Error::Domain(format!("abscissa x = {x} must lie in (1/2, 1)")));
    }
    let samples = range
        .points()?
        .into_iter()
        .map(|y| curve_point(x, y, m, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { x, m, samples })
}

/// Recomputes the curve at the given heights.
pub fn curve_points(x: f64, ys: &[f64], m: usize, prec: &Precision) -> Result<Vec<Sample>> {
    ys.iter().map(|&y| curve_point(x, y, m, prec)).collect()
}

/// CSV with header `y,re_0,im_0,…,re_m,im_m`.
pub fn trajectory_csv(traj: &Trajectory, digits: Option<usize>) -> String {
    let mut out = String::from("y");
    for j in 0..=traj.m {
        let _ = write!(out, ",re_{j},im_{j}");
    }
    out.push('\n');
    for s in &traj.samples {
        let _ = write!(out, "{}", s.y);
        for v in &s.values {
            let _ = write!(
                out,
                ",{},{}",
                float_to_decimal(&v.re, digits),
                float_to_decimal(&v.im, digits)
            );
        }
        out.push('\n');
    }
    out
}

/// Sup-norm box around `center` in ℂ^{m+1}, per real coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxTarget {
    pub center: Vec<Complex>,
    pub half_width: f64,
}

impl BoxTarget {
    pub fn new(center: Vec<Complex>, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::Invalid("box half-width must be positive".into()));
        }
        Ok(BoxTarget { center, half_width })
    }

    pub fn contains(&self, values: &[Complex]) -> bool {
        let hw = self.half_width;
        values.iter().zip(&self.center).all(|(v, c)| {
            let d = v - c;
            d.re.to_f64().abs() <= hw && d.im.to_f64().abs() <= hw
        })
    }
}

/// Heights whose sample lies in the box, in trajectory order.
pub fn find_hits(traj: &Trajectory, target: &BoxTarget) -> Result<Vec<f64>> {
    if target.center.len() != traj.m + 1 {
        return Err(Error::Invalid(format!(
            "box has dimension {}, curve has {}",
            target.center.len(),
            traj.m + 1
        )));
    }
    Ok(traj
        .samples
        .iter()
        .filter(|s| target.contains(&s.values))
        .map(|s| s.y)
        .collect())
}

/// Number of distinct cells of a `bins`^(2(m+1)) grid over the bounding box of
/// the samples that the curve visits.
pub fn occupied_cells(traj: &Trajectory, bins: usize) -> usize {
    let coords: Vec<Vec<f64>> = traj
        .samples
        .iter()
        .map(|s| {
            s.values
                .iter()
                .flat_map(|v| {
                    let (a, b) = v.to_f64_pair();
                    [a, b]
                })
                .collect()
        })
        .collect();
    let Some(first) = coords.first() else {
        return 0;
    };
    let dim = first.len();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for c in &coords {
        for d in 0..dim {
            lo[d] = lo[d].min(c[d]);
            hi[d] = hi[d].max(c[d]);
        }
    }
    let cells: HashSet<Vec<usize>> = coords
        .iter()
        .map(|c| {
            (0..dim)
                .map(|d| {
                    let width = hi[d] - lo[d];
                    if width <= 0.0 {
                        0
                    } else {
                        (((c[d] - lo[d]) / width * bins as f64) as usize).min(bins - 1)
                    }
                })
                .collect()
        })
        .collect();
    cells.len()
}

/// Thresholds for witness selection and the dominance verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessConfig {
    /// Upper bound C₀ on every |b_{q,r}|.
    pub c0: f64,
    /// Lower bound on the leading |b_{q₀,r₀}|.
    pub lower: f64,
    /// Maximum number of witness heights kept.
    pub count: usize,
    /// Tolerance factor applied to the asymptotic constants at finite height.
    pub slack: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            c0: 10.0,
            lower: 1.0,
            count: 20,
            slack: 2.0,
        }
    }
}

impl WitnessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > 1.0) {
            return Err(Error::Invalid(format!("C0 must exceed 1, got {}", self.c0)));
        }
        if !(self.lower >= 1.0) {
            return Err(Error::Invalid(format!("lower bound must be at least 1, got {}", self.lower)));
        }
        if self.count == 0 {
            return Err(Error::Invalid("witness count must be positive".into()));
        }
        if !(self.slack >= 1.0) {
            return Err(Error::Invalid(format!("slack must be at least 1, got {}", self.slack)));
        }
        Ok(())
    }
}

/// Outcome of witness selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSelection {
    pub q0: u32,
    pub r0: u32,
    pub ys: Vec<f64>,
    /// Factor applied to every b-coefficient (1 unless a rescaling pass ran).
    pub scale: f64,
    pub rescaled: bool,
    /// Extremes of the leading |b_{q₀,r₀}| over the trajectory.
    pub lead_min: f64,
    pub lead_max: f64,
    /// Smallest value over the trajectory of max_{q,r} |b_{q,r}|.
    pub all_max_min: f64,
    pub qualifying: usize,
}

fn b_magnitudes(table: &CoeffTable, lead: (u32, u32), values: &[Complex]) -> Result<(f64, f64)> {
    let mut lead_abs = 0.0;
    let mut max_abs: f64 = 0.0;
    for (&(q, r), a) in table.entries() {
        let v = upoly_eval(a, values)?.abs_f64();
        if (q, r) == lead {
            lead_abs = v;
        }
        max_abs = max_abs.max(v);
    }
    Ok((lead_abs, max_abs))
}

/// Heights with |b_{q₀,r₀}(γ(y))| ≥ lower and max |b_{q,r}(γ(y))| ≤ C₀, thinned
/// evenly to at most `cfg.count` (always keeping the last). If none qualify the
/// table is rescaled once by 1 / max |b_{q₀,r₀}| and the scan repeated.
pub fn select_witnesses(traj: &Trajectory, b_table: &CoeffTable, cfg: &WitnessConfig) -> Result<WitnessSelection> {
    cfg.validate()?;
    let (q0, r0) = crate::indexcalc::first_nonzero_b(b_table)?
        .ok_or_else(|| Error::Invalid("b-table is identically zero".into()))?;
    if b_table.m != traj.m {
        return Err(Error::Invalid(format!(
            "b-table uses m = {}, trajectory has m = {}",
            b_table.m, traj.m
        )));
    }
    let mags = traj
        .samples
        .iter()
        .map(|s| b_magnitudes(b_table, (q0, r0), &s.values))
        .collect::<Result<Vec<_>>>()?;
    let lead_min = mags.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    let lead_max = mags.iter().map(|m| m.0).fold(0.0, f64::max);
    let all_max_min = mags.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);

    let pick = |scale: f64| -> Vec<f64> {
        traj.samples
            .iter()
            .zip(&mags)
            .filter(|(_, (lead, all))| lead * scale >= cfg.lower * (1.0 - 1e-12) && all * scale <= cfg.c0)
            .map(|(s, _)| s.y)
            .collect()
    };
    let mut scale = 1.0;
    let mut rescaled = false;
    let mut ys = pick(scale);
    if ys.is_empty() && lead_max > 0.0 && lead_max.is_finite() {
        scale = 1.0 / lead_max;
        rescaled = true;
        ys = pick(scale);
    }
    let qualifying = ys.len();
    Ok(WitnessSelection {
        q0,
        r0,
        ys: thin_evenly(&ys, cfg.count),
        scale,
        rescaled,
        lead_min,
        lead_max,
        all_max_min,
        qualifying,
    })
}

/// At most `count` entries spread evenly over `ys`, including the last.
fn thin_evenly(ys: &[f64], count: usize) -> Vec<f64> {
    if ys.len() <= count {
        return ys.to_vec();
    }
    if count == 1 {
        return vec![*ys.last().expect("non-empty")];
    }
    let last = ys.len() - 1;
    let mut idx: Vec<usize> = (0..count).map(|k| k * last / (count - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| ys[i]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NonvanishingWitnessed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominancePoint {
    pub y: f64,
    /// |P_{p₀}(γ; 1, Γ⁽ⁿ⁾/Γ, Γ⁽ℓⁿ⁾/Γ)| times the selection scale.
    pub lhs: f64,
    /// (1/3)|log z|^{n q₀ − 2 r₀} / |z|^{r₀}.
    pub bound: f64,
    pub ratio: f64,
    /// Rounding-noise estimate for `lhs`.
    pub noise: f64,
    /// `lhs` as a decimal string at working precision.
    pub lhs_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupPoint {
    pub y: f64,
    /// ln |P(γ; Γ, Γ⁽ⁿ⁾, Γ⁽ℓⁿ⁾) / Γ^L| at z = x + iy.
    pub log_abs: f64,
    pub abs_decimal: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowupMode {
    /// p₀ < L: the quotient grows like |Γ|^{p₀−L}.
    Exponential,
    /// p₀ = L: the quotient is P_L(γ; 1, …) and follows the dominance bound.
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub p0: u32,
    pub q0: u32,
    pub r0: u32,
    pub degree: u32,
    pub ell: u32,
    pub n: u32,
    pub x: f64,
    pub bits: u32,
    pub scale: f64,
    pub points: Vec<DominancePoint>,
    pub blowup_mode: BlowupMode,
    pub blowup_series: Vec<BlowupPoint>,
    pub verdict: Verdict,
    pub note: String,
}

/// Γ⁽ⁿ⁾/Γ and Γ⁽ℓⁿ⁾/Γ at z.
fn gamma_ratios(z: &Complex, params: &AsymParams, prec: &Precision) -> Result<(Complex, Complex)> {
    let (n, ln) = (params.n() as usize, (params.ell() * params.n()) as usize);
    let pt = EvalPoint::new(z.clone());
    let jet = digamma_jet(&pt, ln - 1, prec)?;
    Ok((
        eval_diffpoly(&gamma_ratio_poly(n), &jet)?,
        eval_diffpoly(&gamma_ratio_poly(ln), &jet)?,
    ))
}

/// Value of a homogeneous part at (v₀, v₁, v₂) = (1, F, F_ℓ) and a majorant of
/// its term magnitudes.
fn part_value(part: &AdePoly, u: &[Complex], f: &Complex, fl: &Complex) -> Result<(Complex, f64)> {
    let prec = f.prec();
    let v = [Complex::one(prec), f.clone(), fl.clone()];
    let value = part.eval(u, &v)?;
    let (af, afl) = (f.abs_f64(), fl.abs_f64());
    let mut majorant = 0.0;
    for (lambda, a) in part.coeffs() {
        let mut size = 0.0;
        for (exps, c) in a.terms() {
            let mut t = c.abs_f64();
            for (ui, &e) in u.iter().zip(exps) {
                t *= ui.abs_f64().powi(e as i32);
            }
            size += t;
        }
        majorant += size * af.powi(lambda.1 as i32) * afl.powi(lambda.2 as i32);
    }
    Ok((value, majorant))
}

fn lowest_part(parts: &[PartTables]) -> Result<&PartTables> {
    parts
        .first()
        .ok_or_else(|| Error::Invalid("the zero polynomial has no leading part".into()))
}

fn witness_z(x: f64, y: f64, prec: &Precision) -> Complex {
    Complex::from_f64(prec.working(), x, y)
}

/// Per-witness comparison of |P_{p₀}(γ; 1, F, F_ℓ)| with (1/3)|log z|^{nq₀−2r₀}/|z|^{r₀}.
pub fn dominance_check(
    poly: &AdePoly,
    params: &AsymParams,
    witnesses: &[Sample],
    x: f64,
    scale: f64,
    cfg: &WitnessConfig,
    prec: &Precision,
) -> Result<DominanceReport> {
    if poly.is_zero() {
        return Err(Error::Invalid("P is identically zero; nothing to witness".into()));
    }
    if witnesses.is_empty() {
        return Err(Error::Invalid("no witness points supplied".into()));
    }
    let parts = decompose(poly, params.ell())?;
    let lead = lowest_part(&parts)?;
    let (q0, r0) = lead.first_nonzero.expect("a nonzero part has a nonzero b entry");
    let noise_unit = (-(prec.working() as f64)).exp2() * 64.0;
    let mut points = Vec::with_capacity(witnesses.len());
    for s in witnesses {
        let z = witness_z(x, s.y, prec);
        let (f, fl) = gamma_ratios(&z, params, prec)?;
        let (value, majorant) = part_value(&lead.part, &s.values, &f, &fl)?;
        let lhs_f = value.abs().clone() * scale;
        let lhs = lhs_f.to_f64();
        let log_z = z.ln()?.abs_f64();
        let expo = params.n() as i32 * q0 as i32 - 2 * r0 as i32;
        let bound = log_z.powi(expo) / z.abs_f64().powi(r0 as i32) / 3.0;
        points.push(DominancePoint {
            y: s.y,
            lhs,
            bound,
            ratio: lhs / bound,
            noise: majorant * scale * noise_unit,
            lhs_decimal: float_to_decimal(&lhs_f, Some(20)),
        });
    }
    let last = points.last().expect("non-empty");
    let witnessed = last.ratio * cfg.slack >= 1.0 && last.lhs > 10.0 * last.noise;
    let verdict = if witnessed {
        Verdict::NonvanishingWitnessed
    } else {
        Verdict::Inconclusive
    };
    let note = match verdict {
        Verdict::NonvanishingWitnessed => format!(
            "nonvanishing numerically witnessed: at y = {} the leading part exceeds 1/{} of its \
             asymptotic lower bound and lies above the rounding noise (not a proof)",
            last.y, cfg.slack
        ),
        Verdict::Inconclusive => format!(
            "inconclusive: at y = {} ratio = {:.3e}, lhs = {:.3e}, noise = {:.3e}",
            last.y, last.ratio, last.lhs, last.noise
        ),
    };
    Ok(DominanceReport {
        p0: lead.p,
        q0,
        r0,
        degree: poly.degree(),
        ell: params.ell(),
        n: params.n(),
        x,
        bits: prec.requested(),
        scale,
        points,
        blowup_mode: if lead.p < poly.degree() {
            BlowupMode::Exponential
        } else {
            BlowupMode::Homogeneous
        },
        blowup_series: Vec::new(),
        verdict,
        note,
    })
}

/// |P(γ; Γ, Γ⁽ⁿ⁾, Γ⁽ℓⁿ⁾) / Γ^L| = |Σ_p Γ^{p−L}·P_p(γ; 1, F, F_ℓ)| at each witness.
pub fn blowup_check(
    poly: &AdePoly,
    params: &AsymParams,
    witnesses: &[Sample],
    x: f64,
    prec: &Precision,
) -> Result<(BlowupMode, Vec<BlowupPoint>)> {
    if poly.is_zero() {
        return Err(Error::Invalid("P is identically zero; nothing to evaluate".into()));
    }
    let parts = decompose(poly, params.ell())?;
    let degree = poly.degree();
    let mode = if lowest_part(&parts)?.p < degree {
        BlowupMode::Exponential
    } else {
        BlowupMode::Homogeneous
    };
    let mut series = Vec::with_capacity(witnesses.len());
    for s in witnesses {
        let z = witness_z(x, s.y, prec);
        let (f, fl) = gamma_ratios(&z, params, prec)?;
        let log_g = log_gamma(&EvalPoint::new(z.clone()), prec)?;
        let mut total = Complex::zero(prec.working());
        for part in &parts {
            let (value, _) = part_value(&part.part, &s.values, &f, &fl)?;
            let shift = part.p as i64 - degree as i64;
            let factor = log_g.scale_i64(shift).exp()?;
            total += &(&value * &factor);
        }
        let total = total.checked("blowup_check")?;
        let abs = total.abs();
        if abs.is_zero() {
            return Err(Error::NonFinite("blowup_check (exact zero)"));
        }
        let log_abs = Float::with_val(abs.prec(), abs.ln_ref()).to_f64();
        series.push(BlowupPoint {
            y: s.y,
            log_abs,
            abs_decimal: float_to_decimal(&abs, Some(20)),
        });
    }
    Ok((mode, series))
}

/// True if the series increases strictly over its last `k` points.
pub fn strictly_increasing_tail(series: &[BlowupPoint], k: usize) -> bool {
    let start = series.len().saturating_sub(k);
    series[start..].windows(2).all(|w| w[1].log_abs > w[0].log_abs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependenceVerdict {
    /// The canonical polynomial has no terms.
    IdenticallyZero,
    Witnessed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub verdict: IndependenceVerdict,
    pub text: String,
    pub first_nonzero: Option<(u32, u32, u32)>,
    pub selection: Option<WitnessSelection>,
    pub dominance: Option<DominanceReport>,
}

/// Inputs for [`independence_report`] beyond P and (ℓ, n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub x: f64,
    pub range: YRange,
    pub config: WitnessConfig,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            x: DEFAULT_X,
            range: YRange::closed(30.0, 200.0, 0.5),
            config: WitnessConfig::default(),
        }
    }
}

/// "P ≡ 0" for a structurally zero polynomial; otherwise selects witnesses on
/// the sampled curve and runs the dominance and growth checks.
pub fn independence_report(
    poly: &AdePoly,
    params: &AsymParams,
    settings: &SearchSettings,
    prec: &Precision,
) -> Result<IndependenceReport> {
    if poly.is_zero() {
        return Ok(IndependenceReport {
            verdict: IndependenceVerdict::IdenticallyZero,
            text: "P ≡ 0".into(),
            first_nonzero: None,
            selection: None,
            dominance: None,
        });
    }
    let traj = sample_curve(settings.x, &settings.range, poly.m(), prec)?;
    independence_report_on(poly, params, &traj, &settings.config, prec)
}

/// As [`independence_report`], reusing an already sampled trajectory.
pub fn independence_report_on(
    poly: &AdePoly,
    params: &AsymParams,
    traj: &Trajectory,
    cfg: &WitnessConfig,
    prec: &Precision,
) -> Result<IndependenceReport> {
    if poly.is_zero() {
        return Ok(IndependenceReport {
            verdict: IndependenceVerdict::IdenticallyZero,
            text: "P ≡ 0".into(),
            first_nonzero: None,
            selection: None,
            dominance: None,
        });
    }
    let parts = decompose(poly, params.ell())?;
    let lead = lowest_part(&parts)?;
    let (q0, r0) = lead.first_nonzero.expect("nonzero part");
    let first = Some((lead.p, q0, r0));
    let selection = select_witnesses(traj, &lead.b, cfg)?;
    if selection.ys.is_empty() {
        return Ok(IndependenceReport {
            verdict: IndependenceVerdict::Inconclusive,
            text: format!(
                "inconclusive: no height qualified (leading |b| ranged over [{:.3e}, {:.3e}], \
                 smallest max |b| was {:.3e})",
                selection.lead_min, selection.lead_max, selection.all_max_min
            ),
            first_nonzero: first,
            selection: Some(selection),
            dominance: None,
        });
    }
    let samples: Vec<Sample> = traj
        .samples
        .iter()
        .filter(|s| selection.ys.contains(&s.y))
        .cloned()
        .collect();
    let mut report = dominance_check(poly, params, &samples, traj.x, selection.scale, cfg, prec)?;
    let (mode, series) = blowup_check(poly, params, &samples, traj.x, prec)?;
    report.blowup_mode = mode;
    report.blowup_series = series;
    let (verdict, text) = match report.verdict {
        Verdict::NonvanishingWitnessed => (
            IndependenceVerdict::Witnessed,
            format!(
                "P is not identically zero; nonvanishing numerically witnessed at {} heights \
                 (leading indices p0={}, q0={}, r0={})",
                report.points.len(),
                lead.p,
                q0,
                r0
            ),
        ),
        Verdict::Inconclusive => (IndependenceVerdict::Inconclusive, report.note.clone()),
    };
    Ok(IndependenceReport {
        verdict,
        text,
        first_nonzero: first,
        selection: Some(selection),
        dominance: Some(report),
    })
}
