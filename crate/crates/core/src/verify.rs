//! Named self-check suites. Each row compares a measured quantity with its
//! target at a stated tolerance; the oracles here (Bell triangle, partition
//! counts, Stirling modulus) are computed independently of the code under test.

use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    bundle, epsilon_eval, epsilon_scaled, g_direct, g_series, log_derivative_deviations, ray_point,
    sector_boundary_point, AsymParams, EpsilonLaw,
};
use crate::diffpoly::{cn_closed_form, extract_cn, gamma_ratio_poly};
use crate::error::{Error, Result};
use crate::numkernel::{pi, rel_err, Precision};
use crate::specfun::{gamma, EvalPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub measured: String,
    pub target: String,
    pub tolerance: String,
    pub pass: bool,
}

impl CheckRow {
    fn float(name: impl Into<String>, measured: f64, target: f64, tolerance: f64, pass: bool) -> Self {
        CheckRow {
            name: name.into(),
            measured: format!("{measured:.6e}"),
            target: format!("{target:.6e}"),
            tolerance: format!("{tolerance:.1e}"),
            pass,
        }
    }

    /// Row passing when `measured < bound`.
    fn below(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckRow {
            name: name.into(),
            measured: format!("{measured:.6e}"),
            target: "0".into(),
            tolerance: format!("{bound:.1e}"),
            pass: measured < bound,
        }
    }

    fn exact(name: impl Into<String>, measured: impl ToString, target: impl ToString) -> Self {
        let (m, t) = (measured.to_string(), target.to_string());
        CheckRow {
            name: name.into(),
            pass: m == t,
            measured: m,
            target: t,
            tolerance: "exact".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Stirling,
    RatioIdentity,
    GSeries,
    LogDerivatives,
    Epsilon,
    Cn,
    Bell,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Stirling,
        Suite::RatioIdentity,
        Suite::GSeries,
        Suite::LogDerivatives,
        Suite::Epsilon,
        Suite::Cn,
        Suite::Bell,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Stirling => "stirling",
            Suite::RatioIdentity => "ratio-identity",
            Suite::GSeries => "g-series",
            Suite::LogDerivatives => "log-derivatives",
            Suite::Epsilon => "epsilon",
            Suite::Cn => "cn",
            Suite::Bell => "bell",
        }
    }

    /// Accepts each suite's name and its short alias.
    pub fn parse(s: &str) -> Result<Suite> {
        Ok(match s {
            "stirling" => Suite::Stirling,
            "ratio-identity" | "eq2.5" => Suite::RatioIdentity,
            "g-series" | "eq2.7" => Suite::GSeries,
            "log-derivatives" | "eq2.13" => Suite::LogDerivatives,
            "epsilon" => Suite::Epsilon,
            "cn" => Suite::Cn,
            "bell" => Suite::Bell,
            other => {
                return Err(Error::Invalid(format!(
                    "unknown suite {other:?}; expected one of stirling, ratio-identity (eq2.5), \
                     g-series (eq2.7), log-derivatives (eq2.13), epsilon, cn, bell"
                )))
            }
        })
    }

    pub fn run(&self) -> Result<Vec<CheckRow>> {
        match self {
            Suite::Stirling => stirling_rows(),
            Suite::RatioIdentity => ratio_identity_rows(),
            Suite::GSeries => g_series_rows(),
            Suite::LogDerivatives => log_derivative_rows(),
            Suite::Epsilon => epsilon_rows(),
            Suite::Cn => cn_rows(),
            Suite::Bell => bell_rows(),
        }
    }
}

/// Bell numbers B₀..B_n from the Bell triangle.
pub fn bell_triangle(n: usize) -> Vec<Integer> {
    let mut bells = vec![Integer::from(1)];
    let mut row = vec![Integer::from(1)];
    while bells.len() <= n {
        let mut next = vec![row.last().expect("non-empty").clone()];
        for x in &row {
            let v = Integer::from(next.last().expect("non-empty") + x);
            next.push(v);
        }
        bells.push(next[0].clone());
        row = next;
    }
    bells.truncate(n + 1);
    bells
}

/// Partition numbers p(0..=n) by the coin-change recurrence.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    p
}

/// e^{−π|y|/2}|y|^{1/4}√(2π) relative deviation of |Γ(3/4 + iy)|.
pub fn stirling_modulus_deviation(y: f64, prec: &Precision) -> Result<f64> {
    let w = prec.working();
    let pt = EvalPoint::from_f64(prec, 0.75, y);
    let g = gamma(&pt, prec)?.abs();
    let yf = Float::with_val(w, y.abs());
    let mut expect = Float::with_val(w, &yf * pi(w));
    expect = Float::with_val(w, -expect / 2u32).exp();
    expect *= Float::with_val(w, yf.sqrt_ref()).sqrt();
    expect *= Float::with_val(w, pi(w) * 2u32).sqrt();
    Ok(Float::with_val(w, (g / &expect) - 1u32).abs().to_f64())
}

fn stirling_rows() -> Result<Vec<CheckRow>> {
    let prec = Precision::bits(128)?;
    [30.0, 50.0, 100.0]
        .iter()
        .map(|&y| {
            let d = stirling_modulus_deviation(y, &prec)?;
            Ok(CheckRow::below(format!("|Gamma(3/4+{y}i)| vs Stirling modulus"), d, 0.01))
        })
        .collect()
}

fn ratio_identity_rows() -> Result<Vec<CheckRow>> {
    let prec = Precision::bits(256)?;
    let mut rows = Vec::new();
    for &(ell, n) in &[(2, 1), (2, 2), (3, 1), (2, 3)] {
        let params = AsymParams::new(ell, n)?;
        for &(re, im) in &[(20.0, 10.0), (50.0, 0.0), (0.75, 40.0)] {
            let pt = EvalPoint::from_f64(&prec, re, im);
            let b = bundle(&pt, &params, &[1, 2], &prec)?;
            rows.push(CheckRow::below(
                format!("(l,n)=({ell},{n}) z={re}+{im}i residual"),
                b.identity_residual,
                1e-20,
            ));
        }
    }
    Ok(rows)
}

fn g_series_rows() -> Result<Vec<CheckRow>> {
    let prec = Precision::bits(128)?;
    let mut rows = Vec::new();
    for &(ell, n, re, im) in &[(2, 1, 1e3, 1e3), (2, 2, 1e3, 1e3), (3, 2, 1e3, -500.0), (2, 3, 5e3, 0.0)] {
        let params = AsymParams::new(ell, n)?;
        let pt = EvalPoint::from_f64(&prec, re, im);
        let d = g_direct(&pt, &params, &prec)?;
        let s = g_series(&pt, &params, &prec)?;
        rows.push(CheckRow::below(
            format!("(l,n)=({ell},{n}) z={re}+{im}i J=8 series vs direct"),
            rel_err(&s, &d),
            1e-6,
        ));
    }
    let params = AsymParams::new(2, 1)?.with_series_terms(0);
    let pt = EvalPoint::from_f64(&prec, 1e8, 0.0);
    let s = g_series(&pt, &params, &prec)?.to_f64_pair().0;
    rows.push(CheckRow::float("(l,n)=(2,1) J=0 leading term", s, 1.0, 1e-12, (s - 1.0).abs() < 1e-12));
    Ok(rows)
}

fn log_derivative_rows() -> Result<Vec<CheckRow>> {
    let prec = Precision::bits(128)?;
    let mut rows = Vec::new();
    for &(r, tol) in &[(1e6, 0.15), (1e12, 0.04)] {
        let (a, b) = log_derivative_deviations(&ray_point(r, 0.0, &prec), &prec)?;
        rows.push(CheckRow::below(format!("f'/f^2 at z={r:e}"), a, tol));
        rows.push(CheckRow::below(format!("f''/(f f') at z={r:e}"), b, tol));
    }
    let (a, b) = log_derivative_deviations(&sector_boundary_point(1e6, &prec), &prec)?;
    rows.push(CheckRow::below("f'/f^2 at z=1e6*exp(5 pi i/6)", a, 0.25));
    rows.push(CheckRow::below("f''/(f f') at z=1e6*exp(5 pi i/6)", b, 0.25));
    Ok(rows)
}

fn epsilon_rows() -> Result<Vec<CheckRow>> {
    let prec = Precision::bits(256)?;
    let mut rows = Vec::new();
    for &(re, im) in &[(10.0, 0.0), (5.0, 5.0), (0.75, 40.0)] {
        let pt = EvalPoint::from_f64(&prec, re, im);
        for n in [1, 2] {
            let e = epsilon_eval(&pt, n, &prec)?.abs_f64();
            rows.push(CheckRow::below(format!("|eps_{n}({re}+{im}i)|"), e, 1e-20));
        }
    }
    let near = ray_point(1e6, 0.0, &prec);
    let far = ray_point(1e10, 0.0, &prec);
    for n in 3..=5usize {
        let a = epsilon_scaled(&near, n, &prec)?.to_f64_pair().0;
        let b = epsilon_scaled(&far, n, &prec)?.to_f64_pair().0;
        let ratio = a / b;
        rows.push(CheckRow::float(
            format!("eps_{n} z log z at 1e6 / at 1e10"),
            ratio,
            1.0,
            0.15,
            (ratio - 1.0).abs() < 0.15,
        ));
        let k = EpsilonLaw::Listed.constant(n);
        let dev = (b / -k - 1.0).abs();
        rows.push(CheckRow::float(
            format!("eps_{n} z log z at 1e10 vs -n(n-1)(n-2)/6"),
            b,
            -k,
            0.1,
            dev < 0.1,
        ));
        let other = EpsilonLaw::Closed.constant(n);
        let dev_other = (b / -other - 1.0).abs();
        rows.push(CheckRow {
            name: format!("eps_{n} rejects -n(n^2-1)/6 = {}", -other),
            measured: format!("{dev_other:.3e}"),
            target: "> 0.1".into(),
            tolerance: "0.1".into(),
            pass: dev_other >= 0.1,
        });
    }
    Ok(rows)
}

fn cn_rows() -> Result<Vec<CheckRow>> {
    (1..=30u64)
        .map(|n| Ok(CheckRow::exact(format!("c_{n}"), extract_cn(n as usize)?, cn_closed_form(n))))
        .collect()
}

fn bell_rows() -> Result<Vec<CheckRow>> {
    let bells = bell_triangle(10);
    let parts = partition_counts(10);
    let mut rows = Vec::new();
    for n in 0..=10usize {
        let r = gamma_ratio_poly(n);
        rows.push(CheckRow::exact(format!("R_{n} coefficient sum"), r.coefficient_sum(), &bells[n]));
        rows.push(CheckRow::exact(format!("R_{n} term count"), r.term_count(), parts[n]));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles() {
        let b: Vec<u64> = bell_triangle(10).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]);
        assert_eq!(partition_counts(10), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert_eq!(Suite::parse("eq2.13").unwrap(), Suite::LogDerivatives);
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn fast_suites_pass() {
        for s in [Suite::Cn, Suite::Bell, Suite::Stirling] {
            let rows = s.run().unwrap();
            assert!(rows.iter().all(|r| r.pass), "{}: {rows:?}", s.name());
        }
        assert_eq!(Suite::Cn.run().unwrap().len(), 30);
    }
}
