use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use adelab_core::asymptotics::{epsilon_eval, g_direct, g_series, h_eval, AsymParams};
use adelab_core::diffpoly::{cn_closed_form, extract_cn, gamma_ratio_poly};
use adelab_core::indexcalc::{
    check_regime, decompose as decompose_poly, lambda_from_qr, AdePoly, AdePolyJson, CoeffTable, UPoly,
};
use adelab_core::numkernel::parse_complex;
use adelab_core::specfun::{
    digamma_jet, gamma, gamma_ratio_eval, log_gamma, zeta_eval, zeta_jet, ContourConfig, EvalPoint,
};
use adelab_core::verify::{CheckRow, Suite};
use adelab_core::witness::{
    independence_report, trajectory_csv, IndependenceReport, IndependenceVerdict, SearchSettings, Trajectory,
    WitnessConfig, YRange,
};
use adelab_core::{Complex, Precision};
use clap::ValueEnum;
use serde::Serialize;

use crate::args::{DecomposeArgs, EvalArgs, ExpandArgs, Format, Function, RunConfig, ScanArgs, VerifyArgs, WitnessArgs};
use crate::output::{complex_json, complex_text, emit, to_json, write_atomic, ComplexJson};
use crate::Failure;

fn precision(run: &RunConfig) -> Result<Precision, Failure> {
    Ok(Precision::bits(run.bits)?)
}

fn required<T: Copy>(v: Option<T>, flag: &str, function: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("{function} needs --{flag}")))
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Serialize)]
struct LabelledValue {
    label: String,
    #[serde(flatten)]
    value: ComplexJson,
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    function: String,
    arguments: BTreeMap<String, String>,
    bits: u32,
    values: Vec<LabelledValue>,
}

fn jet_labels(name: &str, count: usize) -> Vec<String> {
    (0..count)
        .map(|k| if k == 0 { name.to_string() } else { format!("{name}^({k})") })
        .collect()
}

pub fn eval(run: &RunConfig, a: &EvalArgs) -> Result<(), Failure> {
    let prec = precision(run)?;
    let w = prec.working();
    let name = a.function.to_possible_value().expect("named").get_name().to_string();
    let mut arguments = BTreeMap::new();
    let mut point = |flag: &str, primary: &Option<String>, fallback: &Option<String>| -> Result<Complex, Failure> {
        let text = primary
            .as_ref()
            .or(fallback.as_ref())
            .ok_or_else(|| Failure::Input(format!("{name} needs --{flag}")))?;
        arguments.insert(flag.to_string(), text.clone());
        Ok(parse_complex(w, text)?)
    };
    let (labels, values): (Vec<String>, Vec<Complex>) = match a.function {
        Function::Zeta => {
            let s = point("s", &a.s, &a.z)?;
            (vec!["zeta".into()], vec![zeta_eval(&s, &prec)?])
        }
        Function::ZetaJet => {
            let s = point("s", &a.s, &a.z)?;
            let m = a.order.unwrap_or(1);
            let jet = zeta_jet(&s, m, &prec, &ContourConfig::default())?;
            (jet_labels("zeta", m + 1), jet.values())
        }
        Function::Gamma => {
            let z = point("z", &a.z, &a.s)?;
            (vec!["Gamma".into()], vec![gamma(&EvalPoint::new(z), &prec)?])
        }
        Function::LogGamma => {
            let z = point("z", &a.z, &a.s)?;
            (vec!["logGamma".into()], vec![log_gamma(&EvalPoint::new(z), &prec)?])
        }
        Function::DigammaJet => {
            let z = point("z", &a.z, &a.s)?;
            let k = a.order.unwrap_or(1);
            let jet = digamma_jet(&EvalPoint::new(z), k, &prec)?;
            (jet_labels("psi", k + 1), jet.values())
        }
        Function::GammaRatio | Function::F => {
            let n = required(a.n, "n", &name)?;
            let z = point("z", &a.z, &a.s)?;
            let v = gamma_ratio_eval(&EvalPoint::new(z), &[n as usize], &prec)?;
            let label = if a.function == Function::F { "F".into() } else { format!("Gamma^({n})/Gamma") };
            (vec![label], v)
        }
        Function::G | Function::H => {
            let n = required(a.n, "n", &name)?;
            let ell = required(a.ell, "ell", &name)?;
            let params = AsymParams::new(ell, n)?.with_series_terms(a.terms);
            let z = point("z", &a.z, &a.s)?;
            let pt = EvalPoint::new(z);
            if a.function == Function::H {
                (vec!["H".into()], vec![h_eval(&pt, &params, &prec)?])
            } else if a.series {
                (vec![format!("G_series(J={})", a.terms)], vec![g_series(&pt, &params, &prec)?])
            } else {
                (vec!["G".into()], vec![g_direct(&pt, &params, &prec)?])
            }
        }
        Function::Epsilon => {
            let n = required(a.n, "n", &name)?;
            let z = point("z", &a.z, &a.s)?;
            (vec![format!("eps_{n}")], vec![epsilon_eval(&EvalPoint::new(z), n as usize, &prec)?])
        }
    };
    for (flag, v) in [("n", a.n), ("ell", a.ell)] {
        if let Some(v) = v {
            arguments.insert(flag.into(), v.to_string());
        }
    }
    let content = match run.format {
        Format::Json => to_json(&EvalOutput {
            function: name.clone(),
            arguments: arguments.clone(),
            bits: run.bits,
            values: labels
                .iter()
                .zip(&values)
                .map(|(l, v)| LabelledValue {
                    label: l.clone(),
                    value: complex_json(v, run),
                })
                .collect(),
        })?,
        Format::Csv => {
            let mut s = String::from("label,re,im\n");
            for (l, v) in labels.iter().zip(&values) {
                let c = complex_json(v, run);
                let _ = writeln!(s, "{},{},{}", csv_escape(l), c.re, c.im);
            }
            s
        }
        Format::Text => {
            let args: Vec<String> = arguments.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut s = format!("# {name}({}) at {} bits\n", args.join(", "), run.bits);
            for (l, v) in labels.iter().zip(&values) {
                let _ = writeln!(s, "{l} = {}", complex_text(v, run));
            }
            s
        }
    };
    emit(run, &content, &format!("{name}: {} value(s)", values.len()))
}

#[derive(Debug, Serialize)]
struct ExpandOutput {
    n: usize,
    polynomial: String,
    terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_n_closed_form: Option<String>,
}

pub fn expand(run: &RunConfig, a: &ExpandArgs) -> Result<(), Failure> {
    let r = gamma_ratio_poly(a.n);
    let (c_n, closed) = if a.check_cn && a.n >= 1 {
        (Some(extract_cn(a.n)?.to_string()), Some(cn_closed_form(a.n as u64).to_string()))
    } else {
        (None, None)
    };
    let content = match run.format {
        Format::Json => to_json(&ExpandOutput {
            n: a.n,
            polynomial: r.to_string(),
            terms: r.term_count(),
            c_n: c_n.clone(),
            c_n_closed_form: closed.clone(),
        })?,
        Format::Csv => {
            let mut s = String::from("n,polynomial,terms,c_n\n");
            let _ = writeln!(s, "{},{},{},{}", a.n, csv_escape(&r.to_string()), r.term_count(), c_n.clone().unwrap_or_default());
            s
        }
        Format::Text => {
            let mut s = format!("{r}\n");
            if let (Some(c), Some(k)) = (&c_n, &closed) {
                let _ = writeln!(s, "c_{} = {c} (n(n-1)/2 = {k})", a.n);
            } else if a.check_cn {
                s.push_str("c_0 is undefined (R_0 = 1)\n");
            }
            s
        }
    };
    emit(run, &content, &format!("R_{}: {} terms", a.n, r.term_count()))
}

fn read_poly(path: &Path, prec: &Precision) -> Result<AdePoly, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("[io] cannot read {}: {e}", path.display())))?;
    let json: AdePolyJson = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("[schema] {}: {e}", path.display())))?;
    Ok(json.to_poly(prec.working())?)
}

#[derive(Debug, Serialize)]
struct CellJson {
    q: u32,
    r: u32,
    feasible: bool,
    u_poly: Vec<adelab_core::indexcalc::UTermJson>,
}

#[derive(Debug, Serialize)]
struct PartJson {
    p: u32,
    max_q: u32,
    max_r: u32,
    a: Vec<CellJson>,
    b: Vec<CellJson>,
    first_nonzero: Option<[u32; 2]>,
}

#[derive(Debug, Serialize)]
struct DecomposeOutput {
    ell: u32,
    n: u32,
    m: usize,
    degree: Option<u32>,
    parts: Vec<PartJson>,
    first_nonzero: Option<[u32; 3]>,
    verdict: String,
}

fn grid(t: &CoeffTable, run: &RunConfig) -> Vec<CellJson> {
    let mut out = Vec::new();
    for q in 0..=t.max_q {
        for r in 0..=t.max_r {
            out.push(CellJson {
                q,
                r,
                feasible: lambda_from_qr(t.p, q, r, t.ell).is_some(),
                u_poly: t
                    .get(q, r)
                    .map(|a| adelab_core::indexcalc::upoly_to_json(&a.with_prec_of(run), Some(crate::output::digits(run))))
                    .unwrap_or_default(),
            });
        }
    }
    out
}

trait UPolyDisplay {
    fn with_prec_of(&self, run: &RunConfig) -> UPoly;
    fn text(&self, run: &RunConfig) -> String;
}

impl UPolyDisplay for UPoly {
    fn with_prec_of(&self, run: &RunConfig) -> UPoly {
        let mut out = UPoly::zero(self.m());
        for (exps, c) in self.terms() {
            out.add_term(exps.clone(), c.with_prec(run.bits)).expect("same shape");
        }
        out
    }

    fn text(&self, run: &RunConfig) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .terms()
            .map(|(exps, c)| {
                let mut t = format!("({})", complex_text(c, run));
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => {
                            let _ = write!(t, "*u{i}");
                        }
                        _ => {
                            let _ = write!(t, "*u{i}^{e}");
                        }
                    }
                }
                t
            })
            .collect();
        terms.join(" + ")
    }
}

const ZERO_VERDICT: &str = "P ≡ 0";

pub fn decompose(run: &RunConfig, a: &DecomposeArgs) -> Result<(), Failure> {
    check_regime(a.ell, a.n)?;
    let prec = precision(run)?;
    let poly = read_poly(&a.poly, &prec)?;
    let parts = decompose_poly(&poly, a.ell)?;
    let first = parts
        .first()
        .and_then(|t| t.first_nonzero.map(|(q, r)| [t.p, q, r]));
    let verdict = if poly.is_zero() {
        ZERO_VERDICT.to_string()
    } else {
        "nonzero".to_string()
    };
    let summary = match first {
        Some([p, q, r]) => format!("{} part(s); first nonzero (p0,q0,r0) = ({p},{q},{r})", parts.len()),
        None => ZERO_VERDICT.to_string(),
    };
    let content = match run.format {
        Format::Json | Format::Csv => {
            if run.format == Format::Csv {
                return Err(Failure::Input("decompose supports --format text or json".into()));
            }
            to_json(&DecomposeOutput {
                ell: a.ell,
                n: a.n,
                m: poly.m(),
                degree: (!poly.is_zero()).then(|| poly.degree()),
                parts: parts
                    .iter()
                    .map(|t| PartJson {
                        p: t.p,
                        max_q: t.a.max_q,
                        max_r: t.a.max_r,
                        a: grid(&t.a, run),
                        b: grid(&t.b, run),
                        first_nonzero: t.first_nonzero.map(|(q, r)| [q, r]),
                    })
                    .collect(),
                first_nonzero: first,
                verdict,
            })?
        }
        Format::Text => {
            let mut s = String::new();
            if poly.is_zero() {
                s.push_str(ZERO_VERDICT);
                s.push('\n');
            }
            for t in &parts {
                let _ = writeln!(s, "part p = {} (M_p = {}, N_p = {})", t.p, t.a.max_q, t.a.max_r);
                for (label, table) in [("a", &t.a), ("b", &t.b)] {
                    for q in 0..=table.max_q {
                        for r in 0..=table.max_r {
                            if lambda_from_qr(t.p, q, r, a.ell).is_none() && table.get(q, r).is_none() {
                                continue;
                            }
                            let v = table.get(q, r).map(|u| u.text(run)).unwrap_or_else(|| "0".into());
                            let _ = writeln!(s, "  {label}[{q},{r}] = {v}");
                        }
                    }
                }
                match t.first_nonzero {
                    Some((q, r)) => {
                        let _ = writeln!(s, "  first nonzero b: ({q},{r})");
                    }
                    None => s.push_str("  all b vanish\n"),
                }
            }
            if let Some([p, q, r]) = first {
                let _ = writeln!(s, "first nonzero (p0,q0,r0) = ({p},{q},{r})");
            }
            s
        }
    };
    emit(run, &content, &summary)
}

#[derive(Debug, Serialize)]
struct VerifyOutput<'a> {
    suite: &'a str,
    pass: bool,
    rows: &'a [CheckRow],
}

pub fn verify(run: &RunConfig, a: &VerifyArgs) -> Result<(), Failure> {
    let suite = Suite::parse(&a.suite)?;
    let rows = suite.run()?;
    let pass = rows.iter().all(|r| r.pass);
    let failed = rows.iter().filter(|r| !r.pass).count();
    let content = match run.format {
        Format::Json => to_json(&VerifyOutput {
            suite: suite.name(),
            pass,
            rows: &rows,
        })?,
        Format::Csv => {
            let mut s = String::from("name,measured,target,tolerance,pass\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    csv_escape(&r.name),
                    csv_escape(&r.measured),
                    csv_escape(&r.target),
                    csv_escape(&r.tolerance),
                    r.pass
                );
            }
            s
        }
        Format::Text => {
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{}  {:width$}  measured {}  target {}  tolerance {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.measured,
                    r.target,
                    r.tolerance,
                );
            }
            let _ = writeln!(s, "{}: {}/{} rows pass", suite.name(), rows.len() - failed, rows.len());
            s
        }
    };
    emit(run, &content, &format!("{}: {}/{} rows pass", suite.name(), rows.len() - failed, rows.len()))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

/// `start:stop:step` (or `start:stop` when `default_step` is given), stop excluded.
pub fn parse_range(text: &str, default_step: Option<f64>) -> Result<YRange, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64, Failure> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Input(format!("bad number {s:?} in range {text:?}")))
    };
    let (start, stop, step) = match (parts.as_slice(), default_step) {
        ([a, b, c], _) => (num(a)?, num(b)?, num(c)?),
        ([a, b], Some(d)) => (num(a)?, num(b)?, d),
        _ => {
            return Err(Failure::Input(format!(
                "range {text:?} must have the form start:stop:step"
            )))
        }
    };
    let range = YRange::half_open(start, stop, step);
    range.points()?;
    Ok(range)
}

#[derive(Debug, Serialize)]
struct SampleJson {
    y: f64,
    values: Vec<ComplexJson>,
}

#[derive(Debug, Serialize)]
struct ScanOutput {
    x: f64,
    m: usize,
    bits: u32,
    samples: Vec<SampleJson>,
}

fn full_digits(run: &RunConfig) -> Option<usize> {
    run.digits
}

fn trajectory_json(traj: &Trajectory, run: &RunConfig) -> ScanOutput {
    ScanOutput {
        x: traj.x,
        m: traj.m,
        bits: run.bits,
        samples: traj
            .samples
            .iter()
            .map(|s| SampleJson {
                y: s.y,
                values: s
                    .values
                    .iter()
                    .map(|v| ComplexJson {
                        re: adelab_core::numkernel::float_to_decimal(&v.re, full_digits(run)),
                        im: adelab_core::numkernel::float_to_decimal(&v.im, full_digits(run)),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn scan(run: &RunConfig, a: &ScanArgs) -> Result<(), Failure> {
    let prec = precision(run)?;
    let range = parse_range(&a.y, None)?;
    let traj = adelab_core::witness::sample_curve(a.x, &range, a.m, &prec)?;
    let content = match run.format {
        Format::Json => to_json(&trajectory_json(&traj, run))?,
        Format::Csv | Format::Text => trajectory_csv(&traj, full_digits(run)),
    };
    let summary = format!(
        "scan: {} samples of zeta^(0..{}) on Re s = {} at {} bits",
        traj.samples.len(),
        a.m,
        a.x,
        run.bits
    );
    emit(run, &content, &summary)?;
    if run.output.is_none() {
        eprintln!("{summary}");
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct WitnessOutput<'a> {
    verdict: &'static str,
    summary: &'a str,
    ell: u32,
    n: u32,
    x: f64,
    y: &'a str,
    bits: u32,
    report: &'a IndependenceReport,
}

fn verdict_name(v: IndependenceVerdict) -> &'static str {
    match v {
        IndependenceVerdict::IdenticallyZero => ZERO_VERDICT,
        IndependenceVerdict::Witnessed => "nonvanishing-witnessed",
        IndependenceVerdict::Inconclusive => "inconclusive",
    }
}

pub fn witness(run: &RunConfig, a: &WitnessArgs) -> Result<(), Failure> {
    let params = AsymParams::new(a.ell, a.n)?;
    let prec = precision(run)?;
    let poly = read_poly(&a.poly, &prec)?;
    let range = parse_range(&a.y, Some(0.5))?;
    let defaults = WitnessConfig::default();
    let config = WitnessConfig {
        c0: a.c0.unwrap_or(defaults.c0),
        lower: a.lower.unwrap_or(defaults.lower),
        count: a.count.unwrap_or(defaults.count),
        slack: a.slack.unwrap_or(defaults.slack),
    };
    config.validate()?;
    let settings = SearchSettings { x: a.x, range, config };
    if let Some(path) = &a.trajectory {
        if !poly.is_zero() {
            let traj = adelab_core::witness::sample_curve(a.x, &range, poly.m(), &prec)?;
            write_atomic(path, &trajectory_csv(&traj, full_digits(run)))?;
        }
    }
    let report = independence_report(&poly, &params, &settings, &prec)?;
    let verdict = verdict_name(report.verdict);
    let summary = match (report.verdict, report.first_nonzero) {
        (IndependenceVerdict::IdenticallyZero, _) => ZERO_VERDICT.to_string(),
        (_, Some((p, q, r))) => format!(
            "{verdict}: (p0,q0,r0) = ({p},{q},{r}), {} witness height(s)",
            report.selection.as_ref().map_or(0, |s| s.ys.len())
        ),
        (_, None) => verdict.to_string(),
    };
    let content = match run.format {
        Format::Json => to_json(&WitnessOutput {
            verdict,
            summary: &summary,
            ell: a.ell,
            n: a.n,
            x: a.x,
            y: &a.y,
            bits: run.bits,
            report: &report,
        })?,
        Format::Csv => {
            let mut s = String::from("y,lhs,bound,ratio,noise\n");
            if let Some(d) = &report.dominance {
                for p in &d.points {
                    let _ = writeln!(s, "{},{},{:e},{:e},{:e}", p.y, p.lhs_decimal, p.bound, p.ratio, p.noise);
                }
            }
            s
        }
        Format::Text => {
            let mut s = format!("{summary}\n{}\n", report.text);
            if let Some(d) = &report.dominance {
                for p in &d.points {
                    let _ = writeln!(
                        s,
                        "  y = {:>8}  lhs = {:.6e}  bound = {:.6e}  ratio = {:.4}",
                        p.y, p.lhs, p.bound, p.ratio
                    );
                }
                for b in &d.blowup_series {
                    let _ = writeln!(s, "  y = {:>8}  log|P/Gamma^L| = {:.6}", b.y, b.log_abs);
                }
            }
            s
        }
    };
    emit(run, &content, &summary)
}
