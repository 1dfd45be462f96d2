use std::io::Write;
use std::path::Path;

use adelab_core::numkernel::{decimal_digits, float_to_decimal};
use adelab_core::Complex;
use serde::Serialize;

use crate::args::RunConfig;
use crate::Failure;

#[derive(Debug, Serialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

/// Decimal rendering at the requested precision, or `digits` significant digits.
pub fn complex_json(z: &Complex, run: &RunConfig) -> ComplexJson {
    let d = Some(digits(run));
    let z = z.with_prec(run.bits);
    ComplexJson {
        re: float_to_decimal(&z.re, d),
        im: float_to_decimal(&z.im, d),
    }
}

pub fn complex_text(z: &Complex, run: &RunConfig) -> String {
    z.with_prec(run.bits).to_decimal(Some(digits(run)))
}

pub fn digits(run: &RunConfig) -> usize {
    run.digits.unwrap_or_else(|| decimal_digits(run.bits))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Failure::from(e.error))?;
    Ok(())
}

/// Sends `content` to `--output` (then prints `summary`) or to standard output.
pub fn emit(run: &RunConfig, content: &str, summary: &str) -> Result<(), Failure> {
    match &run.output {
        Some(path) => {
            write_atomic(path, content)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
