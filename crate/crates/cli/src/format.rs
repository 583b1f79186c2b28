//! Number formatting and the sweep CSV layout.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

pub const CSV_HEADER: &str = "family,param,tau,s_analytic,s_numeric,gap,violation";

/// Round to 9 significant digits. Negative zero becomes zero.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Text of `x` with at most 9 significant digits; exponent form for very
/// small or very large magnitudes.
pub fn fmt9(x: f64) -> String {
    let r = sig9(x);
    if r != 0.0 && !(1e-5..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Round every floating-point number in a JSON tree to 9 significant digits.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = Number::from_f64(sig9(x)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: String,
    pub param: f64,
    pub tau: f64,
    /// Absent for the 3-parameter family, which has no closed form.
    pub s_analytic: Option<f64>,
    pub s_numeric: f64,
    pub gap: Option<f64>,
    pub violation: bool,
}

impl SweepRecord {
    pub fn to_csv_line(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt9).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.family,
            fmt9(self.param),
            fmt9(self.tau),
            opt(self.s_analytic),
            fmt9(self.s_numeric),
            opt(self.gap),
            self.violation
        )
    }

    /// The record as it reads back from its CSV line.
    pub fn rounded(&self) -> Self {
        Self {
            family: self.family.clone(),
            param: sig9(self.param),
            tau: sig9(self.tau),
            s_analytic: self.s_analytic.map(sig9),
            s_numeric: sig9(self.s_numeric),
            gap: self.gap.map(sig9),
            violation: self.violation,
        }
    }
}

pub fn write_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CSV_HEADER) => {}
        other => bail!("unexpected CSV header {other:?}"),
    }
    lines
        .enumerate()
        .map(|(i, line)| parse_line(line).with_context(|| format!("CSV row {}", i + 1)))
        .collect()
}

fn parse_line(line: &str) -> Result<SweepRecord> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 7 {
        bail!("expected 7 fields, found {}", fields.len());
    }
    let num = |name: &str, s: &str| -> Result<f64> {
        s.parse().map_err(|_| anyhow!("field {name}: `{s}` is not a number"))
    };
    let opt = |name: &str, s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(name, s).map(Some)
        }
    };
    Ok(SweepRecord {
        family: fields[0].to_string(),
        param: num("param", fields[1])?,
        tau: num("tau", fields[2])?,
        s_analytic: opt("s_analytic", fields[3])?,
        s_numeric: num("s_numeric", fields[4])?,
        gap: opt("gap", fields[5])?,
        violation: fields[6]
            .parse()
            .map_err(|_| anyhow!("field violation: `{}` is not true/false", fields[6]))?,
    })
}
