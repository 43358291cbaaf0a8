//! CSV and JSON renderings of a bound report.

use std::io::Write;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use pks_core::bounds::{BoundReport, SearchMethod};

/// Twelve significant digits, `inf` for infinite values.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // Round to 12 significant digits, then print the shortest decimal that
    // reads back to the rounded value.
    let rounded: f64 = format!("{:.11e}", v).parse().expect("formatted float parses");
    format!("{}", rounded)
}

pub fn parse_value(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse().with_context(|| format!("`{}` is not a number", s)),
    }
}

/// One rendered row; column order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    pub kind: String,
    pub value: String,
    pub assumptions: String,
    pub status: String,
    pub seconds: String,
}

pub const COLUMNS: [&str; 6] = ["name", "kind", "value", "assumptions", "status", "seconds"];

pub fn rows(report: &BoundReport<f64>, timings: bool) -> Vec<ReportRow> {
    report
        .rows
        .iter()
        .map(|r| ReportRow {
            name: r.name.clone(),
            kind: r.kind.as_str().to_string(),
            value: fmt_value(r.value),
            assumptions: r.assumptions.join("; "),
            status: r.status.to_string(),
            seconds: if timings { format!("{:.6}", r.seconds) } else { String::new() },
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([&r.name, &r.kind, &r.value, &r.assumptions, &r.status, &r.seconds])?;
    }
    w.flush()?;
    Ok(())
}

fn json_number(s: &str) -> Value {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::String(s.into())),
        _ => Value::String(s.into()),
    }
}

/// JSON object mirroring the report. Finite values are numbers carrying the
/// 12-digit rendering; infinite ones are the string `"inf"`.
pub fn to_json(report: &BoundReport<f64>, timings: bool) -> Value {
    let rows: Vec<Value> = rows(report, timings)
        .into_iter()
        .map(|r| {
            serde_json::json!({
                "name": r.name,
                "kind": r.kind,
                "value": json_number(&r.value),
                "assumptions": r.assumptions,
                "status": r.status,
                "seconds": if timings { json_number(&r.seconds) } else { Value::Null },
            })
        })
        .collect();
    let certificate = report.certificate.as_ref().map(|c| {
        serde_json::json!({
            "z": [json_number(&fmt_value(c.z.x)), json_number(&fmt_value(c.z.y))],
            "value": json_number(&fmt_value(c.value)),
            "method": match c.method {
                SearchMethod::Fixed => "fixed",
                SearchMethod::Ray => "ray",
                SearchMethod::Compass => "compass",
            },
            "evaluations": c.evaluations,
        })
    });
    serde_json::json!({
        "family": report.family,
        "mass": json_number(&fmt_value(report.mass)),
        "tolerance": json_number(&fmt_value(report.tolerance)),
        "ordered": report.is_ordered(),
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "certificate": certificate,
        "rows": rows,
    })
}

/// Rows of a JSON report, with values back in their decimal rendering.
pub fn rows_from_json(v: &Value) -> Result<Vec<ReportRow>> {
    let Some(list) = v.get("rows").and_then(Value::as_array) else {
        bail!("report has no `rows` array");
    };
    let text = |r: &Value, k: &str| -> Result<String> {
        Ok(match r.get(k) {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => fmt_value(n.as_f64().context("number out of range")?),
            Some(Value::Null) | None => String::new(),
            Some(other) => bail!("field `{}` has unexpected value {}", k, other),
        })
    };
    list.iter()
        .map(|r| {
            let seconds = match r.get("seconds") {
                Some(Value::Number(n)) => format!("{:.6}", n.as_f64().unwrap_or(f64::NAN)),
                _ => String::new(),
            };
            Ok(ReportRow {
                name: text(r, "name")?,
                kind: text(r, "kind")?,
                value: text(r, "value")?,
                assumptions: text(r, "assumptions")?,
                status: text(r, "status")?,
                seconds,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_value(0.538_546_172_374_123), "0.538546172374");
        assert_eq!(fmt_value(4.0), "4");
        assert_eq!(fmt_value(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_value(123_456_789_012_345.0), "123456789012000");
        assert_eq!(fmt_value(f64::INFINITY), "inf");
        assert_eq!(fmt_value(2.5e-9), "0.0000000025");
    }

    #[test]
    fn rendering_is_idempotent() {
        for &v in &[0.1, 1.0 / 7.0, 12345.678901234567, 9.999_999_999_999_9e-7, 6.02e23] {
            let s = fmt_value(v);
            assert_eq!(fmt_value(parse_value(&s).unwrap()), s);
        }
    }
}
