//! Run reports and their output formats.
//!
//! Machine formats (json-lines, csv) are stable-ordered — keys sorted,
//! numbers fixed at 12 significant digits — so golden files compare
//! byte-for-byte. The table format is for people.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{Error, Result};

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    JsonLines,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "json-lines" => Ok(Self::JsonLines),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Semantic {
                field: "format".into(),
                message: format!("unknown format '{other}' (expected table, json-lines or csv)"),
            }),
        }
    }
}

/// Everything a run produces. Fields that a given demo does not compute stay
/// `None` and serialize as nulls.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario_id: String,
    pub quantum_value: Option<f64>,
    pub classical_bound: Option<f64>,
    pub lp_feasible: Option<bool>,
    pub violation: Option<bool>,
    /// Pairwise tension degrees `(left, right, ‖[L,R]‖)`.
    pub tension: Vec<(String, String, f64)>,
    /// Named scalar results specific to the run.
    pub metrics: BTreeMap<String, f64>,
}

/// Fixed 12-significant-digit scientific rendering, e.g. `2.82842712475e0`.
pub fn format_sig(x: f64) -> String {
    format!("{:.11e}", x)
}

fn json_str(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

/// Render a report in the requested format.
pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::JsonLines => emit_json_lines(report),
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Table => emit_table(report),
    }
}

fn emit_opt_f64(out: &mut String, value: Option<f64>) {
    match value {
        Some(v) => out.push_str(&format_sig(v)),
        None => out.push_str("null"),
    }
}

fn emit_opt_bool(out: &mut String, value: Option<bool>) {
    match value {
        Some(true) => out.push_str("true"),
        Some(false) => out.push_str("false"),
        None => out.push_str("null"),
    }
}

fn emit_json_lines(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str("{\"classical_bound\":");
    emit_opt_f64(&mut out, report.classical_bound);
    out.push_str(",\"id\":");
    out.push_str(&json_str(&report.scenario_id));
    out.push_str(",\"lp_feasible\":");
    emit_opt_bool(&mut out, report.lp_feasible);
    out.push_str(",\"metrics\":{");
    for (i, (key, value)) in report.metrics.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_str(key));
        out.push(':');
        out.push_str(&format_sig(*value));
    }
    out.push_str("},\"quantum_value\":");
    emit_opt_f64(&mut out, report.quantum_value);
    out.push_str(",\"tension\":[");
    for (i, (left, right, degree)) in report.tension.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "[{},{},{}]",
            json_str(left),
            json_str(right),
            format_sig(*degree)
        );
    }
    out.push_str("],\"violation\":");
    emit_opt_bool(&mut out, report.violation);
    out.push_str("}\n");
    out
}

fn emit_csv(report: &RunReport) -> String {
    let mut out = String::from("pair,degree\n");
    for (left, right, degree) in &report.tension {
        let _ = writeln!(out, "{left}|{right},{}", format_sig(*degree));
    }
    out
}

fn emit_table(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario            {}", report.scenario_id);
    if let Some(v) = report.quantum_value {
        let _ = writeln!(out, "quantum value       {}", format_sig(v));
    }
    if let Some(v) = report.classical_bound {
        let _ = writeln!(out, "classical bound     {}", format_sig(v));
    }
    if let Some(feasible) = report.lp_feasible {
        let _ = writeln!(
            out,
            "joint distribution  {}",
            if feasible { "FEASIBLE" } else { "INFEASIBLE" }
        );
    }
    if let Some(violation) = report.violation {
        let _ = writeln!(
            out,
            "verdict             {}",
            if violation { "VIOLATION" } else { "classical" }
        );
    }
    if !report.tension.is_empty() {
        let _ = writeln!(out, "tension degrees");
        for (left, right, degree) in &report.tension {
            let _ = writeln!(out, "  {left}|{right}  {}", format_sig(*degree));
        }
    }
    if !report.metrics.is_empty() {
        let _ = writeln!(out, "metrics");
        for (key, value) in &report.metrics {
            let _ = writeln!(out, "  {key}  {}", format_sig(*value));
        }
    }
    out
}

fn opt_f64(value: &Value, field: &str) -> Result<Option<f64>> {
    match value {
        Value::Null => Ok(None),
        Value::Number(n) => n.as_f64().map(Some).ok_or_else(|| Error::Semantic {
            field: field.into(),
            message: "not a finite number".into(),
        }),
        _ => Err(Error::Semantic {
            field: field.into(),
            message: "expected a number or null".into(),
        }),
    }
}

fn opt_bool(value: &Value, field: &str) -> Result<Option<bool>> {
    match value {
        Value::Null => Ok(None),
        Value::Bool(b) => Ok(Some(*b)),
        _ => Err(Error::Semantic {
            field: field.into(),
            message: "expected a boolean or null".into(),
        }),
    }
}

/// Parse a json-lines report back. Numbers survive exactly as emitted, so
/// `emit(parse(emit(r))) == emit(r)`.
pub fn parse_report(line: &str) -> Result<RunReport> {
    let value: Value = serde_json::from_str(line.trim_end()).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let object = value.as_object().ok_or_else(|| Error::Semantic {
        field: "report".into(),
        message: "expected a JSON object".into(),
    })?;
    let scenario_id = object
        .get("id")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Semantic {
            field: "id".into(),
            message: "missing or not a string".into(),
        })?
        .to_string();
    let quantum_value = opt_f64(object.get("quantum_value").unwrap_or(&Value::Null), "quantum_value")?;
    let classical_bound = opt_f64(
        object.get("classical_bound").unwrap_or(&Value::Null),
        "classical_bound",
    )?;
    let lp_feasible = opt_bool(object.get("lp_feasible").unwrap_or(&Value::Null), "lp_feasible")?;
    let violation = opt_bool(object.get("violation").unwrap_or(&Value::Null), "violation")?;

    let mut tension = Vec::new();
    if let Some(rows) = object.get("tension").and_then(Value::as_array) {
        for (i, row) in rows.iter().enumerate() {
            let triple = row.as_array().ok_or_else(|| Error::Semantic {
                field: format!("tension[{i}]"),
                message: "expected [left, right, degree]".into(),
            })?;
            if triple.len() != 3 {
                return Err(Error::Semantic {
                    field: format!("tension[{i}]"),
                    message: "expected [left, right, degree]".into(),
                });
            }
            let left = triple[0].as_str().ok_or_else(|| Error::Semantic {
                field: format!("tension[{i}][0]"),
                message: "expected a string".into(),
            })?;
            let right = triple[1].as_str().ok_or_else(|| Error::Semantic {
                field: format!("tension[{i}][1]"),
                message: "expected a string".into(),
            })?;
            let degree = triple[2].as_f64().ok_or_else(|| Error::Semantic {
                field: format!("tension[{i}][2]"),
                message: "expected a number".into(),
            })?;
            tension.push((left.to_string(), right.to_string(), degree));
        }
    }

    let mut metrics = BTreeMap::new();
    if let Some(map) = object.get("metrics").and_then(Value::as_object) {
        for (key, v) in map {
            let number = v.as_f64().ok_or_else(|| Error::Semantic {
                field: format!("metrics.{key}"),
                message: "expected a number".into(),
            })?;
            metrics.insert(key.clone(), number);
        }
    }

    Ok(RunReport {
        scenario_id,
        quantum_value,
        classical_bound,
        lp_feasible,
        violation,
        tension,
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut metrics = BTreeMap::new();
        metrics.insert("C(A0,B0)".to_string(), 1.0 / 2f64.sqrt());
        RunReport {
            scenario_id: "chsh".into(),
            quantum_value: Some(2.0 * 2f64.sqrt()),
            classical_bound: Some(2.0),
            lp_feasible: Some(false),
            violation: Some(true),
            tension: vec![("A0".into(), "A1".into(), 2.0)],
            metrics,
        }
    }

    #[test]
    fn json_lines_round_trip_is_idempotent() {
        let first = emit_report(&sample(), ReportFormat::JsonLines);
        let parsed = parse_report(&first).unwrap();
        let second = emit_report(&parsed, ReportFormat::JsonLines);
        assert_eq!(first, second);
    }

    #[test]
    fn csv_has_the_contract_header() {
        let out = emit_report(&sample(), ReportFormat::Csv);
        assert!(out.starts_with("pair,degree\n"));
        assert!(out.contains("A0|A1,2.00000000000e0"));
    }

    #[test]
    fn table_shows_violation_flag() {
        let out = emit_report(&sample(), ReportFormat::Table);
        assert!(out.contains("VIOLATION"));
        let mut calm = sample();
        calm.violation = Some(false);
        assert!(!emit_report(&calm, ReportFormat::Table).contains("VIOLATION"));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(2.0), "2.00000000000e0");
        assert_eq!(format_sig(2.0 * 2f64.sqrt()), "2.82842712475e0");
        assert_eq!(format_sig(5.0 - 4.0 * 5f64.sqrt()), "-3.94427191000e0");
        assert_eq!(format_sig(0.0), "0.00000000000e0");
    }

    #[test]
    fn nulls_survive_the_round_trip() {
        let report = RunReport {
            scenario_id: "uncertainty".into(),
            quantum_value: None,
            classical_bound: None,
            lp_feasible: None,
            violation: None,
            tension: vec![],
            metrics: BTreeMap::new(),
        };
        let line = emit_report(&report, ReportFormat::JsonLines);
        let parsed = parse_report(&line).unwrap();
        assert_eq!(report, parsed);
    }
}
