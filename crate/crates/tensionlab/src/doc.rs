//! Scenario documents: a strict JSON schema for states, observables,
//! contexts, temporal sequences and inequalities.
//!
//! Complex numbers are always `[re, im]` pairs. Parsing validates everything
//! the engine relies on — normalization, Hermiticity, context commutation —
//! and reports the offending field by name.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::observable::{spectral_decompose, Observable, DEFAULT_CLUSTER_TOL};
use crate::scenario::{Direction, Inequality, Scenario, TemporalStep};
use crate::state::StateVector;

/// Hermiticity gate applied to observables at load time.
pub const LOAD_HERMITIAN_TOL: f64 = 1e-9;

fn semantic(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Semantic {
        field: field.into(),
        message: message.into(),
    }
}

fn as_object<'v>(value: &'v Value, field: &str) -> Result<&'v Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| semantic(field, "expected an object"))
}

fn as_array<'v>(value: &'v Value, field: &str) -> Result<&'v Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| semantic(field, "expected an array"))
}

fn as_f64(value: &Value, field: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| semantic(field, "expected a number"))
}

fn as_str<'v>(value: &'v Value, field: &str) -> Result<&'v str> {
    value
        .as_str()
        .ok_or_else(|| semantic(field, "expected a string"))
}

fn get<'v>(object: &'v Map<String, Value>, key: &str, parent: &str) -> Result<&'v Value> {
    object.get(key).ok_or_else(|| {
        semantic(
            if parent.is_empty() {
                key.to_string()
            } else {
                format!("{parent}.{key}")
            },
            "missing field",
        )
    })
}

fn complex_entry(value: &Value, field: &str) -> Result<Complex64> {
    let pair = as_array(value, field)?;
    if pair.len() != 2 {
        return Err(semantic(field, "expected a [re, im] pair"));
    }
    let re = as_f64(&pair[0], &format!("{field}[0]"))?;
    let im = as_f64(&pair[1], &format!("{field}[1]"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(semantic(field, "entries must be finite"));
    }
    Ok(Complex64::new(re, im))
}

fn complex_vector(value: &Value, dim: usize, field: &str) -> Result<Vec<Complex64>> {
    let rows = as_array(value, field)?;
    if rows.len() != dim {
        return Err(semantic(
            field,
            format!("expected {dim} entries, found {}", rows.len()),
        ));
    }
    rows.iter()
        .enumerate()
        .map(|(i, entry)| complex_entry(entry, &format!("{field}[{i}]")))
        .collect()
}

fn complex_matrix(value: &Value, dim: usize, field: &str) -> Result<ComplexMatrix> {
    let rows = as_array(value, field)?;
    if rows.len() != dim {
        return Err(semantic(
            field,
            format!("expected {dim} rows, found {}", rows.len()),
        ));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let entries = complex_vector(row, dim, &format!("{field}[{i}]"))?;
        data.extend(entries);
    }
    ComplexMatrix::new(dim, data)
}

/// Parse and validate a scenario document.
///
/// Syntax errors carry the line and column; semantic errors name the field.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    parse_scenario_named(text, "scenario")
}

/// Like [`parse_scenario`] with a fallback id (usually the file stem) for
/// documents that do not declare one.
pub fn parse_scenario_named(text: &str, fallback_id: &str) -> Result<Scenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = as_object(&value, "document")?;

    let id = match root.get("id") {
        Some(v) => as_str(v, "id")?.to_string(),
        None => fallback_id.to_string(),
    };

    let dim = as_f64(get(root, "dim", "")?, "dim")?;
    if dim.fract() != 0.0 || dim < 1.0 || dim > 64.0 {
        return Err(semantic("dim", "expected an integer between 1 and 64"));
    }
    let dim = dim as usize;

    let amplitudes = complex_vector(get(root, "state", "")?, dim, "state")?;
    let state = StateVector::new(amplitudes).map_err(|e| match e {
        Error::NotNormalized { norm, tol } => semantic(
            "state",
            format!("norm {norm} is not 1 within {tol:.1e}"),
        ),
        other => other,
    })?;

    let observables_value = as_object(get(root, "observables", "")?, "observables")?;
    if observables_value.is_empty() {
        return Err(semantic("observables", "at least one observable required"));
    }
    let mut observables: Vec<(String, Observable)> = Vec::with_capacity(observables_value.len());
    for (name, matrix_value) in observables_value {
        let field = format!("observables.{name}");
        let matrix = complex_matrix(matrix_value, dim, &field)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > LOAD_HERMITIAN_TOL {
            return Err(semantic(
                &field,
                format!("not Hermitian (max deviation {deviation:.3e})"),
            ));
        }
        let observable = spectral_decompose(&matrix, DEFAULT_CLUSTER_TOL)?;
        observables.push((name.clone(), observable));
    }

    let mut contexts: Vec<Vec<String>> = Vec::new();
    if let Some(value) = root.get("contexts") {
        for (k, context) in as_array(value, "contexts")?.iter().enumerate() {
            let names = as_array(context, &format!("contexts[{k}]"))?
                .iter()
                .enumerate()
                .map(|(i, n)| Ok(as_str(n, &format!("contexts[{k}][{i}]"))?.to_string()))
                .collect::<Result<Vec<_>>>()?;
            contexts.push(names);
        }
    }

    let mut sequence: Option<Vec<TemporalStep>> = None;
    if let Some(value) = root.get("sequence") {
        let mut steps = Vec::new();
        for (k, step_value) in as_array(value, "sequence")?.iter().enumerate() {
            let field = format!("sequence[{k}]");
            let step = as_object(step_value, &field)?;
            let observable = as_str(get(step, "observable", &field)?, &format!("{field}.observable"))?
                .to_string();
            let pre_unitary = match step.get("unitary") {
                Some(u) => Some(complex_matrix(u, dim, &format!("{field}.unitary"))?),
                None => None,
            };
            steps.push(TemporalStep {
                observable,
                pre_unitary,
            });
        }
        sequence = Some(steps);
    }

    let inequality_value = as_object(get(root, "inequality", "")?, "inequality")?;
    let mut terms = Vec::new();
    for (k, term_value) in as_array(get(inequality_value, "terms", "inequality")?, "inequality.terms")?
        .iter()
        .enumerate()
    {
        let field = format!("inequality.terms[{k}]");
        let term = as_object(term_value, &field)?;
        let coeff = as_f64(get(term, "coeff", &field)?, &format!("{field}.coeff"))?;
        let names = as_array(get(term, "names", &field)?, &format!("{field}.names"))?
            .iter()
            .enumerate()
            .map(|(i, n)| Ok(as_str(n, &format!("{field}.names[{i}]"))?.to_string()))
            .collect::<Result<Vec<_>>>()?;
        terms.push((coeff, names));
    }
    let direction = match as_str(
        get(inequality_value, "direction", "inequality")?,
        "inequality.direction",
    )? {
        "max" => Direction::Maximize,
        "min" => Direction::Minimize,
        other => {
            return Err(semantic(
                "inequality.direction",
                format!("expected \"max\" or \"min\", found \"{other}\""),
            ))
        }
    };
    let declared_bound = match inequality_value.get("classical_bound") {
        Some(v) => Some(as_f64(v, "inequality.classical_bound")?),
        None => None,
    };

    Scenario::new(
        id,
        state,
        observables,
        contexts,
        sequence,
        Inequality {
            terms,
            direction,
            declared_bound,
        },
    )
}

fn complex_to_value(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn matrix_to_value(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.dim())
        .map(|i| {
            let row: Vec<Value> = (0..m.dim()).map(|j| complex_to_value(m.get(i, j))).collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

/// Serialize a scenario to its document form. Floats keep full precision,
/// so parsing the output reconstructs numerically identical operators.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    let mut root = Map::new();
    root.insert("id".into(), Value::String(scenario.id().to_string()));
    root.insert("dim".into(), json!(scenario.state().dim()));
    root.insert(
        "state".into(),
        Value::Array(
            scenario
                .state()
                .amplitudes()
                .iter()
                .map(|&c| complex_to_value(c))
                .collect(),
        ),
    );
    let mut observables = Map::new();
    for (name, observable) in scenario.observables() {
        observables.insert(name.clone(), matrix_to_value(observable.matrix()));
    }
    root.insert("observables".into(), Value::Object(observables));
    root.insert(
        "contexts".into(),
        json!(scenario.contexts().to_vec()),
    );
    if let Some(sequence) = scenario.temporal_sequence() {
        let steps: Vec<Value> = sequence
            .iter()
            .map(|step| {
                let mut object = Map::new();
                object.insert("observable".into(), Value::String(step.observable.clone()));
                if let Some(u) = &step.pre_unitary {
                    object.insert("unitary".into(), matrix_to_value(u));
                }
                Value::Object(object)
            })
            .collect();
        root.insert("sequence".into(), Value::Array(steps));
    }
    let mut inequality = Map::new();
    inequality.insert(
        "terms".into(),
        Value::Array(
            scenario
                .inequality()
                .terms
                .iter()
                .map(|(coeff, names)| json!({"coeff": coeff, "names": names}))
                .collect(),
        ),
    );
    inequality.insert(
        "direction".into(),
        Value::String(
            match scenario.inequality().direction {
                Direction::Maximize => "max",
                Direction::Minimize => "min",
            }
            .into(),
        ),
    );
    if let Some(bound) = scenario.inequality().declared_bound {
        inequality.insert("classical_bound".into(), json!(bound));
    }
    root.insert("inequality".into(), Value::Object(inequality));

    serde_json::to_string_pretty(&Value::Object(root)).expect("report value serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{chsh_default, leggett_garg_scenario};
    use crate::scenario::quantum_value;

    #[test]
    fn chsh_round_trip_through_document() {
        let scenario = chsh_default().unwrap();
        let text = serialize_scenario(&scenario);
        let parsed = parse_scenario(&text).unwrap();
        assert_eq!(parsed.observables().len(), 4);
        assert_eq!(parsed.contexts().len(), 4);
        let original = quantum_value(&scenario).unwrap();
        let reparsed = quantum_value(&parsed).unwrap();
        assert!((original - reparsed).abs() <= 1e-12);
    }

    #[test]
    fn temporal_round_trip_through_document() {
        let scenario = leggett_garg_scenario(std::f64::consts::FRAC_PI_3).unwrap();
        let text = serialize_scenario(&scenario);
        let parsed = parse_scenario(&text).unwrap();
        assert!(parsed.is_temporal());
        let original = quantum_value(&scenario).unwrap();
        let reparsed = quantum_value(&parsed).unwrap();
        assert!((original - reparsed).abs() <= 1e-12);
    }

    #[test]
    fn bad_norm_names_the_state_field() {
        let text = r#"{
            "dim": 2,
            "state": [[0.9, 0.0], [0.0, 0.0]],
            "observables": {"Z": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
            "contexts": [["Z"]],
            "inequality": {"terms": [{"coeff": 1.0, "names": ["Z"]}], "direction": "max"}
        }"#;
        match parse_scenario(text) {
            Err(Error::Semantic { field, .. }) => assert_eq!(field, "state"),
            other => panic!("expected semantic error on state, got {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_observable_is_named() {
        let text = r#"{
            "dim": 2,
            "state": [[1.0, 0.0], [0.0, 0.0]],
            "observables": {"M": [[[0,0],[1,0]],[[0,0],[0,0]]]},
            "contexts": [],
            "inequality": {"terms": [{"coeff": 1.0, "names": ["M"]}], "direction": "max"}
        }"#;
        match parse_scenario(text) {
            Err(Error::Semantic { field, .. }) => assert_eq!(field, "observables.M"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn noncommuting_context_is_named_by_index() {
        let text = r#"{
            "dim": 2,
            "state": [[1.0, 0.0], [0.0, 0.0]],
            "observables": {
                "X": [[[0,0],[1,0]],[[1,0],[0,0]]],
                "Z": [[[1,0],[0,0]],[[0,0],[-1,0]]]
            },
            "contexts": [["X", "Z"]],
            "inequality": {"terms": [{"coeff": 1.0, "names": ["X"]}], "direction": "max"}
        }"#;
        match parse_scenario(text) {
            Err(Error::Semantic { field, .. }) => assert_eq!(field, "contexts[0]"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_scenario("{ not json") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 1);
                assert!(column > 0);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn complex_entries_must_be_pairs() {
        let text = r#"{
            "dim": 1,
            "state": [[1.0]],
            "observables": {"I": [[[1,0]]]},
            "contexts": [],
            "inequality": {"terms": [{"coeff": 1.0, "names": ["I"]}], "direction": "max"}
        }"#;
        match parse_scenario(text) {
            Err(Error::Semantic { field, .. }) => assert_eq!(field, "state[0]"),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }
}
