//! Parameter binding rows: a SPARQL Results JSON file, a CSV file with
//! a header row, or repeated `-v name=value` flags forming one row.

use std::path::Path;

use fx_core::error::FxError;

use crate::basil::ParameterRow;

pub fn rows_from_inline(values: &[String]) -> Result<Vec<ParameterRow>, FxError> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let mut row = ParameterRow::new();
    for value in values {
        let (name, value) = value.split_once('=').ok_or_else(|| {
            FxError::Usage(format!("-v expects name=value, got \"{value}\""))
        })?;
        row.insert(name.to_owned(), value.to_owned());
    }
    Ok(vec![row])
}

pub fn rows_from_file(path: &Path) -> Result<Vec<ParameterRow>, FxError> {
    let text = std::fs::read_to_string(path).map_err(|source| FxError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "json" | "srj" => rows_from_results_json(&text, path),
        "csv" => rows_from_csv(&text, path),
        _ => {
            // Sniff: results JSON starts with '{'.
            if text.trim_start().starts_with('{') {
                rows_from_results_json(&text, path)
            } else {
                rows_from_csv(&text, path)
            }
        }
    }
}

fn rows_from_results_json(text: &str, path: &Path) -> Result<Vec<ParameterRow>, FxError> {
    let bad = |msg: String| FxError::Usage(format!("{}: {msg}", path.display()));
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| bad(format!("not valid JSON: {e}")))?;
    let bindings = value
        .pointer("/results/bindings")
        .and_then(|b| b.as_array())
        .ok_or_else(|| bad("not a SPARQL results document (missing results.bindings)".into()))?;
    let mut rows = Vec::with_capacity(bindings.len());
    for binding in bindings {
        let object = binding
            .as_object()
            .ok_or_else(|| bad("binding is not an object".into()))?;
        let mut row = ParameterRow::new();
        for (name, term) in object {
            let value = term
                .get("value")
                .and_then(|v| v.as_str())
                .ok_or_else(|| bad(format!("binding {name} has no value")))?;
            row.insert(name.clone(), value.to_owned());
        }
        rows.push(row);
    }
    Ok(rows)
}

fn rows_from_csv(text: &str, path: &Path) -> Result<Vec<ParameterRow>, FxError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        Some(record) => record
            .map_err(|e| FxError::Usage(format!("{}: {e}", path.display())))?
            .iter()
            .map(str::to_owned)
            .collect(),
        None => return Ok(Vec::new()),
    };
    let mut rows = Vec::new();
    for record in records {
        let record = record.map_err(|e| FxError::Usage(format!("{}: {e}", path.display())))?;
        let mut row = ParameterRow::new();
        for (name, value) in header.iter().zip(record.iter()) {
            row.insert(name.clone(), value.to_owned());
        }
        rows.push(row);
    }
    Ok(rows)
}
