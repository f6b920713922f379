//! Parametrized queries, BASIL style: variables whose name starts with
//! an underscore (`?_name`) are external parameters, replaced before
//! parsing with values from the bindings file or the command line, and
//! the query repeats once per binding row. `?__name` marks an optional
//! parameter that substitutes as the empty string when missing.
//!
//! Inside `<...>` IRI brackets values splice in raw (that is how
//! service IRIs get their locations); anywhere else the value becomes a
//! quoted string literal.

use std::collections::BTreeMap;

use fx_core::error::FxError;

/// One row of parameter values.
pub type ParameterRow = BTreeMap<String, String>;

#[derive(Debug, PartialEq, Eq)]
enum Segment {
    Text(String),
    /// (name, optional, inside-iri)
    Parameter(String, bool, bool),
}

/// Parameter names referenced by the query, required ones only.
pub fn required_parameters(query: &str) -> Vec<String> {
    segments(query)
        .into_iter()
        .filter_map(|s| match s {
            Segment::Parameter(name, false, _) => Some(name),
            _ => None,
        })
        .collect()
}

pub fn has_parameters(query: &str) -> bool {
    segments(query)
        .iter()
        .any(|s| matches!(s, Segment::Parameter(..)))
}

/// Expands the query once per row. A row missing a required parameter
/// yields that row's error entry instead of a query.
pub fn expand(query: &str, rows: &[ParameterRow]) -> Vec<Result<String, FxError>> {
    let parts = segments(query);
    rows.iter()
        .map(|row| {
            let mut out = String::with_capacity(query.len());
            for part in &parts {
                match part {
                    Segment::Text(text) => out.push_str(text),
                    Segment::Parameter(name, optional, inside_iri) => {
                        match (row.get(name), optional) {
                            (Some(value), _) => {
                                if *inside_iri {
                                    out.push_str(value);
                                } else {
                                    out.push('"');
                                    for c in value.chars() {
                                        match c {
                                            '"' => out.push_str("\\\""),
                                            '\\' => out.push_str("\\\\"),
                                            '\n' => out.push_str("\\n"),
                                            c => out.push(c),
                                        }
                                    }
                                    out.push('"');
                                }
                            }
                            (None, true) => {
                                if !*inside_iri {
                                    out.push_str("\"\"");
                                }
                            }
                            (None, false) => {
                                return Err(FxError::Usage(format!(
                                    "row is missing required parameter \"{name}\""
                                )))
                            }
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect()
}

/// Substitutes parameters into an output file-name pattern, always raw.
pub fn expand_pattern(pattern: &str, row: &ParameterRow) -> Result<String, FxError> {
    let mut out = String::new();
    for part in segments(pattern) {
        match part {
            Segment::Text(text) => out.push_str(&text),
            Segment::Parameter(name, optional, _) => match row.get(&name) {
                Some(value) => out.push_str(value),
                None if optional => {}
                None => {
                    return Err(FxError::Usage(format!(
                        "output pattern references missing parameter \"{name}\""
                    )))
                }
            },
        }
    }
    Ok(out)
}

/// Splits text into literal segments and parameter references, tracking
/// string-literal, IRI and comment contexts so `?_` inside a quoted
/// string or a comment is left alone.
fn segments(query: &str) -> Vec<Segment> {
    let chars: Vec<char> = query.chars().collect();
    let mut out = Vec::new();
    let mut text = String::new();
    let mut i = 0;
    let mut in_string: Option<char> = None;
    let mut in_iri = false;
    let mut in_comment = false;

    while i < chars.len() {
        let c = chars[i];
        if in_comment {
            text.push(c);
            if c == '\n' {
                in_comment = false;
            }
            i += 1;
            continue;
        }
        if let Some(quote) = in_string {
            text.push(c);
            if c == '\\' && i + 1 < chars.len() {
                text.push(chars[i + 1]);
                i += 2;
                continue;
            }
            if c == quote {
                in_string = None;
            }
            i += 1;
            continue;
        }
        match c {
            '"' | '\'' => {
                in_string = Some(c);
                text.push(c);
                i += 1;
            }
            '#' if !in_iri => {
                in_comment = true;
                text.push(c);
                i += 1;
            }
            '<' if !in_iri => {
                in_iri = true;
                text.push(c);
                i += 1;
            }
            '>' if in_iri => {
                in_iri = false;
                text.push(c);
                i += 1;
            }
            '?' | '$' if i + 1 < chars.len() && chars[i + 1] == '_' => {
                let mut j = i + 2;
                let optional = chars.get(j) == Some(&'_');
                if optional {
                    j += 1;
                }
                let start = j;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_')
                {
                    j += 1;
                }
                if start == j {
                    // A bare "?_" is not a parameter.
                    text.push(c);
                    i += 1;
                    continue;
                }
                let name: String = chars[start..j].iter().collect();
                if !text.is_empty() {
                    out.push(Segment::Text(std::mem::take(&mut text)));
                }
                out.push(Segment::Parameter(name, optional, in_iri));
                i = j;
            }
            c => {
                text.push(c);
                i += 1;
            }
        }
    }
    if !text.is_empty() {
        out.push(Segment::Text(text));
    }
    out
}
