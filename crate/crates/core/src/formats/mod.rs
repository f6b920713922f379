//! Result serialization: SPARQL Results JSON/XML, CSV and an aligned
//! TEXT table for solution rows and booleans; the RDF writers cover
//! CONSTRUCT output. Used by both the CLI and the endpoint so the two
//! agree byte-for-byte on shared formats.

use std::fmt::Write as _;

use crate::error::FxError;
use crate::query::{QueryOutcome, Solution, Var};
use crate::rdf::{serialize_dataset, term_to_ntriples, Dataset, RdfFormat, Term};

/// Output formats selectable with `-f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Xml,
    Csv,
    Text,
    Turtle,
    NTriples,
    NQuads,
}

impl OutputFormat {
    pub fn parse(token: &str) -> Result<OutputFormat, FxError> {
        match token.to_ascii_uppercase().as_str() {
            "JSON" => Ok(OutputFormat::Json),
            "XML" => Ok(OutputFormat::Xml),
            "CSV" => Ok(OutputFormat::Csv),
            "TEXT" => Ok(OutputFormat::Text),
            "TTL" | "TURTLE" => Ok(OutputFormat::Turtle),
            "NT" => Ok(OutputFormat::NTriples),
            "NQ" => Ok(OutputFormat::NQuads),
            other => Err(FxError::Usage(format!(
                "unknown output format \"{other}\" (expected JSON, XML, CSV, TEXT, TTL, NT or NQ)"
            ))),
        }
    }

    pub fn is_graph_format(&self) -> bool {
        matches!(
            self,
            OutputFormat::Turtle | OutputFormat::NTriples | OutputFormat::NQuads
        )
    }

    pub fn content_type(&self) -> &'static str {
        match self {
            OutputFormat::Json => "application/sparql-results+json",
            OutputFormat::Xml => "application/sparql-results+xml",
            OutputFormat::Csv => "text/csv",
            OutputFormat::Text => "text/plain",
            OutputFormat::Turtle => "text/turtle",
            OutputFormat::NTriples => "application/n-triples",
            OutputFormat::NQuads => "application/n-quads",
        }
    }

    fn rdf_format(&self) -> Option<RdfFormat> {
        match self {
            OutputFormat::Turtle => Some(RdfFormat::Turtle),
            OutputFormat::NTriples => Some(RdfFormat::NTriples),
            OutputFormat::NQuads => Some(RdfFormat::NQuads),
            _ => None,
        }
    }
}

/// Checks the format fits the query form before execution.
pub fn check_compatible(result_is_graph: bool, format: OutputFormat) -> Result<(), FxError> {
    if result_is_graph != format.is_graph_format() {
        let hint = if result_is_graph {
            "CONSTRUCT results need TTL, NT or NQ"
        } else {
            "SELECT/ASK results need JSON, XML, CSV or TEXT"
        };
        return Err(FxError::Usage(format!(
            "output format does not fit the query form: {hint}"
        )));
    }
    Ok(())
}

pub fn format_results(outcome: &QueryOutcome, format: OutputFormat) -> Result<String, FxError> {
    match outcome {
        QueryOutcome::Graph(graph) => {
            let rdf = format.rdf_format().ok_or_else(|| {
                FxError::Usage("graph results need TTL, NT or NQ".into())
            })?;
            Ok(serialize_dataset(
                &Dataset::from_default(graph.clone()),
                rdf,
            ))
        }
        QueryOutcome::Boolean(value) => match format {
            OutputFormat::Json => Ok(format!(
                "{{\"head\":{{}},\"boolean\":{value}}}\n"
            )),
            OutputFormat::Xml => Ok(format!(
                "<?xml version=\"1.0\"?>\n<sparql xmlns=\"http://www.w3.org/2005/sparql-results#\">\n  <head/>\n  <boolean>{value}</boolean>\n</sparql>\n"
            )),
            OutputFormat::Csv | OutputFormat::Text => Ok(format!("{value}\n")),
            _ => Err(FxError::Usage(
                "boolean results need JSON, XML, CSV or TEXT".into(),
            )),
        },
        QueryOutcome::Solutions { variables, rows } => match format {
            OutputFormat::Json => Ok(results_json(variables, rows)),
            OutputFormat::Xml => Ok(results_xml(variables, rows)),
            OutputFormat::Csv => Ok(results_csv(variables, rows)),
            OutputFormat::Text => Ok(results_text(variables, rows)),
            _ => Err(FxError::Usage(
                "solution results need JSON, XML, CSV or TEXT".into(),
            )),
        },
    }
}

fn get<'a>(row: &'a Solution, name: &str) -> Option<&'a Term> {
    row.get(&Var::named(name))
}

fn results_json(variables: &[String], rows: &[Solution]) -> String {
    let mut bindings = Vec::with_capacity(rows.len());
    for row in rows {
        let mut object = serde_json::Map::new();
        for name in variables {
            if let Some(term) = get(row, name) {
                object.insert(name.clone(), term_json(term));
            }
        }
        bindings.push(serde_json::Value::Object(object));
    }
    let document = serde_json::json!({
        "head": { "vars": variables },
        "results": { "bindings": bindings },
    });
    let mut out = serde_json::to_string_pretty(&document).expect("json serialization");
    out.push('\n');
    out
}

fn term_json(term: &Term) -> serde_json::Value {
    match term {
        Term::Iri(iri) => serde_json::json!({ "type": "uri", "value": iri.as_str() }),
        Term::Blank(label) => serde_json::json!({ "type": "bnode", "value": label }),
        Term::Literal(lit) => {
            let mut object = serde_json::Map::new();
            object.insert("type".into(), "literal".into());
            object.insert("value".into(), lit.lexical().into());
            if let Some(tag) = lit.language() {
                object.insert("xml:lang".into(), tag.into());
            } else if !lit.is_plain_string() {
                object.insert("datatype".into(), lit.datatype().as_str().into());
            }
            serde_json::Value::Object(object)
        }
    }
}

fn results_xml(variables: &[String], rows: &[Solution]) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\"?>\n<sparql xmlns=\"http://www.w3.org/2005/sparql-results#\">\n  <head>\n",
    );
    for name in variables {
        let _ = writeln!(out, "    <variable name=\"{}\"/>", xml_escape(name));
    }
    out.push_str("  </head>\n  <results>\n");
    for row in rows {
        out.push_str("    <result>\n");
        for name in variables {
            if let Some(term) = get(row, name) {
                let _ = write!(out, "      <binding name=\"{}\">", xml_escape(name));
                match term {
                    Term::Iri(iri) => {
                        let _ = write!(out, "<uri>{}</uri>", xml_escape(iri.as_str()));
                    }
                    Term::Blank(label) => {
                        let _ = write!(out, "<bnode>{}</bnode>", xml_escape(label));
                    }
                    Term::Literal(lit) => {
                        if let Some(tag) = lit.language() {
                            let _ = write!(
                                out,
                                "<literal xml:lang=\"{}\">{}</literal>",
                                xml_escape(tag),
                                xml_escape(lit.lexical())
                            );
                        } else if lit.is_plain_string() {
                            let _ =
                                write!(out, "<literal>{}</literal>", xml_escape(lit.lexical()));
                        } else {
                            let _ = write!(
                                out,
                                "<literal datatype=\"{}\">{}</literal>",
                                xml_escape(lit.datatype().as_str()),
                                xml_escape(lit.lexical())
                            );
                        }
                    }
                }
                out.push_str("</binding>\n");
            }
        }
        out.push_str("    </result>\n");
    }
    out.push_str("  </results>\n</sparql>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// SPARQL Results CSV: header row of variable names, terms written bare
/// (IRI text, literal lexical form, `_:label`), RFC 4180 quoting.
fn results_csv(variables: &[String], rows: &[Solution]) -> String {
    let mut out = String::new();
    out.push_str(
        &variables
            .iter()
            .map(|v| csv_field(v))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for row in rows {
        let fields: Vec<String> = variables
            .iter()
            .map(|name| match get(row, name) {
                Some(Term::Iri(iri)) => csv_field(iri.as_str()),
                Some(Term::Blank(label)) => csv_field(&format!("_:{label}")),
                Some(Term::Literal(lit)) => csv_field(lit.lexical()),
                None => String::new(),
            })
            .collect();
        out.push_str(&fields.join(","));
        out.push_str("\r\n");
    }
    out
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_owned()
    }
}

/// Fixed-width table: a header row, a dash rule, then one row per
/// solution, columns padded to the widest cell, cells separated by
/// " | " and the line wrapped in "| ... |". Terms print in N-Triples
/// syntax; unbound cells are empty.
fn results_text(variables: &[String], rows: &[Solution]) -> String {
    let render = |row: &Solution, name: &str| -> String {
        match get(row, name) {
            Some(term) => term_to_ntriples(term),
            None => String::new(),
        }
    };
    let mut widths: Vec<usize> = variables.iter().map(|v| v.chars().count() + 1).collect();
    for row in rows {
        for (i, name) in variables.iter().enumerate() {
            widths[i] = widths[i].max(render(row, name).chars().count());
        }
    }
    let mut out = String::new();
    let header: Vec<String> = variables
        .iter()
        .enumerate()
        .map(|(i, v)| pad(&format!("?{v}"), widths[i]))
        .collect();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "|-{}-|", rule.join("-|-"));
    for row in rows {
        let cells: Vec<String> = variables
            .iter()
            .enumerate()
            .map(|(i, name)| pad(&render(row, name), widths[i]))
            .collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

fn pad(s: &str, width: usize) -> String {
    let len = s.chars().count();
    let mut out = s.to_owned();
    for _ in len..width {
        out.push(' ');
    }
    out
}
