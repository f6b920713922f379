//! N-Triples, N-Quads and Turtle writers.

use std::fmt::Write;

use crate::rdf::model::{Dataset, Graph, Iri, Literal, Term, Triple};
use crate::rdf::vocab;

/// Output and `--load` formats for RDF graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdfFormat {
    NTriples,
    Turtle,
    NQuads,
}

impl RdfFormat {
    pub fn from_extension(path: &str) -> Option<RdfFormat> {
        let ext = path.rsplit('.').next()?.to_ascii_lowercase();
        match ext.as_str() {
            "nt" => Some(RdfFormat::NTriples),
            "ttl" | "turtle" => Some(RdfFormat::Turtle),
            "nq" | "nquads" => Some(RdfFormat::NQuads),
            _ => None,
        }
    }
}

pub fn serialize_graph(graph: &Graph, format: RdfFormat) -> String {
    match format {
        RdfFormat::NTriples => write_ntriples(graph),
        RdfFormat::Turtle => write_turtle(graph),
        // A bare graph is promoted to the default graph of a dataset.
        RdfFormat::NQuads => write_ntriples(graph),
    }
}

pub fn serialize_dataset(dataset: &Dataset, format: RdfFormat) -> String {
    match format {
        RdfFormat::NQuads => {
            let mut out = String::new();
            for t in dataset.default.iter() {
                write_nq_line(&mut out, t, None);
            }
            for (name, graph) in &dataset.named {
                for t in graph.iter() {
                    write_nq_line(&mut out, t, Some(name));
                }
            }
            out
        }
        // Non-quad formats only carry the default graph.
        other => serialize_graph(&dataset.default, other),
    }
}

fn write_ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for t in graph.iter() {
        write_nq_line(&mut out, t, None);
    }
    out
}

fn write_nq_line(out: &mut String, t: &Triple, graph: Option<&Iri>) {
    out.push_str(&term_to_ntriples(&t.subject));
    out.push(' ');
    out.push_str(&term_to_ntriples(&t.predicate));
    out.push(' ');
    out.push_str(&term_to_ntriples(&t.object));
    if let Some(name) = graph {
        out.push(' ');
        out.push_str(&iri_ref(name));
    }
    out.push_str(" .\n");
}

/// The canonical N-Triples form of a term, also used for diagnostics and
/// the TEXT result table.
pub fn term_to_ntriples(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri_ref(iri),
        Term::Blank(label) => format!("_:{}", sanitize_blank_label(label)),
        Term::Literal(lit) => literal_to_ntriples(lit),
    }
}

fn literal_to_ntriples(lit: &Literal) -> String {
    let mut out = String::with_capacity(lit.lexical().len() + 2);
    out.push('"');
    escape_literal(lit.lexical(), &mut out);
    out.push('"');
    if let Some(tag) = lit.language() {
        out.push('@');
        out.push_str(tag);
    } else if !lit.is_plain_string() {
        out.push_str("^^");
        out.push_str(&iri_ref(lit.datatype()));
    }
    out
}

fn iri_ref(iri: &Iri) -> String {
    let mut out = String::with_capacity(iri.as_str().len() + 2);
    out.push('<');
    for c in iri.as_str().chars() {
        match c {
            '\u{00}'..='\u{20}' | '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('>');
    out
}

fn escape_literal(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

/// Blank node labels survive round-trips only if they fit the grammar;
/// anything else is hex-mangled deterministically.
fn sanitize_blank_label(label: &str) -> String {
    let ok = !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
        && !label.starts_with(|c: char| c.is_ascii_digit());
    if ok {
        label.to_owned()
    } else {
        let mut mangled = String::from("bx");
        for b in label.bytes() {
            let _ = write!(mangled, "{b:02x}");
        }
        mangled
    }
}

const TURTLE_PREFIXES: &[(&str, &str)] = &[
    ("rdf", vocab::RDF_NS),
    ("rdfs", vocab::RDFS_NS),
    ("xsd", vocab::XSD_NS),
    ("fx", vocab::FX_NS),
    ("xyz", vocab::XYZ_NS),
];

fn write_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    let mut used = [false; TURTLE_PREFIXES.len()];
    let mut body = String::new();

    // Group statements by subject, in first-appearance order.
    let mut subjects: Vec<&Term> = Vec::new();
    for t in graph.iter() {
        if !subjects.contains(&&t.subject) {
            subjects.push(&t.subject);
        }
    }
    for subject in subjects {
        let triples: Vec<&Triple> = graph.iter().filter(|t| &t.subject == subject).collect();
        body.push_str(&turtle_term(subject, &mut used));
        let mut first = true;
        for t in &triples {
            if first {
                body.push(' ');
                first = false;
            } else {
                body.push_str(" ;\n    ");
            }
            body.push_str(&turtle_predicate(&t.predicate, &mut used));
            body.push(' ');
            body.push_str(&turtle_term(&t.object, &mut used));
        }
        body.push_str(" .\n");
    }

    for (i, (prefix, ns)) in TURTLE_PREFIXES.iter().enumerate() {
        if used[i] {
            let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
        }
    }
    if !out.is_empty() && !body.is_empty() {
        out.push('\n');
    }
    out.push_str(&body);
    out
}

fn turtle_predicate(term: &Term, used: &mut [bool]) -> String {
    if let Term::Iri(iri) = term {
        if iri.as_str() == vocab::RDF_TYPE {
            return "a".to_owned();
        }
    }
    turtle_term(term, used)
}

fn turtle_term(term: &Term, used: &mut [bool]) -> String {
    match term {
        Term::Iri(iri) => {
            for (i, (prefix, ns)) in TURTLE_PREFIXES.iter().enumerate() {
                if let Some(local) = iri.as_str().strip_prefix(ns) {
                    if is_safe_local(local) {
                        used[i] = true;
                        return format!("{prefix}:{local}");
                    }
                }
            }
            iri_ref(iri)
        }
        Term::Blank(_) => term_to_ntriples(term),
        Term::Literal(lit) => {
            if let Some(tag) = lit.language() {
                let mut s = String::new();
                s.push('"');
                escape_literal(lit.lexical(), &mut s);
                s.push('"');
                s.push('@');
                s.push_str(tag);
                s
            } else if lit.is_plain_string() {
                let mut s = String::new();
                s.push('"');
                escape_literal(lit.lexical(), &mut s);
                s.push('"');
                s
            } else {
                let mut s = String::new();
                s.push('"');
                escape_literal(lit.lexical(), &mut s);
                s.push_str("\"^^");
                s.push_str(&turtle_term(&Term::Iri(lit.datatype().clone()), used));
                s
            }
        }
    }
}

/// Conservative prefixed-name local part: letters, digits, `_` and `-`,
/// not starting with a digit unless it is a membership property (`_1`).
fn is_safe_local(local: &str) -> bool {
    !local.is_empty()
        && local
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
        && !local.starts_with(|c: char| c.is_ascii_digit() || c == '-')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::model::Term;

    fn root_triple() -> Triple {
        Triple::new(
            Term::blank("b0"),
            Term::iri_unchecked(vocab::RDF_TYPE),
            Term::iri_unchecked(vocab::FX_ROOT),
        )
    }

    #[test]
    fn empty_graph_serializes_to_empty_text() {
        assert_eq!(serialize_graph(&Graph::new(), RdfFormat::NTriples), "");
    }

    #[test]
    fn single_statement_is_one_dot_terminated_line() {
        let g: Graph = [root_triple()].into_iter().collect();
        let nt = serialize_graph(&g, RdfFormat::NTriples);
        assert_eq!(nt.lines().count(), 1);
        assert!(nt.ends_with(" .\n"));
        assert!(nt.contains("_:b0"));
    }

    #[test]
    fn turtle_uses_prefixes_and_a() {
        let g: Graph = [root_triple()].into_iter().collect();
        let ttl = serialize_graph(&g, RdfFormat::Turtle);
        assert!(ttl.contains("@prefix fx:"));
        assert!(ttl.contains("_:b0 a fx:root"));
    }

    #[test]
    fn literal_escapes() {
        let t = Term::string("say \"hi\"\nnew\tline\\end");
        let s = term_to_ntriples(&t);
        assert_eq!(s, "\"say \\\"hi\\\"\\nnew\\tline\\\\end\"");
    }

    #[test]
    fn nquads_promotes_bare_graph_to_default() {
        let g: Graph = [root_triple()].into_iter().collect();
        let nq = serialize_graph(&g, RdfFormat::NQuads);
        // Default graph lines have three terms, same as N-Triples.
        assert_eq!(nq, serialize_graph(&g, RdfFormat::NTriples));
    }
}
