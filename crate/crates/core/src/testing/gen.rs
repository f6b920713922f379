//! Seeded random fixtures: graphs, queries in the oracle subset, JSON
//! and CSV documents, and SERVICE patterns over their vocabulary.

use rand::rngs::StdRng;
use rand::RngExt;

use crate::config::FacadeOptions;
use crate::query::algebra::{
    CmpOp, Element, Expression, GroupPattern, PatternTerm, Query, QueryForm, TriplePattern, Var,
};
use crate::rdf::{vocab, Graph, Iri, Literal, Term, Triple};

const TRICKY_STRINGS: &[&str] = &[
    "plain",
    "",
    "with space",
    "quote\"inside",
    "back\\slash",
    "new\nline",
    "tab\there",
    "unicode é ü 漢字",
    "trailing ",
    " leading",
];

pub fn random_term(rng: &mut StdRng) -> Term {
    match rng.random_range(0..6) {
        0 => Term::iri_unchecked(format!("http://example.org/r{}", rng.random_range(0..8))),
        1 => Term::blank(format!("n{}", rng.random_range(0..6))),
        2 => Term::string(TRICKY_STRINGS[rng.random_range(0..TRICKY_STRINGS.len())]),
        3 => Term::Literal(Literal::int(rng.random_range(-100..100))),
        4 => Term::Literal(Literal::lang(
            TRICKY_STRINGS[rng.random_range(0..TRICKY_STRINGS.len())],
            if rng.random_bool(0.5) { "en" } else { "de-AT" },
        )),
        _ => Term::Literal(Literal::typed(
            format!("{}", rng.random_range(0..50)),
            Iri::new_unchecked(vocab::XSD_INT),
        )),
    }
}

fn random_subject(rng: &mut StdRng) -> Term {
    if rng.random_bool(0.5) {
        Term::iri_unchecked(format!("http://example.org/s{}", rng.random_range(0..6)))
    } else {
        Term::blank(format!("n{}", rng.random_range(0..6)))
    }
}

fn random_predicate(rng: &mut StdRng) -> Term {
    if rng.random_bool(0.2) {
        Term::Iri(vocab::membership(rng.random_range(1..4)).expect("positive"))
    } else {
        Term::iri_unchecked(format!("http://example.org/p{}", rng.random_range(0..5)))
    }
}

pub fn random_graph(rng: &mut StdRng, max_triples: usize) -> Graph {
    let count = rng.random_range(0..=max_triples);
    let mut graph = Graph::new();
    for _ in 0..count {
        graph.insert(Triple::new(
            random_subject(rng),
            random_predicate(rng),
            random_term(rng),
        ));
    }
    graph
}

/// A SELECT query in the naive-oracle subset, biased toward terms that
/// occur in the graph so matches actually happen.
pub fn random_select_query(rng: &mut StdRng, graph: &Graph) -> Query {
    let triples: Vec<&Triple> = graph.iter().collect();
    let position = |rng: &mut StdRng, pick: fn(&Triple) -> &Term| -> PatternTerm {
        if triples.is_empty() || rng.random_bool(0.6) {
            PatternTerm::Var(Var::named(format!("v{}", rng.random_range(0..4))))
        } else {
            let t = triples[rng.random_range(0..triples.len())];
            PatternTerm::Term(pick(t).clone())
        }
    };
    let random_bgp = |rng: &mut StdRng, max: usize| -> Vec<TriplePattern> {
        let count = rng.random_range(1..=max);
        (0..count)
            .map(|_| TriplePattern {
                subject: position(rng, |t| &t.subject),
                predicate: position(rng, |t| &t.predicate),
                object: position(rng, |t| &t.object),
            })
            .collect()
    };

    let mut elements = vec![Element::Bgp(random_bgp(rng, 2))];
    match rng.random_range(0..4) {
        0 => elements.push(Element::Optional(GroupPattern {
            elements: vec![Element::Bgp(random_bgp(rng, 1))],
        })),
        1 => elements.push(Element::Union(vec![
            GroupPattern {
                elements: vec![Element::Bgp(random_bgp(rng, 1))],
            },
            GroupPattern {
                elements: vec![Element::Bgp(random_bgp(rng, 1))],
            },
        ])),
        2 if !triples.is_empty() => {
            let t = triples[rng.random_range(0..triples.len())];
            let op = if rng.random_bool(0.5) {
                CmpOp::Eq
            } else {
                CmpOp::Ne
            };
            elements.push(Element::Filter(Expression::Compare(
                op,
                Box::new(Expression::Var(Var::named(format!(
                    "v{}",
                    rng.random_range(0..4)
                )))),
                Box::new(Expression::Term(t.object.clone())),
            )));
        }
        _ => {}
    }

    Query {
        form: QueryForm::Select {
            distinct: rng.random_bool(0.3),
            projection: None,
        },
        pattern: GroupPattern { elements },
        order_by: Vec::new(),
        limit: None,
        offset: None,
    }
}

/// A random JSON document of at most `budget` nodes, with keys drawn
/// from a small vocabulary so patterns can hit them.
pub fn random_json(rng: &mut StdRng, budget: usize) -> serde_json::Value {
    let mut remaining = budget.max(1);
    random_json_value(rng, &mut remaining, 0)
}

const JSON_KEYS: &[&str] = &["id", "name", "tags", "meta", "value"];

fn random_json_value(rng: &mut StdRng, remaining: &mut usize, depth: usize) -> serde_json::Value {
    *remaining = remaining.saturating_sub(1);
    if *remaining == 0 || depth >= 3 {
        return random_json_scalar(rng);
    }
    match rng.random_range(0..4) {
        0 => {
            let len = rng.random_range(0..4).min(*remaining);
            serde_json::Value::Array(
                (0..len)
                    .map(|_| random_json_value(rng, remaining, depth + 1))
                    .collect(),
            )
        }
        1 | 2 => {
            let len = rng.random_range(1..4).min((*remaining).max(1));
            let mut object = serde_json::Map::new();
            for _ in 0..len {
                object.insert(
                    JSON_KEYS[rng.random_range(0..JSON_KEYS.len())].to_owned(),
                    random_json_value(rng, remaining, depth + 1),
                );
            }
            serde_json::Value::Object(object)
        }
        _ => random_json_scalar(rng),
    }
}

fn random_json_scalar(rng: &mut StdRng) -> serde_json::Value {
    match rng.random_range(0..4) {
        0 => serde_json::Value::String(format!("s{}", rng.random_range(0..10))),
        1 => serde_json::Value::Number(rng.random_range(0..100).into()),
        2 => serde_json::Value::Bool(rng.random_bool(0.5)),
        _ => serde_json::Value::Null,
    }
}

/// A random CSV document: header row of known names plus data rows.
pub fn random_csv(rng: &mut StdRng, max_rows: usize) -> String {
    let columns = rng.random_range(1..4);
    let rows = rng.random_range(0..=max_rows);
    let mut out = (0..columns)
        .map(|c| format!("c{c}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for _ in 0..rows {
        let row: Vec<String> = (0..columns)
            .map(|_| format!("x{}", rng.random_range(0..8)))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// A random SERVICE residual pattern of at most `max_patterns` triple
/// patterns over the facade vocabulary (xyz: keys, membership slots,
/// fx:anySlot, rdf:type).
pub fn random_service_pattern(rng: &mut StdRng, max_patterns: usize) -> GroupPattern {
    let count = rng.random_range(1..=max_patterns);
    let mut patterns = Vec::with_capacity(count);
    for _ in 0..count {
        let subject = PatternTerm::Var(Var::named(format!("s{}", rng.random_range(0..3))));
        let predicate = match rng.random_range(0..5) {
            0 => PatternTerm::Term(Term::Iri(
                vocab::membership(rng.random_range(1..4)).expect("positive"),
            )),
            1 => PatternTerm::Term(Term::iri_unchecked(vocab::FX_ANY_SLOT)),
            2 => PatternTerm::Term(Term::iri_unchecked(format!(
                "{}{}",
                vocab::XYZ_NS,
                JSON_KEYS[rng.random_range(0..JSON_KEYS.len())]
            ))),
            3 => PatternTerm::Term(Term::iri_unchecked(vocab::RDF_TYPE)),
            _ => PatternTerm::Var(Var::named(format!("p{}", rng.random_range(0..2)))),
        };
        let object = if rng.random_bool(0.7) {
            PatternTerm::Var(Var::named(format!("o{}", rng.random_range(0..3))))
        } else {
            PatternTerm::Term(Term::string(format!("x{}", rng.random_range(0..8))))
        };
        patterns.push(TriplePattern {
            subject,
            predicate,
            object,
        });
    }
    GroupPattern {
        elements: vec![Element::Bgp(patterns)],
    }
}

/// Wraps a residual pattern in `SELECT * { SERVICE <iri> { ... } }`
/// over inline content with the given media type and options.
pub fn service_query(
    content: &str,
    media_type: &str,
    extra_options: &[(&str, &str)],
    residual: GroupPattern,
) -> Query {
    let mut options = FacadeOptions::new();
    options.set("content", content);
    options.set("media-type", media_type);
    for (name, value) in extra_options {
        options.set(name, *value);
    }
    let iri = crate::config::encode_service_iri(&options);
    let service = Element::Service {
        target: crate::query::algebra::ServiceTarget::Iri(Iri::new_unchecked(iri)),
        pattern: residual,
        silent: false,
    };
    Query {
        form: QueryForm::Select {
            distinct: false,
            projection: None,
        },
        pattern: GroupPattern {
            elements: vec![service],
        },
        order_by: Vec::new(),
        limit: None,
        offset: None,
    }
}
