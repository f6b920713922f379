//! The RDF value model every triplifier emits and the query engine consumes.
//!
//! Terms and graphs are immutable once built and cheap to share across
//! threads; construction goes through the checked constructors below.

use indexmap::IndexSet;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::FxError;
use crate::rdf::vocab;

/// An absolute IRI. The constructor rejects strings without a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Iri, FxError> {
        let value = value.into();
        if !has_scheme(&value) {
            return Err(FxError::InvalidIri(value));
        }
        Ok(Iri(value))
    }

    /// For IRIs known valid at compile time (vocabulary constants, minted IRIs).
    pub(crate) fn new_unchecked(value: impl Into<String>) -> Iri {
        Iri(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn has_scheme(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    for c in chars {
        match c {
            ':' => return true,
            c if c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.' => {}
            _ => return false,
        }
    }
    false
}

/// A literal: lexical form plus either a datatype or a language tag.
/// Language-tagged literals always carry the `rdf:langString` datatype.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain string literal. Per RDF 1.1 a simple literal is the same
    /// term as one typed `xsd:string`, so the datatype is always set.
    pub fn string(lexical: impl Into<String>) -> Literal {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::new_unchecked(vocab::XSD_STRING),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Literal {
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    /// Language tags compare case-insensitively, so they are stored lowercase.
    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Literal {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::new_unchecked(vocab::RDF_LANG_STRING),
            language: Some(tag.into().to_ascii_lowercase()),
        }
    }

    pub fn boolean(value: bool) -> Literal {
        Literal::typed(
            if value { "true" } else { "false" },
            Iri::new_unchecked(vocab::XSD_BOOLEAN),
        )
    }

    pub fn int(value: i32) -> Literal {
        Literal::typed(value.to_string(), Iri::new_unchecked(vocab::XSD_INT))
    }

    pub fn integer(value: i64) -> Literal {
        Literal::typed(value.to_string(), Iri::new_unchecked(vocab::XSD_INTEGER))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn is_plain_string(&self) -> bool {
        self.language.is_none() && self.datatype.as_str() == vocab::XSD_STRING
    }
}

/// An RDF term: IRI, blank node or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Term, FxError> {
        Ok(Term::Iri(Iri::new(value)?))
    }

    pub(crate) fn iri_unchecked(value: impl Into<String>) -> Term {
        Term::Iri(Iri::new_unchecked(value))
    }

    pub fn blank(label: impl Into<String>) -> Term {
        Term::Blank(label.into())
    }

    pub fn string(lexical: impl Into<String>) -> Term {
        Term::Literal(Literal::string(lexical))
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Term {
        Term::Literal(Literal::typed(lexical, datatype))
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    /// The string form used by `fx:entity` and friends: the IRI text for
    /// IRIs, the lexical form for literals.
    pub fn string_form(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri.as_str()),
            Term::Literal(lit) => Some(lit.lexical()),
            Term::Blank(_) => None,
        }
    }
}

/// A single RDF statement. Predicates are always IRIs and literals never
/// appear in subject position; `new` enforces both.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Triple {
        assert!(
            !subject.is_literal(),
            "literal in subject position: {subject:?}"
        );
        assert!(predicate.is_iri(), "non-IRI predicate: {predicate:?}");
        Triple {
            subject,
            predicate,
            object,
        }
    }
}

/// A set of triples. Inserting a duplicate is a no-op; iteration order is
/// insertion order, which keeps serializations stable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: IndexSet<Triple>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn extend_from(&mut self, other: &Graph) {
        for t in other.iter() {
            self.insert(t.clone());
        }
    }

    /// Subjects typed `fx:root`, in insertion order.
    pub fn roots(&self) -> Vec<&Term> {
        self.iter()
            .filter(|t| {
                t.predicate.as_iri().map(Iri::as_str) == Some(vocab::RDF_TYPE)
                    && t.object.as_iri().map(Iri::as_str) == Some(vocab::FX_ROOT)
            })
            .map(|t| &t.subject)
            .collect()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Graph {
        Graph {
            triples: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = indexmap::set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// A default graph plus zero or more named graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub default: Graph,
    pub named: BTreeMap<Iri, Graph>,
}

impl Dataset {
    pub fn new() -> Dataset {
        Dataset::default()
    }

    pub fn from_default(graph: Graph) -> Dataset {
        Dataset {
            default: graph,
            named: BTreeMap::new(),
        }
    }

    pub fn named_graph_mut(&mut self, name: Iri) -> &mut Graph {
        self.named.entry(name).or_default()
    }

    pub fn merge(&mut self, other: Dataset) {
        self.default.extend_from(&other.default);
        for (name, graph) in other.named {
            self.named_graph_mut(name).extend_from(&graph);
        }
    }
}
