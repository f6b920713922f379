//! The container/slot/value emission abstraction all triplifiers build
//! through. It enforces the facade shape: one typed root per graph,
//! membership slots numbered contiguously from 1, string slots minted in
//! the configured namespace, and the trim/null/filter rules applied to
//! every emitted statement.

use std::collections::HashMap;
use std::sync::Arc;

use crate::config::{FacadeOptions, SourceSpec};
use crate::error::FxError;
use crate::rdf::{vocab, Graph, Iri, Literal, Term, Triple};
use crate::util::encode_local_name;

/// Drops generated statements that cannot contribute to the query.
pub type TripleFilter = Arc<dyn Fn(&Triple) -> bool + Send + Sync>;

/// A container node under construction: its term plus the slot path that
/// mints deterministic identifiers.
#[derive(Debug, Clone)]
pub struct Node {
    term: Term,
    path: String,
}

impl Node {
    pub fn term(&self) -> &Term {
        &self.term
    }
}

/// The identity string nodes are minted from: the location itself when
/// absolute, a `file:` form otherwise, and opaque URNs for inline
/// content and command output.
pub fn source_identity(origin: &SourceSpec) -> String {
    match origin {
        SourceSpec::Location(l) => {
            if l.contains(':') && Iri::new(l.clone()).is_ok() {
                l.clone()
            } else {
                format!("file:{l}")
            }
        }
        SourceSpec::Content(_) => "urn:fx:content".to_owned(),
        SourceSpec::Command(_) => "urn:fx:command".to_owned(),
    }
}

pub struct FacadeBuilder {
    graph: Graph,
    namespace: String,
    blank_nodes: bool,
    trim_strings: bool,
    null_string: Option<String>,
    filter: Option<TripleFilter>,
    source_id: String,
    session: String,
    counters: HashMap<String, usize>,
    used_labels: HashMap<String, usize>,
    root: Node,
}

impl FacadeBuilder {
    pub fn new(
        opts: &FacadeOptions,
        origin: &SourceSpec,
        session: &str,
        filter: Option<TripleFilter>,
    ) -> Result<FacadeBuilder, FxError> {
        let namespace = match opts.get("namespace") {
            Some(ns) => {
                Iri::new(ns.to_owned())?;
                ns.to_owned()
            }
            None => vocab::XYZ_NS.to_owned(),
        };
        let mut builder = FacadeBuilder {
            graph: Graph::new(),
            namespace,
            blank_nodes: opts.blank_nodes()?,
            trim_strings: opts.trim_strings()?,
            null_string: opts.get("null-string").map(str::to_owned),
            filter,
            source_id: source_identity(origin),
            session: session.to_owned(),
            counters: HashMap::new(),
            used_labels: HashMap::new(),
            root: Node {
                term: Term::blank("placeholder"),
                path: "/".to_owned(),
            },
        };
        builder.root = builder.mint_node("/");
        let root = builder.root.clone();
        builder.add_type(&root, Iri::new_unchecked(vocab::FX_ROOT));
        Ok(builder)
    }

    pub fn root(&self) -> Node {
        self.root.clone()
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    /// The IRI a string slot key mints in the configured namespace.
    pub fn key_iri(&self, key: &str) -> Iri {
        Iri::new_unchecked(format!("{}{}", self.namespace, encode_local_name(key)))
    }

    pub fn add_type(&mut self, node: &Node, ty: Iri) {
        self.emit(
            node.term.clone(),
            Iri::new_unchecked(vocab::RDF_TYPE),
            Term::Iri(ty),
        );
    }

    pub fn key_container(&mut self, parent: &Node, key: &str) -> Node {
        let predicate = self.key_iri(key);
        self.pred_container(parent, predicate, &encode_local_name(key))
    }

    pub fn key_value(&mut self, parent: &Node, key: &str, value: Literal) {
        let predicate = self.key_iri(key);
        self.emit(parent.term.clone(), predicate, Term::Literal(value));
    }

    /// A child container linked with an explicit predicate IRI (used when
    /// source namespaces are reused, e.g. XML).
    pub fn pred_container(&mut self, parent: &Node, predicate: Iri, segment: &str) -> Node {
        let child = self.mint_node(&child_path(&parent.path, segment));
        self.emit(
            parent.term.clone(),
            predicate,
            child.term.clone(),
        );
        child
    }

    pub fn pred_value(&mut self, parent: &Node, predicate: Iri, value: Literal) {
        self.emit(parent.term.clone(), predicate, Term::Literal(value));
    }

    /// Next free membership slot of `parent`, as a container.
    pub fn next_container(&mut self, parent: &Node) -> Node {
        let n = self.bump_counter(parent);
        self.container_at(parent, n)
    }

    /// Next free membership slot of `parent`, as a value.
    pub fn next_value(&mut self, parent: &Node, value: Literal) {
        let n = self.bump_counter(parent);
        self.value_at(parent, n, value);
    }

    /// Child container at an explicit membership index. Sliced execution
    /// places each unit at its global index this way; explicit indices do
    /// not advance the automatic counter.
    pub fn container_at(&mut self, parent: &Node, index: usize) -> Node {
        let predicate = vocab::membership(index).expect("index >= 1");
        let child = self.mint_node(&child_path(&parent.path, &format!("_{index}")));
        self.emit(parent.term.clone(), predicate, child.term.clone());
        child
    }

    pub fn value_at(&mut self, parent: &Node, index: usize, value: Literal) {
        let predicate = vocab::membership(index).expect("index >= 1");
        self.emit(parent.term.clone(), predicate, Term::Literal(value));
    }

    pub fn finish(self) -> Graph {
        self.graph
    }

    fn bump_counter(&mut self, parent: &Node) -> usize {
        let counter = self.counters.entry(parent.path.clone()).or_insert(0);
        *counter += 1;
        *counter
    }

    fn mint_node(&mut self, path: &str) -> Node {
        let term = if self.blank_nodes {
            let mut label = format!(
                "b{:x}",
                fnv64(&[&self.session, "\u{0}", &self.source_id, "\u{0}", path])
            );
            // Hash collisions would conflate containers; disambiguate.
            let seen = self.used_labels.entry(label.clone()).or_insert(0);
            *seen += 1;
            if *seen > 1 {
                label.push_str(&format!("c{seen}"));
            }
            Term::blank(label)
        } else {
            Term::iri_unchecked(format!("{}#{}", self.source_id, path))
        };
        Node {
            term,
            path: path.to_owned(),
        }
    }

    /// Every statement funnels through here: string trimming, the
    /// null-string drop rule, then the triple filter.
    fn emit(&mut self, subject: Term, predicate: Iri, object: Term) {
        let object = match object {
            Term::Literal(lit) => {
                let lit = if self.trim_strings && lit.is_plain_string() {
                    Literal::string(lit.lexical().trim())
                } else {
                    lit
                };
                if let Some(null) = &self.null_string {
                    if lit.lexical() == null {
                        return;
                    }
                }
                Term::Literal(lit)
            }
            other => other,
        };
        let triple = Triple::new(subject, Term::Iri(predicate), object);
        if let Some(filter) = &self.filter {
            if !filter(&triple) {
                return;
            }
        }
        self.graph.insert(triple);
    }
}

fn child_path(parent: &str, segment: &str) -> String {
    if parent.ends_with('/') {
        format!("{parent}{segment}")
    } else {
        format!("{parent}/{segment}")
    }
}

fn fnv64(parts: &[&str]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for part in parts {
        for byte in part.bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x100000001b3);
        }
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    fn content_origin() -> SourceSpec {
        SourceSpec::Content("test".into())
    }

    #[test]
    fn root_is_typed_once() {
        let b = FacadeBuilder::new(
            &FacadeOptions::new(),
            &content_origin(),
            "s",
            None,
        )
        .unwrap();
        let g = b.finish();
        assert_eq!(g.len(), 1);
        assert_eq!(g.roots().len(), 1);
    }

    #[test]
    fn membership_slots_are_contiguous() {
        let mut b =
            FacadeBuilder::new(&FacadeOptions::new(), &content_origin(), "s", None).unwrap();
        let root = b.root();
        b.next_value(&root, Literal::string("a"));
        let child = b.next_container(&root);
        b.next_value(&child, Literal::string("x"));
        b.next_value(&root, Literal::string("b"));
        let g = b.finish();
        let mut root_indices: Vec<usize> = g
            .iter()
            .filter(|t| t.subject == *root.term())
            .filter_map(|t| vocab::membership_index(t.predicate.as_iri().unwrap()))
            .collect();
        root_indices.sort();
        assert_eq!(root_indices, vec![1, 2, 3]);
    }

    #[test]
    fn null_string_drops_values() {
        let mut opts = FacadeOptions::new();
        opts.set("null-string", "N/A");
        let mut b = FacadeBuilder::new(&opts, &content_origin(), "s", None).unwrap();
        let root = b.root();
        b.key_value(&root, "a", Literal::string("N/A"));
        b.key_value(&root, "b", Literal::string("ok"));
        let g = b.finish();
        assert_eq!(g.len(), 2); // root type + b
        assert!(!g.iter().any(|t| match &t.object {
            Term::Literal(l) => l.lexical() == "N/A",
            _ => false,
        }));
    }

    #[test]
    fn trim_strings_applies_before_null_check() {
        let mut opts = FacadeOptions::new();
        opts.set("trim-strings", "true");
        opts.set("null-string", "");
        let mut b = FacadeBuilder::new(&opts, &content_origin(), "s", None).unwrap();
        let root = b.root();
        b.key_value(&root, "a", Literal::string("  padded  "));
        b.key_value(&root, "b", Literal::string("   "));
        let g = b.finish();
        let values: Vec<&str> = g
            .iter()
            .filter_map(|t| t.object.as_literal().map(|l| l.lexical()))
            .collect();
        assert_eq!(values, vec!["padded"]);
    }

    #[test]
    fn iri_minting_is_deterministic() {
        let mut opts = FacadeOptions::new();
        opts.set("blank-nodes", "false");
        let origin = SourceSpec::Location("./data.csv".into());
        let build = || {
            let mut b = FacadeBuilder::new(&opts, &origin, "s", None).unwrap();
            let root = b.root();
            let row = b.next_container(&root);
            b.key_value(&row, "title", Literal::string("x"));
            b.finish()
        };
        let g1 = build();
        let g2 = build();
        // Identical, not merely isomorphic.
        assert_eq!(g1, g2);
        assert!(g1.iter().all(|t| !t.subject.is_blank()));
        let minted: Vec<String> = g1
            .iter()
            .filter_map(|t| t.subject.as_iri().map(|i| i.as_str().to_owned()))
            .collect();
        assert!(minted.contains(&"file:./data.csv#/".to_owned()));
        assert!(minted.contains(&"file:./data.csv#/_1".to_owned()));
    }

    #[test]
    fn custom_namespace_replaces_xyz() {
        let mut opts = FacadeOptions::new();
        opts.set("namespace", "http://example.org/myns/");
        let mut b = FacadeBuilder::new(&opts, &content_origin(), "s", None).unwrap();
        let root = b.root();
        b.key_value(&root, "name", Literal::string("v"));
        let g = b.finish();
        assert!(g.iter().any(|t| t
            .predicate
            .as_iri()
            .is_some_and(|i| i.as_str() == "http://example.org/myns/name")));
    }

    #[test]
    fn filter_drops_non_matching() {
        let filter: TripleFilter = Arc::new(|t: &Triple| {
            t.predicate
                .as_iri()
                .is_some_and(|i| i.as_str().ends_with("keep"))
        });
        let mut b =
            FacadeBuilder::new(&FacadeOptions::new(), &content_origin(), "s", Some(filter))
                .unwrap();
        let root = b.root();
        b.key_value(&root, "keep", Literal::string("1"));
        b.key_value(&root, "drop", Literal::string("2"));
        let g = b.finish();
        assert_eq!(g.len(), 1);
    }
}
