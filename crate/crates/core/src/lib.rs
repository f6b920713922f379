//! Query non-RDF sources (CSV, JSON, XML, HTML, YAML, Markdown, BibTeX,
//! text, binary, directories, archives) with a SPARQL subset, as if they
//! were RDF. Sources are mapped on demand onto the Facade-X shape — one
//! typed root container, string- or integer-labelled slots, literal
//! values — and queried through SERVICE clauses with the
//! `x-sparql-anything:` IRI scheme.

pub mod config;
pub mod endpoint;
pub mod error;
pub mod formats;
pub mod functions;
pub mod query;
pub mod rdf;
pub mod source;
pub mod triplify;

mod diag;
mod util;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use error::FxError;
pub use query::{Engine, QueryOutcome};
