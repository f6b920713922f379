//! RDF value model, vocabulary, serialization and isomorphism testing.

mod iso;
mod model;
mod parse;
mod serialize;
pub mod vocab;

pub use iso::isomorphic;
pub use model::{Dataset, Graph, Iri, Literal, Term, Triple};
pub use parse::{parse_dataset, parse_graph};
pub use serialize::{serialize_dataset, serialize_graph, term_to_ntriples, RdfFormat};
