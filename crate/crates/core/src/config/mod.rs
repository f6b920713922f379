//! Configuration gathering: the `x-sparql-anything:` IRI scheme, inline
//! `fx:properties` triples, option merging and media-type guessing.

mod iri;
mod mediatype;
mod options;

pub use iri::{encode_service_iri, parse_service_iri, SERVICE_SCHEME};
pub use mediatype::{guess_media_type, media};
pub use options::{FacadeOptions, SourceSpec};
