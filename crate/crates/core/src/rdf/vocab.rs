//! Well-known namespaces and the Facade-X vocabulary.

use crate::error::FxError;
use crate::rdf::model::Iri;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const FX_NS: &str = "http://sparql.xyz/facade-x/ns/";
pub const XYZ_NS: &str = "http://sparql.xyz/facade-x/data/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_INT: &str = "http://www.w3.org/2001/XMLSchema#int";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BASE64: &str = "http://www.w3.org/2001/XMLSchema#base64Binary";

/// The canonical root type. Serializers only ever emit the lowercase form.
pub const FX_ROOT: &str = "http://sparql.xyz/facade-x/ns/root";
pub const FX_PROPERTIES: &str = "http://sparql.xyz/facade-x/ns/properties";
pub const FX_ANY_SLOT: &str = "http://sparql.xyz/facade-x/ns/anySlot";

const MEMBERSHIP_PREFIX: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#_";

pub fn rdf_type() -> Iri {
    Iri::new_unchecked(RDF_TYPE)
}

pub fn fx_root() -> Iri {
    Iri::new_unchecked(FX_ROOT)
}

/// The container membership property `rdf:_n`. Indices start at 1.
pub fn membership(n: usize) -> Result<Iri, FxError> {
    if n < 1 {
        return Err(FxError::InvalidMembershipIndex);
    }
    Ok(Iri::new_unchecked(format!("{MEMBERSHIP_PREFIX}{n}")))
}

/// Inverse of [`membership`]: `Some(n)` iff the IRI is exactly `rdf:_n`
/// in canonical decimal form.
pub fn membership_index(iri: &Iri) -> Option<usize> {
    let digits = iri.as_str().strip_prefix(MEMBERSHIP_PREFIX)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    let n: usize = digits.parse().ok()?;
    if n >= 1 {
        Some(n)
    } else {
        None
    }
}
