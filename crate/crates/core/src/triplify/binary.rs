//! Binary fallback: the whole content as one base64 literal. Allows any
//! resource to be carried into a graph even when it cannot be queried.

use base64::Engine as _;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{vocab, Graph, Iri, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::FacadeBuilder;
use crate::triplify::TriplifyContext;

pub fn triplify_binary(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    let encoded = base64::engine::general_purpose::STANDARD.encode(&src.bytes);
    builder.next_value(
        &root,
        Literal::typed(encoded, Iri::new_unchecked(vocab::XSD_BASE64)),
    );
    Ok(builder.finish())
}
