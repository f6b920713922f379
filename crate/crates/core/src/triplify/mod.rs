//! Triplifiers: each maps a resolved byte stream onto the facade shape.
//! Dispatch is by media-type essence; anything unrecognized takes the
//! binary fallback.

pub mod builder;

mod bibtex;
mod binary;
mod csv;
mod files;
mod html;
pub(crate) mod json;
mod markdown;
mod text;
pub(crate) mod xml;
mod yaml;

pub(crate) use csv::{delimiter as csv_delimiter, emit_row as csv_emit_row, reader_for as csv_reader};

pub use bibtex::triplify_bibtex;
pub use binary::triplify_binary;
pub use builder::{FacadeBuilder, TripleFilter};
pub use csv::triplify_csv;
pub use files::{triplify_directory, triplify_tar, triplify_zip};
pub use html::triplify_html;
pub use json::triplify_json;
pub use markdown::triplify_markdown;
pub use text::triplify_text;
pub use xml::triplify_xml;
pub use yaml::triplify_yaml;

use crate::config::{media, FacadeOptions};
use crate::error::FxError;
use crate::rdf::Graph;
use crate::source::ResolvedSource;

/// Per-triplification context: the triple filter built from the query
/// (when filtering is on) and a session tag that keeps generated blank
/// labels distinct across facade graphs in one execution.
#[derive(Clone, Default)]
pub struct TriplifyContext {
    pub filter: Option<TripleFilter>,
    pub session: String,
}

impl TriplifyContext {
    pub fn with_session(session: impl Into<String>) -> TriplifyContext {
        TriplifyContext {
            filter: None,
            session: session.into(),
        }
    }
}

pub fn triplify(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    match src.media_essence().as_str() {
        media::CSV | "text/tab-separated-values" => csv::triplify_csv(src, opts, ctx),
        media::JSON | "text/json" => json::triplify_json(src, opts, ctx),
        media::XML | "text/xml" => xml::triplify_xml(src, opts, ctx),
        media::HTML | "application/xhtml+xml" => html::triplify_html(src, opts, ctx),
        media::YAML | "application/yaml" | "application/x-yaml" | "text/x-yaml" => {
            yaml::triplify_yaml(src, opts, ctx)
        }
        media::MARKDOWN => markdown::triplify_markdown(src, opts, ctx),
        media::BIBTEX | "text/x-bibtex" => bibtex::triplify_bibtex(src, opts, ctx),
        media::TEXT => text::triplify_text(src, opts, ctx),
        media::ZIP => files::triplify_zip(src, opts, ctx),
        media::TAR => files::triplify_tar(src, opts, ctx),
        media::DIRECTORY => files::triplify_directory(src, opts, ctx),
        _ => binary::triplify_binary(src, opts, ctx),
    }
}
