//! Media-type guessing: the explicit `media-type` option wins, then the
//! file extension, then the binary fallback. Total and deterministic.

use std::path::Path;

use crate::config::options::{FacadeOptions, SourceSpec};

/// Media-type constants the dispatcher understands.
pub mod media {
    pub const CSV: &str = "text/csv";
    pub const JSON: &str = "application/json";
    pub const XML: &str = "application/xml";
    pub const HTML: &str = "text/html";
    pub const YAML: &str = "text/yaml";
    pub const MARKDOWN: &str = "text/markdown";
    pub const BIBTEX: &str = "application/x-bibtex";
    pub const TEXT: &str = "text/plain";
    pub const ZIP: &str = "application/zip";
    pub const TAR: &str = "application/x-tar";
    pub const DIRECTORY: &str = "inode/directory";
    pub const BINARY: &str = "application/octet-stream";
}

pub fn guess_media_type(spec: &SourceSpec, opts: &FacadeOptions) -> String {
    if let Some(mt) = opts.get("media-type") {
        return mt.to_owned();
    }
    let location = match spec {
        SourceSpec::Location(l) => l,
        // Content and commands carry no name to guess from.
        _ => return media::BINARY.to_owned(),
    };
    if location.ends_with('/') || Path::new(location).is_dir() {
        return media::DIRECTORY.to_owned();
    }
    // For URLs, the extension of the path part decides.
    let path = location
        .split(['?', '#'])
        .next()
        .unwrap_or(location);
    let ext = path.rsplit('.').next().unwrap_or("").to_ascii_lowercase();
    let guessed = match ext.as_str() {
        "csv" | "tsv" => media::CSV,
        "json" => media::JSON,
        "xml" => media::XML,
        "html" | "htm" => media::HTML,
        "yaml" | "yml" => media::YAML,
        "md" => media::MARKDOWN,
        "bib" => media::BIBTEX,
        "txt" => media::TEXT,
        "zip" => media::ZIP,
        "tar" => media::TAR,
        _ => media::BINARY,
    };
    guessed.to_owned()
}
