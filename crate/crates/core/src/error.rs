use thiserror::Error;

/// Errors produced anywhere in the engine, from IRI parsing to query
/// evaluation. Each source-related variant carries enough context to
/// reproduce the failure (path, URL or command line).
#[derive(Debug, Error)]
pub enum FxError {
    #[error("invalid IRI <{0}>: missing scheme")]
    InvalidIri(String),

    #[error("container membership index must be >= 1")]
    InvalidMembershipIndex,

    #[error("{format} syntax error at {line}:{column}: {message}")]
    RdfSyntax {
        format: &'static str,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("query syntax error at {line}:{column}: {message}")]
    QuerySyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("conflicting sources: {0}")]
    ConflictingSource(String),

    #[error("no source given: one of location, content or command is required")]
    NoSource,

    #[error("file not found: {path}")]
    MissingFile { path: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("HTTP request to {url} failed with status {status}")]
    HttpStatus { url: String, status: u16 },

    #[error("HTTP request to {url} failed: {message}")]
    HttpTransport { url: String, message: String },

    #[error("unsupported URL scheme in {0}")]
    UnsupportedScheme(String),

    #[error("command failed with status {status}: {command}\n{stderr}")]
    CommandFailed {
        command: String,
        status: i32,
        stderr: String,
    },

    #[error("cannot spawn command {command}: {source}")]
    CommandSpawn {
        command: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{format} parse error in {origin}: {message}")]
    SourceSyntax {
        format: &'static str,
        origin: String,
        message: String,
    },

    #[error("unsupported feature: {0}")]
    Unsupported(String),

    #[error("SERVICE configuration never resolved, unbound: {0}")]
    UnresolvedService(String),

    #[error("while executing SERVICE <{iri}>: {source}")]
    Service {
        iri: String,
        #[source]
        source: Box<FxError>,
    },

    #[error("{0}")]
    Usage(String),
}

impl FxError {
    pub fn in_service(self, iri: &str) -> FxError {
        FxError::Service {
            iri: iri.to_owned(),
            source: Box::new(self),
        }
    }
}
