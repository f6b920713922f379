//! The merged option map and the exactly-one-of source descriptor.

use indexmap::IndexMap;

use crate::diag;
use crate::error::FxError;

/// Option names with special meaning. Anything else is preserved but
/// reported as a warning diagnostic.
const KNOWN_OPTIONS: &[&str] = &[
    "location",
    "content",
    "command",
    "media-type",
    "charset",
    "namespace",
    "blank-nodes",
    "trim-strings",
    "null-string",
    "strategy",
    "slice",
    "csv.headers",
    "csv.delimiter",
    "json.path",
    "xml.path",
    "html.selector",
    "txt.regex",
    "txt.split",
    "http.method",
    "http.auth.user",
    "http.auth.password",
    // Accepted for compatibility, rejected when actually used.
    "metadata",
    "ondisk",
    "html.browser",
];

const KNOWN_PREFIXES: &[&str] = &["http.header.", "http.query."];

const BOOLEAN_OPTIONS: &[&str] = &[
    "blank-nodes",
    "trim-strings",
    "csv.headers",
    "slice",
    "metadata",
    "ondisk",
];

/// Where the bytes come from: exactly one of a location, inline content,
/// or a command whose stdout is consumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceSpec {
    Location(String),
    Content(String),
    Command(String),
}

impl SourceSpec {
    /// A short description used in error messages.
    pub fn describe(&self) -> String {
        match self {
            SourceSpec::Location(l) => format!("location {l}"),
            SourceSpec::Content(_) => "inline content".to_owned(),
            SourceSpec::Command(c) => format!("command `{c}`"),
        }
    }

    pub fn location(&self) -> Option<&str> {
        match self {
            SourceSpec::Location(l) => Some(l),
            _ => None,
        }
    }
}

/// An ordered option-name → value map. Names are case-insensitive and
/// normalized to lowercase; values are kept verbatim.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FacadeOptions {
    entries: IndexMap<String, String>,
}

impl FacadeOptions {
    pub fn new() -> FacadeOptions {
        FacadeOptions::default()
    }

    pub fn set(&mut self, name: &str, value: impl Into<String>) {
        let name = normalize_name(name);
        self.entries.insert(name, value.into());
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.entries.get(&normalize_name(name)).map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(&normalize_name(name))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose name starts with `prefix`, as (suffix, value) pairs
    /// in insertion order.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a str)> {
        self.entries.iter().filter_map(move |(k, v)| {
            k.strip_prefix(prefix).map(|suffix| (suffix, v.as_str()))
        })
    }

    pub fn get_bool(&self, name: &str, default: bool) -> Result<bool, FxError> {
        match self.get(name) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(other) => Err(FxError::InvalidConfig(format!(
                "option {name} accepts \"true\" or \"false\", got \"{other}\""
            ))),
        }
    }

    /// Union of both maps; on a name collision the `overlay` value wins.
    /// Conflicting source kinds across the two maps are an error.
    pub fn merge(&self, overlay: &FacadeOptions) -> Result<FacadeOptions, FxError> {
        let mut merged = self.clone();
        for (name, value) in overlay.iter() {
            merged.set(name, value);
        }
        merged.check_single_source()?;
        Ok(merged)
    }

    fn source_entries(&self) -> Vec<(&str, &str)> {
        ["location", "content", "command"]
            .iter()
            .filter_map(|name| self.get(name).map(|v| (*name, v)))
            .collect()
    }

    pub fn check_single_source(&self) -> Result<(), FxError> {
        let present = self.source_entries();
        if present.len() > 1 {
            let names: Vec<&str> = present.iter().map(|(n, _)| *n).collect();
            return Err(FxError::ConflictingSource(names.join(" and ")));
        }
        Ok(())
    }

    /// Derives the source descriptor. `Ok(None)` when no source option is
    /// present (callers decide whether that is an error yet).
    pub fn source_spec(&self) -> Result<Option<SourceSpec>, FxError> {
        self.check_single_source()?;
        if let Some(l) = self.get("location") {
            return Ok(Some(SourceSpec::Location(l.to_owned())));
        }
        if let Some(c) = self.get("content") {
            return Ok(Some(SourceSpec::Content(c.to_owned())));
        }
        if let Some(c) = self.get("command") {
            return Ok(Some(SourceSpec::Command(c.to_owned())));
        }
        Ok(None)
    }

    /// Checks option values and reports unknown names. Called once the
    /// full configuration for a source is assembled.
    pub fn validate(&self) -> Result<(), FxError> {
        for (name, value) in self.iter() {
            if BOOLEAN_OPTIONS.contains(&name) && value != "true" && value != "false" {
                return Err(FxError::InvalidConfig(format!(
                    "option {name} accepts \"true\" or \"false\", got \"{value}\""
                )));
            }
            if name == "strategy" && value != "0" && value != "1" {
                return Err(FxError::InvalidConfig(format!(
                    "option strategy accepts \"0\" or \"1\", got \"{value}\""
                )));
            }
            if !KNOWN_OPTIONS.contains(&name)
                && !KNOWN_PREFIXES.iter().any(|p| name.starts_with(p))
            {
                diag::warn(format!("unknown option '{name}' ignored"));
            }
        }
        Ok(())
    }

    // Resolved defaults for the shaping options.

    pub fn csv_headers(&self) -> Result<bool, FxError> {
        self.get_bool("csv.headers", false)
    }

    pub fn blank_nodes(&self) -> Result<bool, FxError> {
        self.get_bool("blank-nodes", true)
    }

    pub fn trim_strings(&self) -> Result<bool, FxError> {
        self.get_bool("trim-strings", false)
    }

    pub fn slice(&self) -> Result<bool, FxError> {
        self.get_bool("slice", false)
    }

    /// Triple-filtering is on by default (`strategy` = "1").
    pub fn filtering(&self) -> Result<bool, FxError> {
        match self.get("strategy") {
            None | Some("1") => Ok(true),
            Some("0") => Ok(false),
            Some(other) => Err(FxError::InvalidConfig(format!(
                "option strategy accepts \"0\" or \"1\", got \"{other}\""
            ))),
        }
    }

    pub fn charset(&self) -> &str {
        self.get("charset").unwrap_or("UTF-8")
    }
}

impl FromIterator<(String, String)> for FacadeOptions {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> FacadeOptions {
        let mut opts = FacadeOptions::new();
        for (name, value) in iter {
            opts.set(&name, value);
        }
        opts
    }
}

/// `http.query.param.X` is accepted as a spelling of `http.query.X`.
fn normalize_name(name: &str) -> String {
    let lower = name.to_ascii_lowercase();
    match lower.strip_prefix("http.query.param.") {
        Some(rest) => format!("http.query.{rest}"),
        None => lower,
    }
}
