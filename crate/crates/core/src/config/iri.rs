//! The `x-sparql-anything:` IRI scheme: options as comma-separated
//! `key=value` pairs, a bare segment as the resource locator, `%2C` and
//! `%3D` as escapes for `,` and `=` inside values.

use crate::config::options::{FacadeOptions, SourceSpec};
use crate::error::FxError;
use crate::util::{decode_option_value, encode_option_value};

pub const SERVICE_SCHEME: &str = "x-sparql-anything:";

/// Parses a service IRI into its option map and, when a source option is
/// present, the source descriptor. An empty remainder is not an error
/// here; missing sources are reported at resolution time.
pub fn parse_service_iri(iri: &str) -> Result<(FacadeOptions, Option<SourceSpec>), FxError> {
    let remainder = iri
        .strip_prefix(SERVICE_SCHEME)
        .ok_or_else(|| FxError::InvalidConfig(format!("not a facade IRI: {iri}")))?;

    let mut options = FacadeOptions::new();
    if remainder.is_empty() {
        return Ok((options, None));
    }

    for segment in remainder.split(',') {
        match segment.split_once('=') {
            Some((key, value)) => {
                let key = key.trim();
                if key.is_empty() {
                    return Err(FxError::InvalidConfig(format!(
                        "empty option name in segment \"{segment}\""
                    )));
                }
                options.set(key, decode_option_value(value));
            }
            None => {
                // A minimal IRI only holds the resource locator.
                if options.contains("location")
                    || options.contains("content")
                    || options.contains("command")
                {
                    return Err(FxError::ConflictingSource(format!(
                        "bare locator \"{segment}\" after an explicit source"
                    )));
                }
                options.set("location", decode_option_value(segment));
            }
        }
    }

    let source = options.source_spec()?;
    Ok((options, source))
}

/// Re-encodes an option map as a service IRI. Inverse of
/// [`parse_service_iri`] up to segment order and name case.
pub fn encode_service_iri(options: &FacadeOptions) -> String {
    let mut out = String::from(SERVICE_SCHEME);
    let mut first = true;
    for (name, value) in options.iter() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(name);
        out.push('=');
        out.push_str(&encode_option_value(value));
    }
    out
}
