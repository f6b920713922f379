//! Source resolution: a [`SourceSpec`] becomes bytes plus an effective
//! media type, whatever the origin — local file, HTTP(S), inline content
//! or a subprocess.

mod command;
mod http;

pub use command::{run_command, tokenize};
pub use http::{build_http_request_plan, execute as execute_http, HttpMethod, HttpRequestPlan};

use std::path::Path;

use crate::config::{guess_media_type, FacadeOptions, SourceSpec};
use crate::error::FxError;

/// Restrictions on where bytes may come from. The endpoint hardening
/// flag turns off filesystem and command access.
#[derive(Debug, Clone, Copy)]
pub struct SourcePolicy {
    pub allow_local_files: bool,
    pub allow_commands: bool,
}

impl Default for SourcePolicy {
    fn default() -> SourcePolicy {
        SourcePolicy {
            allow_local_files: true,
            allow_commands: true,
        }
    }
}

impl SourcePolicy {
    pub fn no_local_files() -> SourcePolicy {
        SourcePolicy {
            allow_local_files: false,
            allow_commands: false,
        }
    }
}

/// The resolved bytes of one source. `media_type` is always set (the
/// guesser is total); directory sources carry no bytes, the triplifier
/// walks the path in `origin` instead.
#[derive(Debug)]
pub struct ResolvedSource {
    pub bytes: Vec<u8>,
    pub media_type: String,
    pub charset: String,
    pub origin: SourceSpec,
}

impl ResolvedSource {
    /// The media type without parameters, lowercased, for dispatch.
    pub fn media_essence(&self) -> String {
        self.media_type
            .split(';')
            .next()
            .unwrap_or("")
            .trim()
            .to_ascii_lowercase()
    }

    /// Charset from the media-type parameter, else the `charset` option,
    /// else UTF-8.
    pub fn effective_charset(&self) -> &str {
        self.media_type
            .split(';')
            .skip(1)
            .find_map(|p| {
                let (name, value) = p.split_once('=')?;
                if name.trim().eq_ignore_ascii_case("charset") {
                    Some(value.trim().trim_matches('"'))
                } else {
                    None
                }
            })
            .unwrap_or(&self.charset)
    }

    /// Decodes the byte stream according to the effective charset.
    pub fn decode_text(&self) -> Result<String, FxError> {
        decode_bytes(&self.bytes, self.effective_charset(), &self.origin)
    }

    /// A short origin description for error messages.
    pub fn origin_label(&self) -> String {
        self.origin.describe()
    }
}

pub fn decode_bytes(bytes: &[u8], charset: &str, origin: &SourceSpec) -> Result<String, FxError> {
    let encoding = encoding_rs::Encoding::for_label(charset.as_bytes()).ok_or_else(|| {
        FxError::InvalidConfig(format!("unknown charset \"{charset}\""))
    })?;
    let (text, _, had_errors) = encoding.decode(bytes);
    if had_errors {
        return Err(FxError::SourceSyntax {
            format: "text",
            origin: origin.describe(),
            message: format!("input is not valid {charset}"),
        });
    }
    Ok(text.into_owned())
}

/// Turns a source descriptor into bytes. Location resolves as a file
/// path or http(s) URL; content encodes the literal string; command
/// captures the subprocess stdout.
pub fn resolve(spec: &SourceSpec, opts: &FacadeOptions) -> Result<ResolvedSource, FxError> {
    resolve_with_policy(spec, opts, SourcePolicy::default())
}

pub fn resolve_with_policy(
    spec: &SourceSpec,
    opts: &FacadeOptions,
    policy: SourcePolicy,
) -> Result<ResolvedSource, FxError> {
    let media_type = guess_media_type(spec, opts);
    let mut charset = opts.charset().to_owned();

    let bytes = match spec {
        SourceSpec::Content(text) => {
            let encoding = encoding_rs::Encoding::for_label(charset.as_bytes())
                .ok_or_else(|| FxError::InvalidConfig(format!("unknown charset \"{charset}\"")))?;
            let (encoded, _, had_errors) = encoding.encode(text);
            if had_errors {
                return Err(FxError::InvalidConfig(format!(
                    "content cannot be encoded as {charset}"
                )));
            }
            encoded.into_owned()
        }
        SourceSpec::Command(cmd) => {
            if !policy.allow_commands {
                return Err(FxError::Unsupported(
                    "command sources are disabled on this endpoint".into(),
                ));
            }
            command::run_command(cmd)?.stdout
        }
        SourceSpec::Location(location) => {
            if location.starts_with("http://") || location.starts_with("https://") {
                let plan = http::build_http_request_plan(location, opts)?;
                let response = http::execute(&plan)?;
                // Response Content-Type wins, then the charset option,
                // then the UTF-8 default already in place.
                if let Some(cs) = response.charset {
                    charset = cs;
                }
                response.body
            } else {
                if let Some((scheme, _)) = location.split_once("://") {
                    if scheme != "file" {
                        return Err(FxError::UnsupportedScheme(location.clone()));
                    }
                }
                if !policy.allow_local_files {
                    return Err(FxError::Unsupported(
                        "file sources are disabled on this endpoint".into(),
                    ));
                }
                let path_str = location.strip_prefix("file://").unwrap_or(location);
                let path = Path::new(path_str);
                if media_type == crate::config::media::DIRECTORY {
                    if !path.is_dir() {
                        return Err(FxError::MissingFile {
                            path: path_str.to_owned(),
                        });
                    }
                    Vec::new()
                } else {
                    std::fs::read(path).map_err(|source| {
                        if source.kind() == std::io::ErrorKind::NotFound {
                            FxError::MissingFile {
                                path: path_str.to_owned(),
                            }
                        } else {
                            FxError::Io {
                                path: path_str.to_owned(),
                                source,
                            }
                        }
                    })?
                }
            }
        }
    };

    Ok(ResolvedSource {
        bytes,
        media_type,
        charset,
        origin: spec.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    #[test]
    fn content_bytes_are_exact() {
        let mut opts = FacadeOptions::new();
        opts.set("media-type", "text/csv");
        let spec = SourceSpec::Content("first,second,third".into());
        let src = resolve(&spec, &opts).unwrap();
        assert_eq!(src.bytes.len(), 18);
        assert_eq!(src.decode_text().unwrap(), "first,second,third");
        assert_eq!(src.media_essence(), "text/csv");
    }

    #[test]
    fn command_stdout_resolves() {
        let spec = SourceSpec::Command("echo first,second,third".into());
        let src = resolve(&spec, &FacadeOptions::new()).unwrap();
        assert_eq!(src.bytes, b"first,second,third\n");
    }

    #[test]
    fn missing_file_error_names_path() {
        let spec = SourceSpec::Location("./definitely/not/here.csv".into());
        let err = resolve(&spec, &FacadeOptions::new()).unwrap_err();
        match err {
            FxError::MissingFile { path } => assert!(path.contains("not/here.csv")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn local_file_reads_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.json");
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(b"{\"a\":1}").unwrap();
        let spec = SourceSpec::Location(path.to_string_lossy().into_owned());
        let src = resolve(&spec, &FacadeOptions::new()).unwrap();
        assert_eq!(src.bytes, b"{\"a\":1}");
        assert_eq!(src.media_essence(), "application/json");
    }

    #[test]
    fn unsupported_scheme_rejected() {
        let spec = SourceSpec::Location("ftp://host/file.csv".into());
        assert!(matches!(
            resolve(&spec, &FacadeOptions::new()),
            Err(FxError::UnsupportedScheme(_))
        ));
    }

    #[test]
    fn policy_blocks_files_and_commands() {
        let policy = SourcePolicy::no_local_files();
        let spec = SourceSpec::Location("./x.csv".into());
        assert!(matches!(
            resolve_with_policy(&spec, &FacadeOptions::new(), policy),
            Err(FxError::Unsupported(_))
        ));
        let spec = SourceSpec::Command("echo hi".into());
        assert!(matches!(
            resolve_with_policy(&spec, &FacadeOptions::new(), policy),
            Err(FxError::Unsupported(_))
        ));
        // Content is always allowed.
        let spec = SourceSpec::Content("x".into());
        assert!(resolve_with_policy(&spec, &FacadeOptions::new(), policy).is_ok());
    }

    #[test]
    fn media_params_carry_charset() {
        let mut opts = FacadeOptions::new();
        opts.set("media-type", "application/json; charset=UTF-8");
        let spec = SourceSpec::Content("{}".into());
        let src = resolve(&spec, &opts).unwrap();
        assert_eq!(src.media_essence(), "application/json");
        assert_eq!(src.effective_charset(), "UTF-8");
    }
}
