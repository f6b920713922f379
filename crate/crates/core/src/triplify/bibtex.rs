//! BibTeX: each entry is a typed container holding its citation key and
//! one string slot per field. Values may be brace- or quote-delimited;
//! string concatenation with `#` is not supported.

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{Graph, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::FacadeBuilder;
use crate::triplify::TriplifyContext;

struct BibEntry {
    entry_type: String,
    citation_key: String,
    fields: Vec<(String, String)>,
}

pub fn triplify_bibtex(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let entries = parse_entries(&text, src)?;

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    for entry in entries {
        let container = builder.next_container(&root);
        let ty = builder.key_iri(&entry.entry_type);
        builder.add_type(&container, ty);
        builder.key_value(&container, "citationKey", Literal::string(entry.citation_key));
        for (name, value) in entry.fields {
            builder.key_value(&container, &name, Literal::string(value));
        }
    }
    Ok(builder.finish())
}

fn parse_entries(text: &str, src: &ResolvedSource) -> Result<Vec<BibEntry>, FxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut entries = Vec::new();

    let err = |key: &str, message: &str| FxError::SourceSyntax {
        format: "BibTeX",
        origin: src.origin_label(),
        message: if key.is_empty() {
            message.to_owned()
        } else {
            format!("entry \"{key}\": {message}")
        },
    };

    while pos < chars.len() {
        if chars[pos] != '@' {
            pos += 1;
            continue;
        }
        pos += 1;
        let mut entry_type = String::new();
        while pos < chars.len() && chars[pos].is_ascii_alphabetic() {
            entry_type.push(chars[pos].to_ascii_lowercase());
            pos += 1;
        }
        if entry_type.eq_ignore_ascii_case("comment") {
            continue;
        }
        skip_ws(&chars, &mut pos);
        if chars.get(pos) != Some(&'{') {
            return Err(err("", "expected '{' after entry type"));
        }
        pos += 1;
        skip_ws(&chars, &mut pos);
        let mut citation_key = String::new();
        while pos < chars.len() && chars[pos] != ',' && chars[pos] != '}' {
            citation_key.push(chars[pos]);
            pos += 1;
        }
        let citation_key = citation_key.trim().to_owned();
        let mut fields = Vec::new();
        while chars.get(pos) == Some(&',') {
            pos += 1;
            skip_ws(&chars, &mut pos);
            if chars.get(pos) == Some(&'}') {
                break; // trailing comma
            }
            let mut name = String::new();
            while pos < chars.len() && chars[pos] != '=' && chars[pos] != '}' {
                name.push(chars[pos]);
                pos += 1;
            }
            if chars.get(pos) != Some(&'=') {
                return Err(err(&citation_key, "expected '=' in field"));
            }
            pos += 1;
            skip_ws(&chars, &mut pos);
            let value = read_value(&chars, &mut pos)
                .map_err(|m| err(&citation_key, &m))?;
            fields.push((name.trim().to_ascii_lowercase(), value));
            skip_ws(&chars, &mut pos);
        }
        if chars.get(pos) != Some(&'}') {
            return Err(err(&citation_key, "unbalanced braces"));
        }
        pos += 1;
        entries.push(BibEntry {
            entry_type,
            citation_key,
            fields,
        });
    }
    Ok(entries)
}

fn read_value(chars: &[char], pos: &mut usize) -> Result<String, String> {
    match chars.get(*pos) {
        Some('{') => {
            *pos += 1;
            let mut depth = 1;
            let mut value = String::new();
            while *pos < chars.len() {
                match chars[*pos] {
                    '{' => {
                        depth += 1;
                        value.push('{');
                    }
                    '}' => {
                        depth -= 1;
                        if depth == 0 {
                            *pos += 1;
                            return Ok(value);
                        }
                        value.push('}');
                    }
                    c => value.push(c),
                }
                *pos += 1;
            }
            Err("unbalanced braces".into())
        }
        Some('"') => {
            *pos += 1;
            let mut value = String::new();
            while *pos < chars.len() {
                match chars[*pos] {
                    '"' => {
                        *pos += 1;
                        return Ok(value);
                    }
                    c => value.push(c),
                }
                *pos += 1;
            }
            Err("unterminated quoted value".into())
        }
        Some(_) => {
            // Bare token: number or single word up to ',' or '}'.
            let mut value = String::new();
            while *pos < chars.len() && chars[*pos] != ',' && chars[*pos] != '}' {
                if chars[*pos] == '#' {
                    return Err("string concatenation with '#' is not supported".into());
                }
                value.push(chars[*pos]);
                *pos += 1;
            }
            Ok(value.trim().to_owned())
        }
        None => Err("unexpected end of entry".into()),
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}
