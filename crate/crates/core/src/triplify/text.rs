//! Plain text: the whole content in one literal, or tokenized with
//! `txt.split` (literal delimiter) or `txt.regex` (matches; capture
//! groups become group slots of a match container).

use regex::Regex;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{Graph, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::FacadeBuilder;
use crate::triplify::TriplifyContext;

pub fn triplify_text(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let split = opts.get("txt.split");
    let pattern = opts.get("txt.regex");
    if split.is_some() && pattern.is_some() {
        return Err(FxError::InvalidConfig(
            "txt.split and txt.regex cannot be combined".into(),
        ));
    }

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();

    if let Some(delimiter) = split {
        for token in text.split(delimiter) {
            builder.next_value(&root, Literal::string(token));
        }
    } else if let Some(pattern) = pattern {
        let regex = Regex::new(pattern).map_err(|e| {
            FxError::InvalidConfig(format!("invalid txt.regex \"{pattern}\": {e}"))
        })?;
        let has_groups = regex.captures_len() > 1;
        for captures in regex.captures_iter(&text) {
            if has_groups {
                let matched = builder.next_container(&root);
                for group in 1..regex.captures_len() {
                    if let Some(m) = captures.get(group) {
                        builder.value_at(&matched, group, Literal::string(m.as_str()));
                    }
                }
            } else {
                builder.next_value(&root, Literal::string(&captures[0]));
            }
        }
    } else {
        builder.next_value(&root, Literal::string(&text));
    }
    Ok(builder.finish())
}
