//! YAML: mappings and sequences land exactly like JSON objects and
//! arrays, so documents expressible in both produce isomorphic graphs.
//! Custom type tags (`!Tag`) additionally type the container.

use serde_yaml::value::TaggedValue;
use serde_yaml::Value;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{vocab, Graph, Iri, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::{FacadeBuilder, Node};
use crate::triplify::TriplifyContext;

pub fn triplify_yaml(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let value: Value = if text.trim().is_empty() {
        Value::Null
    } else {
        serde_yaml::from_str(&text).map_err(|e| FxError::SourceSyntax {
            format: "YAML",
            origin: src.origin_label(),
            message: e.to_string(),
        })?
    };

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    emit_top_level(&mut builder, &root, &value)?;
    Ok(builder.finish())
}

fn emit_top_level(builder: &mut FacadeBuilder, root: &Node, value: &Value) -> Result<(), FxError> {
    match value {
        Value::Mapping(map) => {
            for (key, v) in map {
                emit_slot(builder, root, key, v)?;
            }
        }
        Value::Sequence(items) => {
            for item in items {
                emit_as_next_child(builder, root, item)?;
            }
        }
        Value::Tagged(tagged) => {
            apply_tag(builder, root, tagged)?;
        }
        Value::Null => {}
        scalar => {
            if let Some(lit) = scalar_literal(scalar)? {
                builder.next_value(root, lit);
            }
        }
    }
    Ok(())
}

fn emit_slot(
    builder: &mut FacadeBuilder,
    parent: &Node,
    key: &Value,
    value: &Value,
) -> Result<(), FxError> {
    let key = key_string(key)?;
    match value {
        Value::Null => {}
        Value::Mapping(_) | Value::Sequence(_) => {
            let child = builder.key_container(parent, &key);
            emit_children(builder, &child, value)?;
        }
        Value::Tagged(tagged) => {
            let child = builder.key_container(parent, &key);
            apply_tag(builder, &child, tagged)?;
        }
        scalar => {
            if let Some(lit) = scalar_literal(scalar)? {
                builder.key_value(parent, &key, lit);
            }
        }
    }
    Ok(())
}

fn emit_as_next_child(
    builder: &mut FacadeBuilder,
    parent: &Node,
    value: &Value,
) -> Result<(), FxError> {
    match value {
        Value::Null => {}
        Value::Mapping(_) | Value::Sequence(_) => {
            let child = builder.next_container(parent);
            emit_children(builder, &child, value)?;
        }
        Value::Tagged(tagged) => {
            let child = builder.next_container(parent);
            apply_tag(builder, &child, tagged)?;
        }
        scalar => {
            if let Some(lit) = scalar_literal(scalar)? {
                builder.next_value(parent, lit);
            }
        }
    }
    Ok(())
}

fn emit_children(
    builder: &mut FacadeBuilder,
    container: &Node,
    value: &Value,
) -> Result<(), FxError> {
    match value {
        Value::Mapping(map) => {
            for (key, v) in map {
                emit_slot(builder, container, key, v)?;
            }
        }
        Value::Sequence(items) => {
            for item in items {
                emit_as_next_child(builder, container, item)?;
            }
        }
        _ => unreachable!("emit_children only called for mappings and sequences"),
    }
    Ok(())
}

/// A `!Tag` value becomes a container typed `namespace:Tag`; the tagged
/// payload fills the container (a scalar payload lands at `rdf:_1`).
fn apply_tag(
    builder: &mut FacadeBuilder,
    container: &Node,
    tagged: &TaggedValue,
) -> Result<(), FxError> {
    let tag_name = tagged.tag.to_string();
    let tag_name = tag_name.trim_start_matches('!');
    let ty = builder.key_iri(tag_name);
    builder.add_type(container, ty);
    match &tagged.value {
        Value::Mapping(_) | Value::Sequence(_) => {
            emit_children(builder, container, &tagged.value)?
        }
        Value::Null => {}
        Value::Tagged(inner) => apply_tag(builder, container, inner)?,
        scalar => {
            if let Some(lit) = scalar_literal(scalar)? {
                builder.next_value(container, lit);
            }
        }
    }
    Ok(())
}

fn key_string(key: &Value) -> Result<String, FxError> {
    match key {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(FxError::Unsupported(format!(
            "YAML feature not supported: complex mapping key {other:?}"
        ))),
    }
}

fn scalar_literal(value: &Value) -> Result<Option<Literal>, FxError> {
    Ok(match value {
        Value::String(s) => Some(Literal::string(s)),
        Value::Bool(b) => Some(Literal::boolean(*b)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                if i >= i64::from(i32::MIN) && i <= i64::from(i32::MAX) {
                    Some(Literal::int(i as i32))
                } else {
                    Some(Literal::integer(i))
                }
            } else if let Some(u) = n.as_u64() {
                Some(Literal::typed(
                    u.to_string(),
                    Iri::new_unchecked(vocab::XSD_INTEGER),
                ))
            } else {
                Some(Literal::typed(
                    n.to_string(),
                    Iri::new_unchecked(vocab::XSD_FLOAT),
                ))
            }
        }
        _ => None,
    })
}
