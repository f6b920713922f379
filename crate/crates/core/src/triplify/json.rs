//! JSON: objects become containers with string slots, arrays become
//! containers with membership slots, scalars become typed literals.
//! Null values are omitted. An optional `json.path` expression selects
//! the nodes to triplify; matches become membership slots of the root.

use serde_json::Value;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{vocab, Graph, Iri, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::{FacadeBuilder, Node};
use crate::triplify::TriplifyContext;

pub fn triplify_json(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let value: Value = parse_json(&text, src)?;

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();

    match opts.get("json.path") {
        Some(path) => {
            let steps = parse_json_path(path)?;
            for matched in select(&value, &steps) {
                emit_as_next_child(&mut builder, &root, matched);
            }
        }
        None => emit_top_level(&mut builder, &root, &value),
    }
    Ok(builder.finish())
}

pub(crate) fn parse_json(text: &str, src: &ResolvedSource) -> Result<Value, FxError> {
    serde_json::from_str(text).map_err(|e| FxError::SourceSyntax {
        format: "JSON",
        origin: src.origin_label(),
        message: e.to_string(),
    })
}

/// The top-level value becomes the root container; a scalar top level
/// lands at `rdf:_1` of the root.
pub(crate) fn emit_top_level(builder: &mut FacadeBuilder, root: &Node, value: &Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                emit_slot(builder, root, key, v);
            }
        }
        Value::Array(items) => {
            for item in items {
                emit_as_next_child(builder, root, item);
            }
        }
        Value::Null => {}
        scalar => {
            if let Some(lit) = scalar_literal(scalar) {
                builder.next_value(root, lit);
            }
        }
    }
}

fn emit_slot(builder: &mut FacadeBuilder, parent: &Node, key: &str, value: &Value) {
    match value {
        Value::Null => {} // null fields are ignored
        Value::Object(_) | Value::Array(_) => {
            let child = builder.key_container(parent, key);
            emit_children(builder, &child, value);
        }
        scalar => {
            if let Some(lit) = scalar_literal(scalar) {
                builder.key_value(parent, key, lit);
            }
        }
    }
}

pub(crate) fn emit_as_next_child(builder: &mut FacadeBuilder, parent: &Node, value: &Value) {
    match value {
        Value::Null => {}
        Value::Object(_) | Value::Array(_) => {
            let child = builder.next_container(parent);
            emit_children(builder, &child, value);
        }
        scalar => {
            if let Some(lit) = scalar_literal(scalar) {
                builder.next_value(parent, lit);
            }
        }
    }
}

/// Like [`emit_as_next_child`] but at an explicit membership index, for
/// sliced execution where the global index must be preserved.
pub(crate) fn emit_as_child_at(
    builder: &mut FacadeBuilder,
    parent: &Node,
    index: usize,
    value: &Value,
) {
    match value {
        Value::Null => {}
        Value::Object(_) | Value::Array(_) => {
            let child = builder.container_at(parent, index);
            emit_children(builder, &child, value);
        }
        scalar => {
            if let Some(lit) = scalar_literal(scalar) {
                builder.value_at(parent, index, lit);
            }
        }
    }
}

fn emit_children(builder: &mut FacadeBuilder, container: &Node, value: &Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                emit_slot(builder, container, key, v);
            }
        }
        Value::Array(items) => {
            for item in items {
                emit_as_next_child(builder, container, item);
            }
        }
        _ => unreachable!("emit_children only called for objects and arrays"),
    }
}

/// Scalar mapping: strings are plain, booleans `xsd:boolean`, integers
/// `xsd:int` (or `xsd:integer` beyond 32 bits), everything else parsed
/// as a float becomes `xsd:float`.
pub(crate) fn scalar_literal(value: &Value) -> Option<Literal> {
    match value {
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
    }
}

// ---- json.path subset: $, .key, ..key, [n], [*] ----

#[derive(Debug, Clone, PartialEq)]
enum PathStep {
    Key(String),
    Index(usize),
    Wildcard,
    Descendant(String),
}

fn parse_json_path(path: &str) -> Result<Vec<PathStep>, FxError> {
    let bad = |msg: &str| FxError::InvalidConfig(format!("invalid json.path \"{path}\": {msg}"));
    let mut rest = path.trim();
    rest = rest.strip_prefix('$').unwrap_or(rest);
    let mut steps = Vec::new();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix("..") {
            let (name, tail) = read_name(after);
            if name.is_empty() {
                return Err(bad("'..' must be followed by a key"));
            }
            steps.push(PathStep::Descendant(name));
            rest = tail;
        } else if let Some(after) = rest.strip_prefix('.') {
            let (name, tail) = read_name(after);
            if name.is_empty() {
                return Err(bad("'.' must be followed by a key"));
            }
            steps.push(PathStep::Key(name));
            rest = tail;
        } else if let Some(after) = rest.strip_prefix('[') {
            let end = after.find(']').ok_or_else(|| bad("unclosed '['"))?;
            let inner = &after[..end];
            if inner == "*" {
                steps.push(PathStep::Wildcard);
            } else if let Some(quoted) = inner
                .strip_prefix('\'')
                .and_then(|s| s.strip_suffix('\''))
            {
                steps.push(PathStep::Key(quoted.to_owned()));
            } else {
                let n: usize = inner.parse().map_err(|_| bad("bad index"))?;
                steps.push(PathStep::Index(n));
            }
            rest = &after[end + 1..];
        } else {
            return Err(bad("unexpected characters"));
        }
    }
    Ok(steps)
}

fn read_name(s: &str) -> (String, &str) {
    let end = s
        .find(|c: char| c == '.' || c == '[')
        .unwrap_or(s.len());
    (s[..end].to_owned(), &s[end..])
}

fn select<'a>(value: &'a Value, steps: &[PathStep]) -> Vec<&'a Value> {
    let mut current = vec![value];
    for step in steps {
        let mut next = Vec::new();
        for v in current {
            match step {
                PathStep::Key(name) => {
                    if let Value::Object(map) = v {
                        if let Some(hit) = map.get(name) {
                            next.push(hit);
                        }
                    }
                }
                PathStep::Index(n) => {
                    if let Value::Array(items) = v {
                        if let Some(hit) = items.get(*n) {
                            next.push(hit);
                        }
                    }
                }
                PathStep::Wildcard => match v {
                    Value::Array(items) => next.extend(items.iter()),
                    Value::Object(map) => next.extend(map.values()),
                    _ => {}
                },
                PathStep::Descendant(name) => collect_descendants(v, name, &mut next),
            }
        }
        current = next;
    }
    current
}

fn collect_descendants<'a>(value: &'a Value, name: &str, out: &mut Vec<&'a Value>) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if key == name {
                    out.push(v);
                }
                collect_descendants(v, name, out);
            }
        }
        Value::Array(items) => {
            for item in items {
                collect_descendants(item, name, out);
            }
        }
        _ => {}
    }
}

/// Exposed for sliced execution: the values a `json.path` selects.
pub(crate) fn select_path<'a>(value: &'a Value, path: &str) -> Result<Vec<&'a Value>, FxError> {
    let steps = parse_json_path(path)?;
    Ok(select(value, &steps))
}
