//! XML: elements are containers typed by tag name, attributes are string
//! slots, child elements and text interleave in membership slots in
//! document order. Namespaces declared in the document are reused for
//! type and property IRIs; an `xml.path` child-step subset preselects
//! elements.

use quick_xml::events::Event;
use quick_xml::name::ResolveResult;
use quick_xml::reader::NsReader;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{Graph, Iri, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::{FacadeBuilder, Node};
use crate::triplify::TriplifyContext;

/// Element or attribute name: either plain (minted in the builder
/// namespace) or resolved against a declared XML namespace.
#[derive(Debug, Clone)]
pub(crate) enum XmlName {
    Plain(String),
    Resolved(String),
}

#[derive(Debug, Clone)]
pub(crate) struct XmlElement {
    pub name: XmlName,
    pub local: String,
    pub attrs: Vec<(XmlName, String)>,
    pub children: Vec<XmlNode>,
}

#[derive(Debug, Clone)]
pub(crate) enum XmlNode {
    Element(XmlElement),
    Text(String),
}

pub fn triplify_xml(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let document = parse_document(&text, src)?;

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();

    match opts.get("xml.path") {
        Some(path) => {
            let steps = parse_xml_path(path)?;
            for element in select(&document, &steps) {
                let node = builder.next_container(&root);
                walk(&mut builder, &node, element);
            }
        }
        None => {
            // The document element container is the facade root itself.
            walk(&mut builder, &root, &document);
        }
    }
    Ok(builder.finish())
}

pub(crate) fn parse_document(text: &str, src: &ResolvedSource) -> Result<XmlElement, FxError> {
    let err = |message: String| FxError::SourceSyntax {
        format: "XML",
        origin: src.origin_label(),
        message,
    };

    let mut reader = NsReader::from_str(text);
    let mut stack: Vec<XmlElement> = Vec::new();
    let mut document: Option<XmlElement> = None;

    loop {
        let (resolution, event) = reader
            .read_resolved_event()
            .map_err(|e| err(e.to_string()))?;
        // Own the namespace before `reader` is borrowed again below.
        let element_ns: Option<String> = match &resolution {
            ResolveResult::Bound(ns) => {
                Some(String::from_utf8_lossy(ns.as_ref()).into_owned())
            }
            _ => None,
        };
        match event {
            Event::Start(start) => {
                let element = build_element(&reader, element_ns, &start, &err)?;
                stack.push(element);
            }
            Event::Empty(start) => {
                let element = build_element(&reader, element_ns, &start, &err)?;
                attach(&mut stack, &mut document, element, &err)?;
            }
            Event::End(_) => {
                let element = stack
                    .pop()
                    .ok_or_else(|| err("unexpected closing tag".into()))?;
                attach(&mut stack, &mut document, element, &err)?;
            }
            Event::Text(t) => {
                let value = t.decode().map_err(|e| err(e.to_string()))?.into_owned();
                push_text(&mut stack, value);
            }
            Event::CData(c) => {
                let value = String::from_utf8_lossy(c.as_ref()).into_owned();
                push_text(&mut stack, value);
            }
            Event::GeneralRef(r) => {
                // Character and predefined entity references become text.
                let resolved = if let Some(c) =
                    r.resolve_char_ref().map_err(|e| err(e.to_string()))?
                {
                    c.to_string()
                } else {
                    let name = r.decode().map_err(|e| err(e.to_string()))?;
                    match quick_xml::escape::resolve_predefined_entity(&name) {
                        Some(text) => text.to_owned(),
                        None => return Err(err(format!("unknown entity &{name};"))),
                    }
                };
                push_text(&mut stack, resolved);
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !stack.is_empty() {
        return Err(err("unclosed element".into()));
    }
    document.ok_or_else(|| err("document has no root element".into()))
}

fn build_element(
    reader: &NsReader<&[u8]>,
    element_ns: Option<String>,
    start: &quick_xml::events::BytesStart,
    err: &impl Fn(String) -> FxError,
) -> Result<XmlElement, FxError> {
    let local = String::from_utf8_lossy(start.local_name().as_ref()).into_owned();
    let name = match element_ns {
        Some(ns) => XmlName::Resolved(format!("{ns}{local}")),
        None => XmlName::Plain(local.clone()),
    };
    let mut attrs = Vec::new();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| err(e.to_string()))?;
        // xmlns declarations shape resolution, they are not slots.
        let raw_key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        if raw_key == "xmlns" || raw_key.starts_with("xmlns:") {
            continue;
        }
        let (attr_res, attr_local) = reader.resolver().resolve_attribute(attr.key);
        let attr_local = String::from_utf8_lossy(attr_local.as_ref()).into_owned();
        let attr_name = match attr_res {
            ResolveResult::Bound(ns) => XmlName::Resolved(format!(
                "{}{}",
                String::from_utf8_lossy(ns.as_ref()),
                attr_local
            )),
            _ => XmlName::Plain(attr_local),
        };
        let value = attr
            .decoded_and_normalized_value(quick_xml::XmlVersion::Implicit1_0, reader.decoder())
            .map_err(|e| err(e.to_string()))?
            .into_owned();
        attrs.push((attr_name, value));
    }
    Ok(XmlElement {
        name,
        local,
        attrs,
        children: Vec::new(),
    })
}

fn attach(
    stack: &mut Vec<XmlElement>,
    document: &mut Option<XmlElement>,
    element: XmlElement,
    err: &impl Fn(String) -> FxError,
) -> Result<(), FxError> {
    match stack.last_mut() {
        Some(parent) => {
            parent.children.push(XmlNode::Element(element));
            Ok(())
        }
        None => {
            if document.is_some() {
                return Err(err("multiple document elements".into()));
            }
            *document = Some(element);
            Ok(())
        }
    }
}

/// Whitespace-only text between elements is markup layout, not data.
fn push_text(stack: &mut Vec<XmlElement>, value: String) {
    if value.trim().is_empty() {
        return;
    }
    if let Some(parent) = stack.last_mut() {
        // Merge adjacent text runs (entity references split them).
        if let Some(XmlNode::Text(prev)) = parent.children.last_mut() {
            prev.push_str(&value);
            return;
        }
        parent.children.push(XmlNode::Text(value));
    }
}

pub(crate) fn walk(builder: &mut FacadeBuilder, node: &Node, element: &XmlElement) {
    emit_shell(builder, node, element);
    for child in &element.children {
        match child {
            XmlNode::Element(el) => {
                let child_node = builder.next_container(node);
                walk(builder, &child_node, el);
            }
            XmlNode::Text(text) => builder.next_value(node, Literal::string(text)),
        }
    }
}

/// The element's own facts — type and attribute slots — without its
/// children. Sliced execution uses this for the shared document shell.
pub(crate) fn emit_shell(builder: &mut FacadeBuilder, node: &Node, element: &XmlElement) {
    let ty = name_iri(builder, &element.name);
    builder.add_type(node, ty);
    for (attr_name, value) in &element.attrs {
        match attr_name {
            XmlName::Plain(key) => builder.key_value(node, key, Literal::string(value)),
            XmlName::Resolved(iri) => builder.pred_value(
                node,
                Iri::new_unchecked(iri.clone()),
                Literal::string(value),
            ),
        }
    }
}

fn name_iri(builder: &FacadeBuilder, name: &XmlName) -> Iri {
    match name {
        XmlName::Plain(local) => builder.key_iri(local),
        XmlName::Resolved(iri) => Iri::new_unchecked(iri.clone()),
    }
}

// ---- xml.path subset: /a/b, //tag, * and [n] predicates ----

#[derive(Debug)]
struct XmlStep {
    descendant: bool,
    name: String, // "*" matches any local name
    index: Option<usize>,
}

fn parse_xml_path(path: &str) -> Result<Vec<XmlStep>, FxError> {
    let bad = |msg: &str| FxError::InvalidConfig(format!("invalid xml.path \"{path}\": {msg}"));
    if !path.starts_with('/') {
        return Err(bad("path must be absolute"));
    }
    let mut steps = Vec::new();
    let mut rest = path;
    while !rest.is_empty() {
        let descendant = if let Some(r) = rest.strip_prefix("//") {
            rest = r;
            true
        } else if let Some(r) = rest.strip_prefix('/') {
            rest = r;
            false
        } else {
            return Err(bad("expected '/'"));
        };
        let end = rest.find('/').unwrap_or(rest.len());
        let mut token = &rest[..end];
        rest = &rest[end..];
        if token.is_empty() {
            return Err(bad("empty step"));
        }
        let mut index = None;
        if let Some(open) = token.find('[') {
            let close = token.find(']').ok_or_else(|| bad("unclosed '['"))?;
            let n: usize = token[open + 1..close]
                .parse()
                .map_err(|_| bad("bad index predicate"))?;
            if n < 1 {
                return Err(bad("indices start at 1"));
            }
            index = Some(n);
            token = &token[..open];
        }
        if token.is_empty() {
            return Err(bad("step has no name"));
        }
        steps.push(XmlStep {
            descendant,
            name: token.to_owned(),
            index,
        });
    }
    Ok(steps)
}

fn select<'a>(document: &'a XmlElement, steps: &[XmlStep]) -> Vec<&'a XmlElement> {
    // Evaluation starts at a virtual node whose only child is the
    // document element, so `/a` addresses the document element itself.
    let mut current: Vec<Vec<&XmlElement>> = vec![vec![document]];
    let mut virtual_root = true;
    for step in steps {
        let mut next: Vec<Vec<&XmlElement>> = Vec::new();
        for context_group in &current {
            for context in context_group {
                let candidates: Vec<&XmlElement> = if step.descendant {
                    let mut out = Vec::new();
                    if virtual_root {
                        collect_all(context, true, &step.name, &mut out);
                    } else {
                        collect_all(context, false, &step.name, &mut out);
                    }
                    out
                } else if virtual_root {
                    if matches_name(context, &step.name) {
                        vec![*context]
                    } else {
                        Vec::new()
                    }
                } else {
                    child_elements(context)
                        .into_iter()
                        .filter(|el| matches_name(el, &step.name))
                        .collect()
                };
                let selected = match step.index {
                    Some(n) => candidates.get(n - 1).map(|el| vec![*el]).unwrap_or_default(),
                    None => candidates,
                };
                if !selected.is_empty() {
                    next.push(selected);
                }
            }
        }
        current = next;
        virtual_root = false;
    }
    current.into_iter().flatten().collect()
}

fn matches_name(element: &XmlElement, name: &str) -> bool {
    name == "*" || element.local == name
}

fn child_elements(element: &XmlElement) -> Vec<&XmlElement> {
    element
        .children
        .iter()
        .filter_map(|c| match c {
            XmlNode::Element(el) => Some(el),
            XmlNode::Text(_) => None,
        })
        .collect()
}

fn collect_all<'a>(
    element: &'a XmlElement,
    include_self: bool,
    name: &str,
    out: &mut Vec<&'a XmlElement>,
) {
    if include_self && matches_name(element, name) {
        out.push(element);
    }
    for child in child_elements(element) {
        collect_all(child, true, name, out);
    }
}
