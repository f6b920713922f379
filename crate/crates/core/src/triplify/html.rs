//! HTML: parsed error-tolerantly (unclosed tags repaired by the parser),
//! then walked like XML — elements typed by tag name, attributes as
//! string slots, children in membership slots. An `html.selector` CSS
//! selector turns each matched element into a membership slot of the
//! root, in document order.

use scraper::{ElementRef, Html, Selector};

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{Graph, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::{FacadeBuilder, Node};
use crate::triplify::TriplifyContext;

pub fn triplify_html(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let document = Html::parse_document(&text);

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();

    match opts.get("html.selector") {
        Some(selector_text) => {
            let selector = Selector::parse(selector_text).map_err(|e| {
                FxError::InvalidConfig(format!(
                    "invalid html.selector \"{selector_text}\": {e}"
                ))
            })?;
            for matched in document.select(&selector) {
                let node = builder.next_container(&root);
                walk(&mut builder, &node, matched);
            }
        }
        None => {
            walk(&mut builder, &root, document.root_element());
        }
    }
    Ok(builder.finish())
}

fn walk(builder: &mut FacadeBuilder, node: &Node, element: ElementRef<'_>) {
    let ty = builder.key_iri(element.value().name());
    builder.add_type(node, ty);
    for (name, value) in element.value().attrs() {
        builder.key_value(node, name, Literal::string(value));
    }
    for child in element.children() {
        match child.value() {
            scraper::Node::Element(_) => {
                if let Some(el) = ElementRef::wrap(child) {
                    let child_node = builder.next_container(node);
                    walk(builder, &child_node, el);
                }
            }
            scraper::Node::Text(text) => {
                if !text.trim().is_empty() {
                    builder.next_value(node, Literal::string(text.to_string()));
                }
            }
            _ => {}
        }
    }
}
