//! Markdown: the document is a sequence of typed block containers
//! (Heading, Paragraph, List, ListItem, Code, Quote, ...) with inline
//! text runs as string values and inline constructs (links, emphasis,
//! code spans) as nested containers. Heading depth lands in `xyz:level`.

use pulldown_cmark::{CodeBlockKind, Event, HeadingLevel, Parser, Tag, TagEnd};

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{Graph, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::{FacadeBuilder, Node};
use crate::triplify::TriplifyContext;

pub fn triplify_markdown(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    let document_type = builder.key_iri("Document");
    builder.add_type(&root, document_type);

    // Stack of open containers, each with a pending inline-text buffer.
    let mut stack: Vec<(Node, String)> = vec![(root, String::new())];

    for event in Parser::new(&text) {
        match event {
            Event::Start(tag) => {
                flush(&mut builder, &mut stack);
                let parent = stack.last().expect("stack never empty").0.clone();
                let container = builder.next_container(&parent);
                let ty = builder.key_iri(block_type(&tag));
                builder.add_type(&container, ty);
                match &tag {
                    Tag::Heading { level, .. } => {
                        builder.key_value(
                            &container,
                            "level",
                            Literal::int(heading_depth(*level)),
                        );
                    }
                    Tag::Link { dest_url, .. } => {
                        builder.key_value(&container, "href", Literal::string(dest_url.as_ref()));
                    }
                    Tag::Image { dest_url, .. } => {
                        builder.key_value(&container, "src", Literal::string(dest_url.as_ref()));
                    }
                    Tag::CodeBlock(CodeBlockKind::Fenced(info)) if !info.is_empty() => {
                        builder.key_value(&container, "language", Literal::string(info.as_ref()));
                    }
                    Tag::List(Some(start)) => {
                        builder.key_value(&container, "start", Literal::string(start.to_string()));
                    }
                    _ => {}
                }
                stack.push((container, String::new()));
            }
            Event::End(TagEnd::Paragraph)
            | Event::End(TagEnd::Heading(_))
            | Event::End(TagEnd::BlockQuote(_))
            | Event::End(TagEnd::CodeBlock)
            | Event::End(TagEnd::List(_))
            | Event::End(TagEnd::Item)
            | Event::End(TagEnd::Emphasis)
            | Event::End(TagEnd::Strong)
            | Event::End(TagEnd::Link)
            | Event::End(TagEnd::Image)
            | Event::End(_) => {
                flush(&mut builder, &mut stack);
                if stack.len() > 1 {
                    stack.pop();
                }
            }
            Event::Text(t) => {
                stack.last_mut().expect("stack never empty").1.push_str(&t);
            }
            Event::SoftBreak => {
                stack.last_mut().expect("stack never empty").1.push(' ');
            }
            Event::HardBreak => {
                stack.last_mut().expect("stack never empty").1.push('\n');
            }
            Event::Code(code) => {
                flush(&mut builder, &mut stack);
                let parent = stack.last().expect("stack never empty").0.clone();
                let container = builder.next_container(&parent);
                let ty = builder.key_iri("Code");
                builder.add_type(&container, ty);
                builder.next_value(&container, Literal::string(code.as_ref()));
            }
            Event::Rule => {
                flush(&mut builder, &mut stack);
                let parent = stack.last().expect("stack never empty").0.clone();
                let container = builder.next_container(&parent);
                let ty = builder.key_iri("Rule");
                builder.add_type(&container, ty);
            }
            Event::Html(html) | Event::InlineHtml(html) => {
                // Raw markup degrades to text content.
                stack
                    .last_mut()
                    .expect("stack never empty")
                    .1
                    .push_str(&html);
            }
            _ => {}
        }
    }
    flush(&mut builder, &mut stack);
    Ok(builder.finish())
}

/// Emits the accumulated inline text of the innermost open container as
/// its next value. Code blocks keep their trailing newline trimmed.
fn flush(builder: &mut FacadeBuilder, stack: &mut [(Node, String)]) {
    let (node, buffer) = stack.last_mut().expect("stack never empty");
    if buffer.is_empty() {
        return;
    }
    let text = std::mem::take(buffer);
    let trimmed = text.strip_suffix('\n').unwrap_or(&text);
    if trimmed.is_empty() {
        return;
    }
    builder.next_value(node, Literal::string(trimmed));
}

fn block_type(tag: &Tag) -> &'static str {
    match tag {
        Tag::Paragraph => "Paragraph",
        Tag::Heading { .. } => "Heading",
        Tag::BlockQuote(_) => "Quote",
        Tag::CodeBlock(_) => "Code",
        Tag::List(_) => "List",
        Tag::Item => "ListItem",
        Tag::Emphasis => "Emphasis",
        Tag::Strong => "Strong",
        Tag::Link { .. } => "Link",
        Tag::Image { .. } => "Image",
        _ => "Paragraph",
    }
}

fn heading_depth(level: HeadingLevel) -> i32 {
    match level {
        HeadingLevel::H1 => 1,
        HeadingLevel::H2 => 2,
        HeadingLevel::H3 => 3,
        HeadingLevel::H4 => 4,
        HeadingLevel::H5 => 5,
        HeadingLevel::H6 => 6,
    }
}
