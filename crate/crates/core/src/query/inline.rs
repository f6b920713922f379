//! Inline configuration: triples with subject `fx:properties` inside a
//! SERVICE pattern carry options. They are stripped from the pattern;
//! what remains (the residual) is what gets matched against the facade
//! graph and drives triple-filtering.

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::query::algebra::{Element, GroupPattern, PatternTerm, TriplePattern, Var};
use crate::rdf::{vocab, Term};

#[derive(Debug, Clone)]
pub struct InlineConfig {
    pub fixed: FacadeOptions,
    /// Options whose values come from variables bound at execution time.
    pub variable_bound: Vec<(String, Var)>,
    pub residual: GroupPattern,
}

pub fn extract_inline_properties(pattern: &GroupPattern) -> Result<InlineConfig, FxError> {
    let mut fixed = FacadeOptions::new();
    let mut variable_bound = Vec::new();
    let residual = walk_group(pattern, &mut fixed, &mut variable_bound)?;
    for (name, _) in &variable_bound {
        if fixed.contains(name) {
            return Err(FxError::InvalidConfig(format!(
                "option {name} given both as a constant and as a variable"
            )));
        }
    }
    Ok(InlineConfig {
        fixed,
        variable_bound,
        residual,
    })
}

fn walk_group(
    group: &GroupPattern,
    fixed: &mut FacadeOptions,
    variable_bound: &mut Vec<(String, Var)>,
) -> Result<GroupPattern, FxError> {
    let mut elements = Vec::with_capacity(group.elements.len());
    for element in &group.elements {
        match element {
            Element::Bgp(patterns) => {
                let mut kept = Vec::new();
                for p in patterns {
                    if is_properties_subject(p) {
                        consume_config_triple(p, fixed, variable_bound)?;
                    } else {
                        kept.push(p.clone());
                    }
                }
                if !kept.is_empty() {
                    elements.push(Element::Bgp(kept));
                }
            }
            Element::Group(g) => {
                elements.push(Element::Group(walk_group(g, fixed, variable_bound)?));
            }
            Element::Optional(g) => {
                elements.push(Element::Optional(walk_group(g, fixed, variable_bound)?));
            }
            Element::Union(branches) => {
                let mut walked = Vec::with_capacity(branches.len());
                for b in branches {
                    walked.push(walk_group(b, fixed, variable_bound)?);
                }
                elements.push(Element::Union(walked));
            }
            // A nested SERVICE owns its own fx:properties.
            other => elements.push(other.clone()),
        }
    }
    Ok(GroupPattern { elements })
}

fn is_properties_subject(pattern: &TriplePattern) -> bool {
    matches!(
        &pattern.subject,
        PatternTerm::Term(Term::Iri(iri)) if iri.as_str() == vocab::FX_PROPERTIES
    )
}

fn consume_config_triple(
    pattern: &TriplePattern,
    fixed: &mut FacadeOptions,
    variable_bound: &mut Vec<(String, Var)>,
) -> Result<(), FxError> {
    let PatternTerm::Term(Term::Iri(predicate)) = &pattern.predicate else {
        return Err(FxError::InvalidConfig(
            "fx:properties options need a constant fx:-prefixed predicate".into(),
        ));
    };
    let Some(name) = predicate.as_str().strip_prefix(vocab::FX_NS) else {
        return Err(FxError::InvalidConfig(format!(
            "option predicate <{}> is outside the fx: namespace",
            predicate.as_str()
        )));
    };
    match &pattern.object {
        PatternTerm::Term(Term::Literal(lit)) => {
            fixed.set(name, lit.lexical());
        }
        PatternTerm::Term(Term::Iri(iri)) => {
            fixed.set(name, iri.as_str());
        }
        PatternTerm::Term(Term::Blank(_)) => {
            return Err(FxError::InvalidConfig(format!(
                "option {name} cannot take a blank node value"
            )))
        }
        PatternTerm::Var(v) => {
            variable_bound.push((name.to_ascii_lowercase(), v.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parser::parse_query;

    fn service_pattern(body: &str) -> GroupPattern {
        let text = format!(
            "PREFIX fx: <http://sparql.xyz/facade-x/ns/>\n\
             PREFIX xyz: <http://sparql.xyz/facade-x/data/>\n\
             SELECT * {{ SERVICE <x-sparql-anything:> {{ {body} }} }}"
        );
        let q = parse_query(&text).unwrap();
        match &q.pattern.elements[0] {
            Element::Service { pattern, .. } => pattern.clone(),
            other => panic!("unexpected element {other:?}"),
        }
    }

    #[test]
    fn location_option_extracts_and_empties_residual() {
        let pattern = service_pattern(r#"fx:properties fx:location "./my-file.csv" ."#);
        let inline = extract_inline_properties(&pattern).unwrap();
        assert_eq!(inline.fixed.get("location"), Some("./my-file.csv"));
        assert!(inline.variable_bound.is_empty());
        assert!(inline.residual.elements.is_empty());
    }

    #[test]
    fn variable_bound_content() {
        let pattern = service_pattern(
            r#"fx:properties fx:content ?data ; fx:media-type "text/csv" . ?s ?p ?o ."#,
        );
        let inline = extract_inline_properties(&pattern).unwrap();
        assert_eq!(inline.fixed.get("media-type"), Some("text/csv"));
        assert_eq!(inline.variable_bound.len(), 1);
        assert_eq!(inline.variable_bound[0].0, "content");
        // The data pattern stays.
        assert_eq!(inline.residual.elements.len(), 1);
    }

    #[test]
    fn pattern_without_properties_is_untouched() {
        let pattern = service_pattern("?s ?p ?o .");
        let inline = extract_inline_properties(&pattern).unwrap();
        assert!(inline.fixed.is_empty());
        assert_eq!(inline.residual, pattern);
    }

    #[test]
    fn non_fx_predicate_is_invalid() {
        let pattern = service_pattern(r#"fx:properties xyz:location "./f.csv" ."#);
        let err = extract_inline_properties(&pattern).unwrap_err();
        assert!(matches!(err, FxError::InvalidConfig(_)));
    }

    #[test]
    fn options_inside_nested_groups_are_found() {
        let pattern =
            service_pattern(r#"{ fx:properties fx:location "./x.json" . ?s ?p ?o }"#);
        let inline = extract_inline_properties(&pattern).unwrap();
        assert_eq!(inline.fixed.get("location"), Some("./x.json"));
    }
}
