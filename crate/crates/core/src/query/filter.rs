//! Triple-filtering: while the facade graph is materialized, any
//! statement that cannot unify with at least one triple pattern of the
//! SERVICE clause is dropped. Variables match anything, constants match
//! by equality, and the `fx:anySlot` predicate matches every container
//! membership property.

use std::sync::Arc;

use crate::query::algebra::{Element, GroupPattern, PatternTerm, TriplePattern};
use crate::rdf::{vocab, Term, Triple};
use crate::triplify::TripleFilter;

#[derive(Debug, Clone)]
enum Slot {
    Any,
    Const(Term),
    AnyMembership,
}

impl Slot {
    fn matches(&self, term: &Term) -> bool {
        match self {
            Slot::Any => true,
            Slot::Const(c) => c == term,
            Slot::AnyMembership => term
                .as_iri()
                .and_then(vocab::membership_index)
                .is_some(),
        }
    }
}

pub fn build_triple_filter(residual: &GroupPattern) -> TripleFilter {
    let mut shapes: Vec<(Slot, Slot, Slot)> = Vec::new();
    collect(residual, &mut shapes);
    Arc::new(move |t: &Triple| {
        shapes.iter().any(|(s, p, o)| {
            s.matches(&t.subject) && p.matches(&t.predicate) && o.matches(&t.object)
        })
    })
}

fn collect(group: &GroupPattern, shapes: &mut Vec<(Slot, Slot, Slot)>) {
    for element in &group.elements {
        match element {
            Element::Bgp(patterns) => {
                for p in patterns {
                    shapes.push(shape(p));
                }
            }
            Element::Group(g) | Element::Optional(g) => collect(g, shapes),
            Element::Union(branches) => {
                for b in branches {
                    collect(b, shapes);
                }
            }
            // Nested SERVICE patterns constrain their own facade.
            _ => {}
        }
    }
}

fn shape(pattern: &TriplePattern) -> (Slot, Slot, Slot) {
    let subject = position(&pattern.subject, false);
    let predicate = position(&pattern.predicate, true);
    let object = position(&pattern.object, false);
    (subject, predicate, object)
}

fn position(term: &PatternTerm, predicate: bool) -> Slot {
    match term {
        PatternTerm::Var(_) => Slot::Any,
        PatternTerm::Term(Term::Iri(iri))
            if predicate && iri.as_str() == vocab::FX_ANY_SLOT =>
        {
            Slot::AnyMembership
        }
        // Blank nodes in patterns behave as wildcards like variables.
        PatternTerm::Term(Term::Blank(_)) => Slot::Any,
        PatternTerm::Term(t) => Slot::Const(t.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::algebra::Var;
    use crate::rdf::Iri;

    fn xyz(local: &str) -> Term {
        Term::iri_unchecked(format!("{}{local}", vocab::XYZ_NS))
    }

    fn pattern(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> GroupPattern {
        GroupPattern {
            elements: vec![Element::Bgp(vec![TriplePattern {
                subject: s,
                predicate: p,
                object: o,
            }])],
        }
    }

    fn var(name: &str) -> PatternTerm {
        PatternTerm::Var(Var::named(name))
    }

    #[test]
    fn keeps_matching_predicate_drops_others() {
        let g = pattern(var("s"), PatternTerm::Term(xyz("id")), var("v"));
        let filter = build_triple_filter(&g);
        let keep = Triple::new(Term::blank("b"), xyz("id"), Term::string("1"));
        let drop = Triple::new(Term::blank("b"), xyz("title"), Term::string("x"));
        assert!(filter(&keep));
        assert!(!filter(&drop));
    }

    #[test]
    fn all_variables_keep_everything() {
        let g = pattern(var("s"), var("p"), var("o"));
        let filter = build_triple_filter(&g);
        let t = Triple::new(Term::blank("b"), xyz("anything"), Term::string("1"));
        assert!(filter(&t));
    }

    #[test]
    fn any_slot_keeps_membership_only() {
        let g = pattern(
            var("s"),
            PatternTerm::Term(Term::iri_unchecked(vocab::FX_ANY_SLOT)),
            var("o"),
        );
        let filter = build_triple_filter(&g);
        let member = Triple::new(
            Term::blank("b"),
            Term::Iri(vocab::membership(7).unwrap()),
            Term::string("x"),
        );
        let named = Triple::new(Term::blank("b"), xyz("name"), Term::string("x"));
        assert!(filter(&member));
        assert!(!filter(&named));
    }

    #[test]
    fn empty_residual_drops_everything() {
        let filter = build_triple_filter(&GroupPattern::default());
        let t = Triple::new(
            Term::blank("b"),
            Term::Iri(Iri::new_unchecked(vocab::RDF_TYPE)),
            Term::iri_unchecked(vocab::FX_ROOT),
        );
        assert!(!filter(&t));
    }

    #[test]
    fn patterns_inside_optional_count() {
        let inner = pattern(var("s"), PatternTerm::Term(xyz("id")), var("v"));
        let g = GroupPattern {
            elements: vec![Element::Optional(inner)],
        };
        let filter = build_triple_filter(&g);
        let t = Triple::new(Term::blank("b"), xyz("id"), Term::string("1"));
        assert!(filter(&t));
    }
}
