//! The custom-function registry: node constructors (`fx:entity`,
//! `fx:literal`), membership navigation (`fx:next`, `fx:prev`,
//! `fx:before`, `fx:after`) and the `fx:anySlot` magic property.

use std::collections::HashMap;
use std::sync::Arc;

use crate::rdf::{vocab, Graph, Literal, Term};

/// An n-ary function over terms. Errors drop into SPARQL expression
/// error handling (the variable stays unbound, filters reject the row).
pub type CustomFn = Arc<dyn Fn(&[Term]) -> Result<Term, String> + Send + Sync>;

/// A predicate whose matches are computed rather than looked up: given
/// the subject/object constraints (bound values or `None`), returns the
/// (subject, object) pairs that hold in the graph.
pub type MagicProperty =
    Arc<dyn Fn(Option<&Term>, Option<&Term>, &Graph) -> Vec<(Term, Term)> + Send + Sync>;

#[derive(Clone)]
pub struct FunctionRegistry {
    functions: HashMap<String, CustomFn>,
    magic: HashMap<String, MagicProperty>,
}

impl FunctionRegistry {
    pub fn empty() -> FunctionRegistry {
        FunctionRegistry {
            functions: HashMap::new(),
            magic: HashMap::new(),
        }
    }

    pub fn register(&mut self, iri: impl Into<String>, f: CustomFn) {
        self.functions.insert(iri.into(), f);
    }

    pub fn register_magic(&mut self, iri: impl Into<String>, m: MagicProperty) {
        self.magic.insert(iri.into(), m);
    }

    pub fn function(&self, iri: &str) -> Option<&CustomFn> {
        self.functions.get(iri)
    }

    pub fn magic(&self, iri: &str) -> Option<&MagicProperty> {
        self.magic.get(iri)
    }
}

impl Default for FunctionRegistry {
    fn default() -> FunctionRegistry {
        let mut registry = FunctionRegistry::empty();
        registry.register(format!("{}entity", vocab::FX_NS), Arc::new(fx_entity));
        registry.register(format!("{}literal", vocab::FX_NS), Arc::new(fx_literal));
        registry.register(format!("{}next", vocab::FX_NS), Arc::new(fx_next));
        registry.register(format!("{}prev", vocab::FX_NS), Arc::new(fx_prev));
        registry.register(format!("{}before", vocab::FX_NS), Arc::new(fx_before));
        registry.register(format!("{}after", vocab::FX_NS), Arc::new(fx_after));
        registry.register_magic(vocab::FX_ANY_SLOT, Arc::new(any_slot_match));
        registry
    }
}

/// `fx:entity(a, b, ...)`: the IRI whose text is the concatenation of
/// each argument's string form (IRI text or literal lexical form).
fn fx_entity(args: &[Term]) -> Result<Term, String> {
    if args.is_empty() {
        return Err("fx:entity needs at least one argument".into());
    }
    let mut out = String::new();
    for arg in args {
        match arg.string_form() {
            Some(s) => out.push_str(s),
            None => return Err("fx:entity arguments must be IRIs or literals".into()),
        }
    }
    Term::iri(out).map_err(|e| e.to_string())
}

/// `fx:literal(lexical, spec)`: a typed literal when `spec` is a
/// datatype IRI, a language-tagged one when it is a plain string.
fn fx_literal(args: &[Term]) -> Result<Term, String> {
    let [lexical, spec] = args else {
        return Err("fx:literal takes exactly two arguments".into());
    };
    let lexical = match lexical {
        Term::Literal(l) => l.lexical().to_owned(),
        _ => return Err("fx:literal lexical argument must be a literal".into()),
    };
    match spec {
        Term::Iri(datatype) => {
            if datatype.as_str() == vocab::XSD_STRING {
                Ok(Term::string(lexical))
            } else {
                Ok(Term::Literal(Literal::typed(lexical, datatype.clone())))
            }
        }
        Term::Literal(tag) if tag.is_plain_string() => {
            let tag = tag.lexical();
            if tag.is_empty() || !tag.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-') {
                return Err(format!("invalid language tag \"{tag}\""));
            }
            Ok(Term::Literal(Literal::lang(lexical, tag)))
        }
        _ => Err("fx:literal spec must be a datatype IRI or a language tag".into()),
    }
}

fn membership_arg(term: &Term, function: &str) -> Result<usize, String> {
    term.as_iri()
        .and_then(vocab::membership_index)
        .ok_or_else(|| format!("{function} expects a container membership property"))
}

fn fx_next(args: &[Term]) -> Result<Term, String> {
    let [p] = args else {
        return Err("fx:next takes one argument".into());
    };
    let n = membership_arg(p, "fx:next")?;
    Ok(Term::Iri(vocab::membership(n + 1).expect("n + 1 >= 1")))
}

fn fx_prev(args: &[Term]) -> Result<Term, String> {
    let [p] = args else {
        return Err("fx:prev takes one argument".into());
    };
    let n = membership_arg(p, "fx:prev")?;
    if n < 2 {
        return Err("fx:prev: rdf:_1 has no predecessor".into());
    }
    Ok(Term::Iri(vocab::membership(n - 1).expect("n - 1 >= 1")))
}

fn fx_before(args: &[Term]) -> Result<Term, String> {
    let [a, b] = args else {
        return Err("fx:before takes two arguments".into());
    };
    let i = membership_arg(a, "fx:before")?;
    let j = membership_arg(b, "fx:before")?;
    Ok(Term::Literal(Literal::boolean(i < j)))
}

fn fx_after(args: &[Term]) -> Result<Term, String> {
    let [a, b] = args else {
        return Err("fx:after takes two arguments".into());
    };
    let i = membership_arg(a, "fx:after")?;
    let j = membership_arg(b, "fx:after")?;
    Ok(Term::Literal(Literal::boolean(i > j)))
}

/// `fx:anySlot`: matches ⟨s, rdf:_n, o⟩ for every n, honoring whatever
/// subject/object constraints the pattern brings.
fn any_slot_match(
    subject: Option<&Term>,
    object: Option<&Term>,
    graph: &Graph,
) -> Vec<(Term, Term)> {
    graph
        .iter()
        .filter(|t| {
            t.predicate
                .as_iri()
                .and_then(vocab::membership_index)
                .is_some()
        })
        .filter(|t| subject.is_none_or(|s| *s == t.subject))
        .filter(|t| object.is_none_or(|o| *o == t.object))
        .map(|t| (t.subject.clone(), t.object.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Iri, Triple};

    fn iri(s: &str) -> Term {
        Term::iri_unchecked(s)
    }

    #[test]
    fn entity_concatenates_string_forms() {
        let result = fx_entity(&[
            iri("http://sparql.xyz/example/tate/"),
            Term::string("artwork-"),
            Term::string("12"),
        ])
        .unwrap();
        assert_eq!(
            result.as_iri().unwrap().as_str(),
            "http://sparql.xyz/example/tate/artwork-12"
        );
    }

    #[test]
    fn entity_identity_on_single_iri() {
        let result = fx_entity(&[iri("http://x/y")]).unwrap();
        assert_eq!(result, iri("http://x/y"));
    }

    #[test]
    fn entity_uses_lexical_form_of_typed_literals() {
        let result = fx_entity(&[
            iri("http://e/"),
            Term::typed("7", Iri::new_unchecked(vocab::XSD_INT)),
        ])
        .unwrap();
        assert_eq!(result.as_iri().unwrap().as_str(), "http://e/7");
    }

    #[test]
    fn entity_rejects_empty_args() {
        assert!(fx_entity(&[]).is_err());
    }

    #[test]
    fn literal_constructor_branches() {
        let typed = fx_literal(&[
            Term::string("5"),
            iri(vocab::XSD_INT),
        ])
        .unwrap();
        assert_eq!(
            typed.as_literal().unwrap().datatype().as_str(),
            vocab::XSD_INT
        );

        let tagged = fx_literal(&[Term::string("x"), Term::string("en")]).unwrap();
        assert_eq!(tagged.as_literal().unwrap().language(), Some("en"));

        // xsd:string collapses to a plain literal.
        let plain = fx_literal(&[Term::string("y"), iri(vocab::XSD_STRING)]).unwrap();
        assert_eq!(plain, Term::string("y"));
    }

    #[test]
    fn membership_navigation() {
        let one = Term::Iri(vocab::membership(1).unwrap());
        let two = Term::Iri(vocab::membership(2).unwrap());
        let three = Term::Iri(vocab::membership(3).unwrap());
        let five = Term::Iri(vocab::membership(5).unwrap());

        assert_eq!(fx_next(&[one.clone()]).unwrap(), two);
        assert_eq!(fx_prev(&[two.clone()]).unwrap(), one);
        assert!(fx_prev(&[one.clone()]).is_err());
        assert_eq!(
            fx_before(&[two.clone(), two.clone()]).unwrap(),
            Term::Literal(Literal::boolean(false))
        );
        assert_eq!(
            fx_after(&[five, three]).unwrap(),
            Term::Literal(Literal::boolean(true))
        );
        assert!(fx_next(&[iri("http://not/membership")]).is_err());
    }

    #[test]
    fn prev_of_next_is_identity() {
        for n in 1..20usize {
            let p = Term::Iri(vocab::membership(n).unwrap());
            let next = fx_next(&[p.clone()]).unwrap();
            assert_eq!(fx_prev(&[next]).unwrap(), p);
        }
    }

    #[test]
    fn before_after_equal_trichotomy() {
        for i in 1..6usize {
            for j in 1..6usize {
                let a = Term::Iri(vocab::membership(i).unwrap());
                let b = Term::Iri(vocab::membership(j).unwrap());
                let before = fx_before(&[a.clone(), b.clone()]).unwrap()
                    == Term::Literal(Literal::boolean(true));
                let after = fx_after(&[a, b]).unwrap() == Term::Literal(Literal::boolean(true));
                let equal = i == j;
                assert_eq!(
                    1,
                    usize::from(before) + usize::from(after) + usize::from(equal)
                );
            }
        }
    }

    #[test]
    fn any_slot_scan() {
        let container = Term::blank("places");
        let mut g = Graph::new();
        g.insert(Triple::new(
            container.clone(),
            Term::Iri(vocab::membership(1).unwrap()),
            Term::string("Ukrayina"),
        ));
        g.insert(Triple::new(
            container.clone(),
            Term::Iri(vocab::membership(2).unwrap()),
            Term::string("Moskov"),
        ));
        g.insert(Triple::new(
            container.clone(),
            Term::iri_unchecked("http://sparql.xyz/facade-x/data/name"),
            Term::string("not a slot"),
        ));

        let hits = any_slot_match(Some(&container), None, &g);
        assert_eq!(hits.len(), 2);

        let none = any_slot_match(Some(&Term::blank("other")), None, &g);
        assert!(none.is_empty());

        // Both ends bound and present: one hit.
        let exact = any_slot_match(Some(&container), Some(&Term::string("Moskov")), &g);
        assert_eq!(exact.len(), 1);
    }
}
