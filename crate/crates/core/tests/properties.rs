//! Property tests for the RDF core and configuration grammar.

use proptest::prelude::*;

use fx_core::config::{encode_service_iri, parse_service_iri, FacadeOptions};
use fx_core::rdf::{
    isomorphic, parse_dataset, parse_graph, serialize_graph, vocab, Graph, Iri, Literal,
    RdfFormat, Term, Triple,
};

fn arb_iri_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z]{1,6}".prop_map(|s| Term::iri("http://example.org/".to_owned() + &s).unwrap()),
        "[a-z]{1,4}".prop_map(|s| {
            Term::iri(format!("{}{s}", vocab::XYZ_NS)).unwrap()
        }),
        (1usize..20).prop_map(|n| Term::Iri(vocab::membership(n).unwrap())),
        Just(Term::iri(vocab::FX_ROOT).unwrap()),
        Just(Term::iri(vocab::RDF_TYPE).unwrap()),
    ]
}

fn arb_blank() -> impl Strategy<Value = Term> {
    "[a-z][a-z0-9]{0,4}".prop_map(Term::blank)
}

fn arb_literal() -> impl Strategy<Value = Term> {
    let datatypes = prop_oneof![
        Just(vocab::XSD_INT),
        Just(vocab::XSD_INTEGER),
        Just(vocab::XSD_FLOAT),
        Just(vocab::XSD_BOOLEAN),
        Just(vocab::XSD_BASE64),
    ];
    prop_oneof![
        // Arbitrary unicode incl. quotes, newlines, control chars.
        any::<String>().prop_map(Term::string),
        (any::<String>(), datatypes).prop_map(|(lex, dt)| {
            Term::Literal(Literal::typed(lex, Iri::new(dt).unwrap()))
        }),
        (any::<String>(), "[a-z]{2}(-[a-z]{2,4})?").prop_map(|(lex, tag)| {
            Term::Literal(Literal::lang(lex, tag))
        }),
    ]
}

fn arb_triple() -> impl Strategy<Value = Triple> {
    (
        prop_oneof![arb_iri_term(), arb_blank()],
        arb_iri_term(),
        prop_oneof![arb_iri_term(), arb_blank(), arb_literal()],
    )
        .prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(arb_triple(), 0..max).prop_map(Graph::from_iter)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_all_formats(graph in arb_graph(40)) {
        for format in [RdfFormat::NTriples, RdfFormat::Turtle, RdfFormat::NQuads] {
            let text = serialize_graph(&graph, format);
            let back = match format {
                RdfFormat::NQuads => parse_dataset(&text, format).unwrap().default,
                _ => parse_graph(&text, format).unwrap(),
            };
            prop_assert!(
                isomorphic(&graph, &back),
                "round trip failed for {format:?}:\n{text}"
            );
        }
    }

    #[test]
    fn membership_index_inverts_constructor(n in 1usize..1_000_000) {
        let iri = vocab::membership(n).unwrap();
        prop_assert_eq!(vocab::membership_index(&iri), Some(n));
    }

    #[test]
    fn isomorphism_reflexive_and_symmetric(graph in arb_graph(25)) {
        prop_assert!(isomorphic(&graph, &graph));
        let renamed = rename_blanks(&graph, "x");
        prop_assert!(isomorphic(&graph, &renamed));
        prop_assert!(isomorphic(&renamed, &graph));
    }

    #[test]
    fn isomorphism_transitive_over_renamings(graph in arb_graph(12)) {
        let second = rename_blanks(&graph, "y");
        let third = rename_blanks(&second, "z");
        prop_assert!(isomorphic(&graph, &second));
        prop_assert!(isomorphic(&second, &third));
        prop_assert!(isomorphic(&graph, &third));
    }

    #[test]
    fn service_iri_reencode_fixpoint(
        entries in prop::collection::vec(
            ("[a-z][a-z.]{0,8}", "[ -~]{0,12}"),
            0..6
        )
    ) {
        let mut options = FacadeOptions::new();
        for (name, value) in &entries {
            options.set(name, value.clone());
        }
        let iri = encode_service_iri(&options);
        if let Ok((parsed, _)) = parse_service_iri(&iri) {
            let reencoded = encode_service_iri(&parsed);
            let (reparsed, _) = parse_service_iri(&reencoded).unwrap();
            prop_assert_eq!(parsed, reparsed);
        }
    }

    #[test]
    fn merge_is_left_biased_overridable(
        a_entries in prop::collection::vec(("[a-z]{1,6}", "[a-z0-9]{0,6}"), 0..5),
        b_entries in prop::collection::vec(("[a-z]{1,6}", "[a-z0-9]{0,6}"), 0..5),
    ) {
        let mut a = FacadeOptions::new();
        for (n, v) in &a_entries { a.set(n, v.clone()); }
        let mut b = FacadeOptions::new();
        for (n, v) in &b_entries { b.set(n, v.clone()); }

        prop_assert_eq!(a.merge(&FacadeOptions::new()).unwrap(), a.clone());
        if let Ok(merged) = a.merge(&b) {
            for (name, value) in b.iter() {
                prop_assert_eq!(merged.get(name), Some(value));
            }
            for (name, value) in a.iter() {
                if !b.contains(name) {
                    prop_assert_eq!(merged.get(name), Some(value));
                }
            }
        }
    }
}

fn rename_blanks(graph: &Graph, suffix: &str) -> Graph {
    graph
        .iter()
        .map(|t| {
            let rename = |term: &Term| match term {
                Term::Blank(label) => Term::blank(format!("{label}{suffix}")),
                other => other.clone(),
            };
            Triple::new(rename(&t.subject), t.predicate.clone(), rename(&t.object))
        })
        .collect()
}
