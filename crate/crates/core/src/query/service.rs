//! SERVICE interception. A `x-sparql-anything:` target triggers local
//! triplification: gather options (IRI scheme plus inline
//! `fx:properties`, inline wins), resolve the source, build the facade
//! graph with triple-filtering, evaluate the residual pattern against
//! it, and join with the incoming solutions. A facade graph lives only
//! for the SERVICE execution that built it.

use indexmap::IndexMap;

use crate::config::{parse_service_iri, FacadeOptions, SERVICE_SCHEME};
use crate::error::FxError;
use crate::query::algebra::{Element, GroupPattern, PatternTerm, ServiceTarget, Solution, Var};
use crate::query::eval::{eval_group, Scope};
use crate::query::filter::build_triple_filter;
use crate::query::inline::extract_inline_properties;
use crate::query::slice;
use crate::rdf::{vocab, Term};
use crate::source::resolve_with_policy;
use crate::triplify::{triplify, TriplifyContext};

/// The variables a SERVICE needs bound before it can run: a variable
/// target plus every variable-valued `fx:properties` option.
pub(crate) fn config_vars(target: &ServiceTarget, pattern: &GroupPattern) -> Vec<Var> {
    let mut vars = Vec::new();
    if let ServiceTarget::Var(v) = target {
        vars.push(v.clone());
    }
    collect_option_vars(pattern, &mut vars);
    vars
}

fn collect_option_vars(group: &GroupPattern, out: &mut Vec<Var>) {
    for element in &group.elements {
        match element {
            Element::Bgp(patterns) => {
                for p in patterns {
                    let subject_is_properties = matches!(
                        &p.subject,
                        PatternTerm::Term(Term::Iri(iri))
                            if iri.as_str() == vocab::FX_PROPERTIES
                    );
                    if subject_is_properties {
                        if let PatternTerm::Var(v) = &p.object {
                            if !out.contains(v) {
                                out.push(v.clone());
                            }
                        }
                    }
                }
            }
            Element::Group(g) | Element::Optional(g) => collect_option_vars(g, out),
            Element::Union(branches) => {
                for b in branches {
                    collect_option_vars(b, out);
                }
            }
            _ => {}
        }
    }
}

pub(crate) fn execute_service(
    scope: &Scope,
    target: &ServiceTarget,
    pattern: &GroupPattern,
    silent: bool,
    incoming: Vec<Solution>,
) -> Result<Vec<Solution>, FxError> {
    match run_service(scope, target, pattern, incoming) {
        Err(_) if silent => Ok(Vec::new()),
        other => other,
    }
}

fn run_service(
    scope: &Scope,
    target: &ServiceTarget,
    pattern: &GroupPattern,
    incoming: Vec<Solution>,
) -> Result<Vec<Solution>, FxError> {
    let inline = extract_inline_properties(pattern)?;

    // Solutions sharing one effective configuration share one facade.
    let mut groups: IndexMap<Vec<String>, Vec<Solution>> = IndexMap::new();
    for solution in incoming {
        let iri = match target {
            ServiceTarget::Iri(iri) => iri.as_str().to_owned(),
            ServiceTarget::Var(v) => match solution.get(v) {
                Some(Term::Iri(iri)) => iri.as_str().to_owned(),
                Some(other) => {
                    return Err(FxError::InvalidConfig(format!(
                        "SERVICE target ?{} is bound to a non-IRI: {other:?}",
                        v.name
                    )))
                }
                None => return Err(FxError::UnresolvedService(format!("?{}", v.name))),
            },
        };
        let mut key = vec![iri];
        for (name, var) in &inline.variable_bound {
            match solution.get(var) {
                Some(term) => match term.string_form() {
                    Some(s) => key.push(s.to_owned()),
                    None => {
                        return Err(FxError::InvalidConfig(format!(
                            "option {name} bound to a blank node"
                        )))
                    }
                },
                None => return Err(FxError::UnresolvedService(format!("?{}", var.name))),
            }
        }
        groups.entry(key).or_default().push(solution);
    }

    let mut out = Vec::new();
    for (key, rows) in groups {
        let iri = &key[0];
        if !iri.starts_with(SERVICE_SCHEME) {
            return Err(FxError::Unsupported(format!(
                "SERVICE endpoint <{iri}> — only {SERVICE_SCHEME} targets are supported"
            )));
        }
        let facade = facade_solutions(scope, iri, &key[1..], &inline)
            .map_err(|e| e.in_service(iri))?;
        for mu in &rows {
            for sigma in &facade {
                if let Some(merged) = mu.merge(sigma) {
                    out.push(merged);
                }
            }
        }
    }
    Ok(out)
}

fn facade_solutions(
    scope: &Scope,
    iri: &str,
    variable_values: &[String],
    inline: &crate::query::inline::InlineConfig,
) -> Result<Vec<Solution>, FxError> {
    let (iri_opts, _) = parse_service_iri(iri)?;
    let mut overlay = inline.fixed.clone();
    for ((name, _), value) in inline.variable_bound.iter().zip(variable_values) {
        overlay.set(name, value.clone());
    }
    let merged = iri_opts.merge(&overlay)?;
    merged.validate()?;
    reject_unsupported(&merged)?;

    let spec = merged.source_spec()?.ok_or(FxError::NoSource)?;
    let filter = if merged.filtering()? {
        Some(build_triple_filter(&inline.residual))
    } else {
        None
    };

    if merged.slice()? {
        return slice::slice_solutions(scope, &spec, &merged, &inline.residual, filter);
    }

    let resolved = resolve_with_policy(&spec, &merged, scope.engine.policy)?;
    let session = scope.counters.next_session();
    let ctx = TriplifyContext {
        filter,
        session: format!("s{session}"),
    };
    let graph = triplify(&resolved, &merged, &ctx)?;
    crate::diag::debug(format!(
        "facade over {} materialized {} triples",
        resolved.origin_label(),
        graph.len()
    ));
    let inner = scope.with_graph(&graph);
    eval_group(&inner, &inline.residual)
}

fn reject_unsupported(opts: &FacadeOptions) -> Result<(), FxError> {
    if opts.get_bool("metadata", false)? {
        return Err(FxError::Unsupported(
            "metadata graph extraction (metadata=true)".into(),
        ));
    }
    if opts.get_bool("ondisk", false)? {
        return Err(FxError::Unsupported(
            "the on-disk strategy (ondisk=true); use slice=true or the in-memory default".into(),
        ));
    }
    if opts.get("html.browser").is_some() {
        return Err(FxError::Unsupported(
            "headless-browser rendering (html.browser)".into(),
        ));
    }
    Ok(())
}
