//! Group-pattern evaluation. Operands run left to right; FILTERs scope
//! to their group and apply at its end; a SERVICE whose configuration
//! variables are still unbound is pushed to the back of the queue and
//! retried, which is what lets BIND-then-SERVICE pipelines work.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::FxError;
use crate::query::algebra::{
    Element, Expression, GroupPattern, OrderDirection, PatternTerm, Query, QueryForm, Solution,
    TriplePattern, Var,
};
use crate::query::expr::{self, ExprContext};
use crate::query::service;
use crate::query::Engine;
use crate::rdf::{Graph, Term, Triple};

pub(crate) struct Counters {
    pub bnode: AtomicUsize,
    pub session: AtomicUsize,
}

impl Counters {
    pub fn new() -> Counters {
        Counters {
            bnode: AtomicUsize::new(0),
            session: AtomicUsize::new(0),
        }
    }

    pub fn next_session(&self) -> usize {
        self.session.fetch_add(1, Ordering::Relaxed)
    }
}

/// Everything one evaluation step needs: the engine (registry, policy,
/// base data) and the graph basic patterns currently match against —
/// the base default graph at top level, a facade graph inside SERVICE.
pub(crate) struct Scope<'a> {
    pub engine: &'a Engine,
    pub graph: &'a Graph,
    pub counters: &'a Counters,
}

impl<'a> Scope<'a> {
    pub fn with_graph<'b>(&'b self, graph: &'b Graph) -> Scope<'b> {
        Scope {
            engine: self.engine,
            graph,
            counters: self.counters,
        }
    }

    pub fn expr_context(&self) -> ExprContext<'_> {
        ExprContext::new(&self.engine.registry, &self.counters.bnode)
    }
}

pub(crate) fn eval_group(scope: &Scope, group: &GroupPattern) -> Result<Vec<Solution>, FxError> {
    let mut acc = vec![Solution::new()];
    let mut filters: Vec<&Expression> = Vec::new();
    let mut queue: VecDeque<&Element> = group.elements.iter().collect();
    let mut defers_since_progress = 0usize;

    while let Some(element) = queue.pop_front() {
        if let Element::Filter(expr) = element {
            filters.push(expr);
            continue;
        }
        if let Element::Service {
            target,
            pattern,
            silent,
        } = element
        {
            let config_vars = service::config_vars(target, pattern);
            let unbound = !config_vars.is_empty()
                && acc
                    .iter()
                    .any(|solution| config_vars.iter().any(|v| !solution.bound(v)));
            if unbound && !acc.is_empty() {
                if defers_since_progress > queue.len() {
                    // Every remaining operand deferred; nothing can bind it.
                    if *silent {
                        acc = Vec::new();
                        defers_since_progress = 0;
                        continue;
                    }
                    let names: Vec<String> =
                        config_vars.iter().map(|v| format!("?{}", v.name)).collect();
                    return Err(FxError::UnresolvedService(names.join(", ")));
                }
                crate::diag::debug(format!(
                    "SERVICE postponed, waiting for {}",
                    config_vars
                        .iter()
                        .map(|v| format!("?{}", v.name))
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
                defers_since_progress += 1;
                queue.push_back(element);
                continue;
            }
        }
        defers_since_progress = 0;
        if acc.is_empty() {
            // Joining anything onto the empty multiset stays empty, and
            // skipping avoids side effects from sources that would never
            // contribute rows.
            return Ok(Vec::new());
        }
        acc = eval_element(scope, element, acc)?;
    }

    let ctx = scope.expr_context();
    for filter in filters {
        acc.retain(|solution| expr::truth(filter, solution, &ctx).unwrap_or(false));
    }
    Ok(acc)
}

fn eval_element(
    scope: &Scope,
    element: &Element,
    acc: Vec<Solution>,
) -> Result<Vec<Solution>, FxError> {
    match element {
        Element::Bgp(patterns) => {
            let mut out = Vec::new();
            for solution in acc {
                out.extend(match_bgp(scope, patterns, solution)?);
            }
            Ok(out)
        }
        Element::Group(group) => {
            let sub = eval_group(scope, group)?;
            Ok(join(&acc, &sub))
        }
        Element::Union(branches) => {
            let mut sub = Vec::new();
            for branch in branches {
                sub.extend(eval_group(scope, branch)?);
            }
            Ok(join(&acc, &sub))
        }
        Element::Optional(group) => {
            let (inner, condition) = split_optional(group);
            let sub = eval_group(scope, &inner)?;
            Ok(left_join(scope, acc, sub, condition.as_ref()))
        }
        Element::Bind { expr, var } => {
            let ctx = scope.expr_context();
            Ok(acc
                .into_iter()
                .map(|mut solution| {
                    // An erroring expression leaves the variable unbound.
                    if let Ok(term) = expr::eval(expr, &solution, &ctx) {
                        solution.bind(var.clone(), term);
                    }
                    solution
                })
                .collect())
        }
        Element::Values { vars, rows } => {
            let table: Vec<Solution> = rows
                .iter()
                .map(|row| {
                    let mut solution = Solution::new();
                    for (var, term) in vars.iter().zip(row) {
                        if let Some(term) = term {
                            solution.bind(var.clone(), term.clone());
                        }
                    }
                    solution
                })
                .collect();
            Ok(join(&acc, &table))
        }
        Element::Service {
            target,
            pattern,
            silent,
        } => service::execute_service(scope, target, pattern, *silent, acc),
        Element::Filter(_) => unreachable!("filters are collected by eval_group"),
    }
}

/// FILTERs written directly inside an OPTIONAL group become the left
/// join condition, so they can see bindings from both sides.
fn split_optional(group: &GroupPattern) -> (GroupPattern, Option<Expression>) {
    let mut inner = Vec::new();
    let mut condition: Option<Expression> = None;
    for element in &group.elements {
        match element {
            Element::Filter(expr) => {
                condition = Some(match condition.take() {
                    Some(existing) => {
                        Expression::And(Box::new(existing), Box::new(expr.clone()))
                    }
                    None => expr.clone(),
                });
            }
            other => inner.push(other.clone()),
        }
    }
    (GroupPattern { elements: inner }, condition)
}

fn left_join(
    scope: &Scope,
    left: Vec<Solution>,
    right: Vec<Solution>,
    condition: Option<&Expression>,
) -> Vec<Solution> {
    let ctx = scope.expr_context();
    let mut out = Vec::new();
    for mu in left {
        let mut extended = false;
        for nu in &right {
            if let Some(merged) = mu.merge(nu) {
                let keep = match condition {
                    Some(expr) => expr::truth(expr, &merged, &ctx).unwrap_or(false),
                    None => true,
                };
                if keep {
                    out.push(merged);
                    extended = true;
                }
            }
        }
        if !extended {
            out.push(mu);
        }
    }
    out
}

pub(crate) fn join(left: &[Solution], right: &[Solution]) -> Vec<Solution> {
    let mut out = Vec::new();
    for mu in left {
        for nu in right {
            if let Some(merged) = mu.merge(nu) {
                out.push(merged);
            }
        }
    }
    out
}

pub(crate) fn match_bgp(
    scope: &Scope,
    patterns: &[TriplePattern],
    seed: Solution,
) -> Result<Vec<Solution>, FxError> {
    let mut rows = vec![seed];
    for pattern in patterns {
        let mut next = Vec::new();
        for solution in &rows {
            next.extend(match_pattern(scope, pattern, solution));
        }
        rows = next;
        if rows.is_empty() {
            break;
        }
    }
    Ok(rows)
}

fn match_pattern(scope: &Scope, pattern: &TriplePattern, solution: &Solution) -> Vec<Solution> {
    // A constant magic predicate is computed, not looked up.
    if let PatternTerm::Term(Term::Iri(iri)) = &pattern.predicate {
        if let Some(magic) = scope.engine.registry.magic(iri.as_str()) {
            let subject_constraint = resolved(&pattern.subject, solution);
            let object_constraint = resolved(&pattern.object, solution);
            let pairs = magic(
                subject_constraint.as_ref(),
                object_constraint.as_ref(),
                scope.graph,
            );
            let mut out = Vec::new();
            for (s, o) in pairs {
                let mut merged = solution.clone();
                if bind_position(&pattern.subject, &s, &mut merged)
                    && bind_position(&pattern.object, &o, &mut merged)
                {
                    out.push(merged);
                }
            }
            return out;
        }
    }
    scope
        .graph
        .iter()
        .filter_map(|t| unify(pattern, t, solution))
        .collect()
}

fn resolved(position: &PatternTerm, solution: &Solution) -> Option<Term> {
    match position {
        PatternTerm::Term(t) => Some(t.clone()),
        PatternTerm::Var(v) => solution.get(v).cloned(),
    }
}

fn bind_position(position: &PatternTerm, value: &Term, solution: &mut Solution) -> bool {
    match position {
        PatternTerm::Term(t) => t == value,
        PatternTerm::Var(v) => match solution.get(v) {
            Some(existing) => existing == value,
            None => {
                solution.bind(v.clone(), value.clone());
                true
            }
        },
    }
}

fn unify(pattern: &TriplePattern, triple: &Triple, seed: &Solution) -> Option<Solution> {
    let mut solution = seed.clone();
    if !bind_position(&pattern.subject, &triple.subject, &mut solution) {
        return None;
    }
    if !bind_position(&pattern.predicate, &triple.predicate, &mut solution) {
        return None;
    }
    if !bind_position(&pattern.object, &triple.object, &mut solution) {
        return None;
    }
    Some(solution)
}

// ---- query forms and solution modifiers ----

pub(crate) fn evaluate_query(engine: &Engine, query: &Query) -> Result<QueryOutcomeInner, FxError> {
    let counters = Counters::new();
    let scope = Scope {
        engine,
        graph: &engine.base.default,
        counters: &counters,
    };
    let mut solutions = eval_group(&scope, &query.pattern)?;

    if !query.order_by.is_empty() {
        let ctx = scope.expr_context();
        solutions.sort_by(|a, b| {
            for (direction, key) in &query.order_by {
                let ka = expr::eval(key, a, &ctx).ok();
                let kb = expr::eval(key, b, &ctx).ok();
                let ordering = expr::order_terms(ka.as_ref(), kb.as_ref());
                let ordering = match direction {
                    OrderDirection::Asc => ordering,
                    OrderDirection::Desc => ordering.reverse(),
                };
                if ordering != std::cmp::Ordering::Equal {
                    return ordering;
                }
            }
            std::cmp::Ordering::Equal
        });
    }

    match &query.form {
        QueryForm::Ask => Ok(QueryOutcomeInner::Boolean(!solutions.is_empty())),
        QueryForm::Select {
            distinct,
            projection: _,
        } => {
            let vars = query.projection_vars();
            let mut rows: Vec<Solution> =
                solutions.iter().map(|s| s.project(&vars)).collect();
            if *distinct {
                let mut seen = std::collections::HashSet::new();
                rows.retain(|row| seen.insert(row.canonical_key()));
            }
            let rows = apply_slice(rows, query.offset, query.limit);
            Ok(QueryOutcomeInner::Solutions {
                variables: vars,
                rows,
            })
        }
        QueryForm::Construct { template } => {
            let solutions = apply_slice(solutions, query.offset, query.limit);
            let mut graph = Graph::new();
            for (row_index, solution) in solutions.iter().enumerate() {
                for pattern in template {
                    if let Some(triple) = instantiate(pattern, solution, row_index) {
                        graph.insert(triple);
                    }
                }
            }
            Ok(QueryOutcomeInner::Graph(graph))
        }
    }
}

pub(crate) enum QueryOutcomeInner {
    Solutions { variables: Vec<Var>, rows: Vec<Solution> },
    Graph(Graph),
    Boolean(bool),
}

fn apply_slice<T>(rows: Vec<T>, offset: Option<usize>, limit: Option<usize>) -> Vec<T> {
    let mut iter = rows.into_iter().skip(offset.unwrap_or(0));
    match limit {
        Some(n) => iter.by_ref().take(n).collect(),
        None => iter.collect(),
    }
}

/// Instantiates one template triple for one solution. Template blank
/// nodes mint fresh blanks per solution; triples with unbound variables
/// or illegal positions are skipped.
fn instantiate(pattern: &TriplePattern, solution: &Solution, row: usize) -> Option<Triple> {
    let subject = template_term(&pattern.subject, solution, row)?;
    let predicate = template_term(&pattern.predicate, solution, row)?;
    let object = template_term(&pattern.object, solution, row)?;
    if subject.is_literal() || !predicate.is_iri() {
        return None;
    }
    Some(Triple::new(subject, predicate, object))
}

fn template_term(position: &PatternTerm, solution: &Solution, row: usize) -> Option<Term> {
    match position {
        PatternTerm::Var(v) => solution.get(v).cloned(),
        PatternTerm::Term(Term::Blank(label)) => Some(Term::blank(format!("r{row}_{label}"))),
        PatternTerm::Term(t) => Some(t.clone()),
    }
}
