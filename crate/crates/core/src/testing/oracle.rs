//! A naive reference evaluator, independent of the engine's execution
//! path: basic graph patterns are matched by enumerating every
//! assignment of patterns to triples (|G|^k tuples) instead of seeded
//! substitution, and the operators are applied literally from their
//! definitions. Slow on purpose; only for graphs of test size.

use std::collections::HashSet;

use crate::query::algebra::{
    CmpOp, Element, Expression, GroupPattern, PatternTerm, Query, QueryForm, Solution,
    TriplePattern,
};
use crate::rdf::{Graph, Term, Triple};

/// Evaluates a SELECT query against a graph. Returns `None` when the
/// query leaves the oracle's subset (SERVICE, BIND, expressions other
/// than `?v = term` / `?v != term`, ORDER BY).
pub fn naive_select(query: &Query, graph: &Graph) -> Option<Vec<Solution>> {
    if !query.order_by.is_empty() || query.limit.is_some() || query.offset.is_some() {
        return None;
    }
    let QueryForm::Select { distinct, .. } = &query.form else {
        return None;
    };
    let solutions = eval_group(&query.pattern, graph)?;
    let vars = query.projection_vars();
    let mut rows: Vec<Solution> = solutions.iter().map(|s| s.project(&vars)).collect();
    if *distinct {
        let mut seen = HashSet::new();
        rows.retain(|row| seen.insert(row.canonical_key()));
    }
    Some(rows)
}

fn eval_group(group: &GroupPattern, graph: &Graph) -> Option<Vec<Solution>> {
    // Join of the non-filter operands, bottom-up, then the filters.
    let mut acc = vec![Solution::new()];
    let mut filters = Vec::new();
    for element in &group.elements {
        match element {
            Element::Filter(expr) => filters.push(expr),
            Element::Bgp(patterns) => {
                let sub = enumerate_bgp(patterns, graph)?;
                acc = join(&acc, &sub);
            }
            Element::Group(g) => {
                let sub = eval_group(g, graph)?;
                acc = join(&acc, &sub);
            }
            Element::Union(branches) => {
                let mut sub = Vec::new();
                for branch in branches {
                    sub.extend(eval_group(branch, graph)?);
                }
                acc = join(&acc, &sub);
            }
            Element::Optional(g) => {
                let sub = eval_group(g, graph)?;
                // LeftJoin by definition, no condition.
                let mut out = Vec::new();
                for mu in &acc {
                    let merges: Vec<Solution> =
                        sub.iter().filter_map(|nu| mu.merge(nu)).collect();
                    if merges.is_empty() {
                        out.push(mu.clone());
                    } else {
                        out.extend(merges);
                    }
                }
                acc = out;
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
                acc = join(&acc, &table);
            }
            Element::Bind { .. } | Element::Service { .. } => return None,
        }
    }
    for filter in filters {
        acc.retain(|solution| filter_holds(filter, solution).unwrap_or(false));
    }
    Some(acc)
}

/// Only `?v = term` and `?v != term` — evaluated directly from the
/// definition of term equality, shared with nothing.
fn filter_holds(expr: &Expression, solution: &Solution) -> Option<bool> {
    match expr {
        Expression::Compare(op, left, right) => {
            let (Expression::Var(var), Expression::Term(term)) = (&**left, &**right) else {
                return None;
            };
            let bound = solution.get(var)?;
            match op {
                CmpOp::Eq => Some(bound == term),
                CmpOp::Ne => Some(bound != term),
                _ => None,
            }
        }
        _ => None,
    }
}

fn join(left: &[Solution], right: &[Solution]) -> Vec<Solution> {
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

/// Every assignment of the k patterns to triples of the graph; an
/// assignment contributes a solution when a single consistent variable
/// mapping covers all k pattern/triple pairs.
fn enumerate_bgp(patterns: &[TriplePattern], graph: &Graph) -> Option<Vec<Solution>> {
    let triples: Vec<&Triple> = graph.iter().collect();
    let k = patterns.len();
    if k == 0 {
        return Some(vec![Solution::new()]);
    }
    if triples.is_empty() {
        return Some(Vec::new());
    }
    // Keep the enumeration at test scale.
    if triples.len().checked_pow(k as u32)? > 20_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut indices = vec![0usize; k];
    loop {
        if let Some(solution) = try_assignment(patterns, &indices, &triples) {
            out.push(solution);
        }
        // Advance the odometer.
        let mut position = k;
        loop {
            if position == 0 {
                return Some(out);
            }
            position -= 1;
            indices[position] += 1;
            if indices[position] < triples.len() {
                break;
            }
            indices[position] = 0;
        }
    }
}

fn try_assignment(
    patterns: &[TriplePattern],
    indices: &[usize],
    triples: &[&Triple],
) -> Option<Solution> {
    let mut solution = Solution::new();
    for (pattern, &index) in patterns.iter().zip(indices) {
        let triple = triples[index];
        bind(&pattern.subject, &triple.subject, &mut solution)?;
        bind(&pattern.predicate, &triple.predicate, &mut solution)?;
        bind(&pattern.object, &triple.object, &mut solution)?;
    }
    Some(solution)
}

fn bind(position: &PatternTerm, value: &Term, solution: &mut Solution) -> Option<()> {
    match position {
        PatternTerm::Term(t) => (t == value).then_some(()),
        PatternTerm::Var(v) => match solution.get(v) {
            Some(existing) => (existing == value).then_some(()),
            None => {
                solution.bind(v.clone(), value.clone());
                Some(())
            }
        },
    }
}
