//! Blank-node-aware graph equality: two graphs are isomorphic when some
//! bijection between their blank nodes maps one exactly onto the other.
//!
//! Ground triples are compared as plain sets first, then blank nodes are
//! matched by backtracking over candidates with equal occurrence
//! signatures. Fine for the graph sizes this engine works with.

use std::collections::{HashMap, HashSet};

use crate::rdf::model::{Graph, Term, Triple};

pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }

    let a_ground: HashSet<&Triple> = a.iter().filter(|t| !has_blank(t)).collect();
    let b_ground: HashSet<&Triple> = b.iter().filter(|t| !has_blank(t)).collect();
    if a_ground != b_ground {
        return false;
    }

    let a_blank: Vec<&Triple> = a.iter().filter(|t| has_blank(t)).collect();
    let b_blank: Vec<&Triple> = b.iter().filter(|t| has_blank(t)).collect();
    if a_blank.len() != b_blank.len() {
        return false;
    }
    if a_blank.is_empty() {
        return true;
    }

    let a_sigs = signatures(&a_blank);
    let b_sigs = signatures(&b_blank);
    if a_sigs.len() != b_sigs.len() {
        return false;
    }

    // Candidates for each blank node of `a`: blanks of `b` with the same
    // signature. Most-constrained nodes are assigned first.
    let mut nodes: Vec<(&str, &Vec<String>)> = a_sigs
        .iter()
        .map(|(label, sig)| (label.as_str(), sig))
        .collect();
    nodes.sort_by_key(|(label, sig)| (usize::MAX - sig.len(), label.to_owned()));

    let candidates: Vec<Vec<&str>> = nodes
        .iter()
        .map(|(_, sig)| {
            b_sigs
                .iter()
                .filter(|(_, bsig)| bsig.as_slice() == sig.as_slice())
                .map(|(label, _)| label.as_str())
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return false;
    }

    let b_blank_set: HashSet<&Triple> = b_blank.iter().copied().collect();
    let mut mapping: HashMap<&str, &str> = HashMap::new();
    let mut used: HashSet<&str> = HashSet::new();
    assign(0, &nodes, &candidates, &a_blank, &b_blank_set, &mut mapping, &mut used)
}

fn assign<'a>(
    index: usize,
    nodes: &[(&'a str, &Vec<String>)],
    candidates: &[Vec<&'a str>],
    a_blank: &[&Triple],
    b_blank: &HashSet<&Triple>,
    mapping: &mut HashMap<&'a str, &'a str>,
    used: &mut HashSet<&'a str>,
) -> bool {
    if index == nodes.len() {
        return a_blank
            .iter()
            .all(|t| b_blank.contains(&apply_mapping(t, mapping)));
    }
    let (label, _) = nodes[index];
    for candidate in &candidates[index] {
        if used.contains(candidate) {
            continue;
        }
        mapping.insert(label, candidate);
        used.insert(candidate);
        // Prune: every fully-mapped triple must already exist in b.
        let consistent = a_blank.iter().all(|t| {
            match try_apply(t, mapping) {
                Some(mapped) => b_blank.contains(&mapped),
                None => true,
            }
        });
        if consistent
            && assign(index + 1, nodes, candidates, a_blank, b_blank, mapping, used)
        {
            return true;
        }
        mapping.remove(label);
        used.remove(candidate);
    }
    false
}

fn has_blank(t: &Triple) -> bool {
    t.subject.is_blank() || t.object.is_blank()
}

/// Occurrence signature of each blank node: the sorted list of its triple
/// shapes, with blanks reduced to position markers.
fn signatures(triples: &[&Triple]) -> HashMap<String, Vec<String>> {
    let mut sigs: HashMap<String, Vec<String>> = HashMap::new();
    for t in triples {
        let p = describe(&t.predicate);
        if let Term::Blank(label) = &t.subject {
            sigs.entry(label.clone())
                .or_default()
                .push(format!("S {p} {}", describe(&t.object)));
        }
        if let Term::Blank(label) = &t.object {
            sigs.entry(label.clone())
                .or_default()
                .push(format!("O {p} {}", describe(&t.subject)));
        }
    }
    for sig in sigs.values_mut() {
        sig.sort();
    }
    sigs
}

fn describe(term: &Term) -> String {
    match term {
        Term::Blank(_) => "*".to_owned(),
        other => format!("{other:?}"),
    }
}

fn apply_mapping(t: &Triple, mapping: &HashMap<&str, &str>) -> Triple {
    try_apply(t, mapping).expect("mapping must be total here")
}

/// Maps a triple's blank nodes; `None` when some blank is not yet mapped.
fn try_apply(t: &Triple, mapping: &HashMap<&str, &str>) -> Option<Triple> {
    let map_term = |term: &Term| -> Option<Term> {
        match term {
            Term::Blank(label) => mapping.get(label.as_str()).map(|m| Term::blank(*m)),
            other => Some(other.clone()),
        }
    };
    Some(Triple {
        subject: map_term(&t.subject)?,
        predicate: t.predicate.clone(),
        object: map_term(&t.object)?,
    })
}
