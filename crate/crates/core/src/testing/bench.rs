//! Benchmark support: sliced execution with an explicit choice between
//! the rayon path and the sequential fallback, over a synthetic CSV of
//! `rows` data rows. Returns the solution count so the benchmark can
//! sink the result.

use crate::config::{FacadeOptions, SourceSpec};
use crate::query::algebra::{Element, GroupPattern, PatternTerm, Solution, TriplePattern, Var};
use crate::query::{build_triple_filter, Engine};
use crate::rdf::{vocab, Term};
use crate::triplify::builder::FacadeBuilder;

pub fn synthetic_csv(rows: usize) -> String {
    let mut out = String::from("id,name,score\n");
    for i in 0..rows {
        out.push_str(&format!("{i},row-{i},{}\n", (i * 37) % 100));
    }
    out
}

pub fn per_row_pattern() -> GroupPattern {
    let row = || PatternTerm::Var(Var::named("row"));
    let key = |name: &str| {
        PatternTerm::Term(Term::iri_unchecked(format!("{}{name}", vocab::XYZ_NS)))
    };
    GroupPattern {
        elements: vec![Element::Bgp(vec![
            TriplePattern {
                subject: row(),
                predicate: key("id"),
                object: PatternTerm::Var(Var::named("id")),
            },
            TriplePattern {
                subject: row(),
                predicate: key("name"),
                object: PatternTerm::Var(Var::named("name")),
            },
            TriplePattern {
                subject: row(),
                predicate: key("score"),
                object: PatternTerm::Var(Var::named("score")),
            },
        ])],
    }
}

/// Runs the per-unit pipeline (triplify one row, match the pattern)
/// over every data row, on the rayon pool or sequentially.
pub fn run_sliced_csv(csv: &str, parallel: bool) -> usize {
    let engine = Engine::new();
    let counters = crate::query::Counters::new();
    let scope = crate::query::Scope {
        engine: &engine,
        graph: &engine.base().default,
        counters: &counters,
    };
    let residual = per_row_pattern();
    let filter = build_triple_filter(&residual);
    let origin = SourceSpec::Content(csv.to_owned());
    let opts = {
        let mut o = FacadeOptions::new();
        o.set("csv.headers", "true");
        o
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv.as_bytes());
    let mut records = reader.records();
    let header: Vec<String> = records
        .next()
        .expect("header row")
        .expect("valid csv")
        .iter()
        .map(str::to_owned)
        .collect();
    let units: Vec<(usize, csv::StringRecord)> = records
        .map(|r| r.expect("valid csv"))
        .enumerate()
        .map(|(i, r)| (i + 1, r))
        .collect();

    let run_unit = |(k, record): (usize, csv::StringRecord)| -> Result<Vec<Solution>, crate::FxError> {
        let mut builder =
            FacadeBuilder::new(&opts, &origin, &format!("u{k}"), Some(filter.clone()))?;
        let root = builder.root();
        let row = builder.container_at(&root, k);
        crate::triplify::csv_emit_row(&mut builder, &row, &record, Some(&header), k);
        let graph = builder.finish();
        let inner = scope.with_graph(&graph);
        crate::query::eval_group(&inner, &residual)
    };

    let per_unit = if parallel {
        crate::query::map_units_parallel(units, run_unit).expect("bench units")
    } else {
        crate::query::map_units_sequential(units, run_unit).expect("bench units")
    };
    per_unit.into_iter().map(|v| v.len()).sum()
}
