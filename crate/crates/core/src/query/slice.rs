//! Sliced execution: the source is partitioned into units (CSV data
//! rows, JSON top-level array elements or path matches, XML child
//! elements), each unit is triplified as the k-th child of a fresh root
//! so global membership indices are preserved, the residual pattern is
//! matched per unit, and the solutions are concatenated in unit order.
//!
//! With the `parallel` feature (the default) units run on the rayon
//! pool; the ordered collect keeps the output identical to the
//! sequential fallback.

use crate::config::{FacadeOptions, SourceSpec};
use crate::error::FxError;
use crate::query::algebra::{GroupPattern, Solution};
use crate::query::eval::{eval_group, Scope};
use crate::rdf::Graph;
use crate::source::{resolve_with_policy, ResolvedSource};
use crate::triplify::builder::FacadeBuilder;
use crate::triplify::{json, xml, TripleFilter};

pub(crate) fn slice_solutions(
    scope: &Scope,
    spec: &SourceSpec,
    opts: &FacadeOptions,
    residual: &GroupPattern,
    filter: Option<TripleFilter>,
) -> Result<Vec<Solution>, FxError> {
    let resolved = resolve_with_policy(spec, opts, scope.engine.policy)?;
    let session = scope.counters.next_session();
    let runner = UnitRunner {
        scope,
        opts,
        residual,
        filter,
        session,
        origin: resolved.origin.clone(),
    };
    let per_unit = match resolved.media_essence().as_str() {
        "text/csv" | "text/tab-separated-values" => slice_csv(&resolved, &runner)?,
        "application/json" | "text/json" => slice_json(&resolved, &runner)?,
        "application/xml" | "text/xml" => slice_xml(&resolved, &runner)?,
        other => {
            return Err(FxError::InvalidConfig(format!(
                "slice is supported for CSV, JSON and XML sources, not {other}"
            )))
        }
    };
    Ok(per_unit.into_iter().flatten().collect())
}

/// Shared per-unit machinery: builds the unit facade and matches the
/// residual pattern against it.
struct UnitRunner<'a, 'b> {
    scope: &'a Scope<'b>,
    opts: &'a FacadeOptions,
    residual: &'a GroupPattern,
    filter: Option<TripleFilter>,
    session: usize,
    origin: SourceSpec,
}

impl UnitRunner<'_, '_> {
    fn builder(&self, unit_index: usize) -> Result<FacadeBuilder, FxError> {
        FacadeBuilder::new(
            self.opts,
            &self.origin,
            &format!("s{}u{unit_index}", self.session),
            self.filter.clone(),
        )
    }

    fn solutions(&self, graph: Graph) -> Result<Vec<Solution>, FxError> {
        let inner = self.scope.with_graph(&graph);
        eval_group(&inner, self.residual)
    }
}

fn slice_csv(
    resolved: &ResolvedSource,
    runner: &UnitRunner,
) -> Result<Vec<Vec<Solution>>, FxError> {
    let text = resolved.decode_text()?;
    let delimiter = crate::triplify::csv_delimiter(runner.opts)?;
    let headers_on = runner.opts.csv_headers()?;

    let mut reader = crate::triplify::csv_reader(&text, delimiter);
    let mut records = reader.records();
    let csv_err = |e: ::csv::Error| FxError::SourceSyntax {
        format: "CSV",
        origin: resolved.origin_label(),
        message: e.to_string(),
    };
    let header_row: Option<Vec<String>> = if headers_on {
        match records.next() {
            Some(record) => Some(record.map_err(csv_err)?.iter().map(str::to_owned).collect()),
            None => None,
        }
    } else {
        None
    };
    let mut units = Vec::new();
    for record in records {
        units.push(record.map_err(csv_err)?);
    }

    map_units(units.into_iter().enumerate().collect(), |(i, record)| {
        let k = i + 1;
        let mut builder = runner.builder(k)?;
        let root = builder.root();
        let row = builder.container_at(&root, k);
        crate::triplify::csv_emit_row(&mut builder, &row, &record, header_row.as_deref(), k);
        runner.solutions(builder.finish())
    })
}

fn slice_json(
    resolved: &ResolvedSource,
    runner: &UnitRunner,
) -> Result<Vec<Vec<Solution>>, FxError> {
    let text = resolved.decode_text()?;
    let value = json::parse_json(&text, resolved)?;
    let units: Vec<serde_json::Value> = match runner.opts.get("json.path") {
        Some(path) => json::select_path(&value, path)?
            .into_iter()
            .cloned()
            .collect(),
        None => match value {
            serde_json::Value::Array(items) => items,
            _ => {
                return Err(FxError::InvalidConfig(
                    "slice over JSON requires a top-level array (or a json.path)".into(),
                ))
            }
        },
    };

    map_units(units.into_iter().enumerate().collect(), |(i, unit)| {
        let k = i + 1;
        let mut builder = runner.builder(k)?;
        let root = builder.root();
        json::emit_as_child_at(&mut builder, &root, k, &unit);
        runner.solutions(builder.finish())
    })
}

fn slice_xml(
    resolved: &ResolvedSource,
    runner: &UnitRunner,
) -> Result<Vec<Vec<Solution>>, FxError> {
    let text = resolved.decode_text()?;
    let document = xml::parse_document(&text, resolved)?;

    // Unit indices count every child of the document element (text
    // included) so rdf:_k matches the unsliced graph; only element
    // children become units.
    let mut units: Vec<(usize, xml::XmlElement)> = Vec::new();
    for (i, child) in document.children.iter().enumerate() {
        if let xml::XmlNode::Element(el) = child {
            units.push((i + 1, el.clone()));
        }
    }
    let shell = xml::XmlElement {
        children: Vec::new(),
        ..document
    };

    map_units(units, |(k, element)| {
        let mut builder = runner.builder(k)?;
        let root = builder.root();
        xml::emit_shell(&mut builder, &root, &shell);
        let child = builder.container_at(&root, k);
        xml::walk(&mut builder, &child, &element);
        runner.solutions(builder.finish())
    })
}

/// Applies `f` to every unit, preserving unit order in the output.
fn map_units<U, F>(units: Vec<U>, f: F) -> Result<Vec<Vec<Solution>>, FxError>
where
    U: Send,
    F: Fn(U) -> Result<Vec<Solution>, FxError> + Send + Sync,
{
    if cfg!(feature = "parallel") {
        map_units_parallel(units, f)
    } else {
        map_units_sequential(units, f)
    }
}

pub(crate) fn map_units_sequential<U, F>(units: Vec<U>, f: F) -> Result<Vec<Vec<Solution>>, FxError>
where
    F: Fn(U) -> Result<Vec<Solution>, FxError>,
{
    units.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_units_parallel<U, F>(units: Vec<U>, f: F) -> Result<Vec<Vec<Solution>>, FxError>
where
    U: Send,
    F: Fn(U) -> Result<Vec<Solution>, FxError> + Send + Sync,
{
    use rayon::prelude::*;
    units.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_units_parallel<U, F>(units: Vec<U>, f: F) -> Result<Vec<Vec<Solution>>, FxError>
where
    F: Fn(U) -> Result<Vec<Solution>, FxError>,
{
    map_units_sequential(units, f)
}
