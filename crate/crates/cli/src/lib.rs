//! The `fx` command line: run a query file against any supported
//! source, pick an output format, feed parameter bindings, and chain
//! runs through RDF files with `--load`.

pub mod basil;
pub mod params;

use std::io::Write;
use std::path::{Path, PathBuf};

use fx_core::endpoint::load_dataset;
use fx_core::error::FxError;
use fx_core::formats::{check_compatible, format_results, OutputFormat};
use fx_core::query::{parse_query, Engine, QueryForm};
use fx_core::rdf::Dataset;

use basil::ParameterRow;

/// A parsed invocation of `fx`.
#[derive(Debug, Default)]
pub struct Invocation {
    pub query_path: PathBuf,
    pub format: Option<String>,
    pub output: Option<PathBuf>,
    pub values_file: Option<PathBuf>,
    pub inline_values: Vec<String>,
    pub output_pattern: Option<String>,
    pub load: Option<PathBuf>,
}

/// Exit status: 0 success, 1 execution error, 2 usage error.
pub fn run(invocation: &Invocation) -> i32 {
    match try_run(invocation, &mut std::io::stdout()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fx: {e}");
            match e {
                FxError::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

/// The whole run: load the base dataset, expand parameters, execute
/// each concrete query, write results. Diagnostics go to stderr; the
/// output stream carries nothing but formatted results.
pub fn try_run(invocation: &Invocation, stdout: &mut dyn Write) -> Result<(), FxError> {
    if invocation.output_pattern.is_some()
        && invocation.values_file.is_none()
        && invocation.inline_values.is_empty()
    {
        return Err(FxError::Usage("-p requires -i or -v".into()));
    }
    if invocation.values_file.is_some() && !invocation.inline_values.is_empty() {
        return Err(FxError::Usage("use either -i or -v, not both".into()));
    }

    let query_text = std::fs::read_to_string(&invocation.query_path).map_err(|source| {
        FxError::Io {
            path: invocation.query_path.display().to_string(),
            source,
        }
    })?;

    let base = match &invocation.load {
        Some(path) => load_dataset(path)?,
        None => Dataset::new(),
    };
    let engine = Engine::with_base(base);

    let rows: Vec<ParameterRow> = match (&invocation.values_file, &invocation.inline_values) {
        (Some(path), _) => params::rows_from_file(path)?,
        (None, values) => params::rows_from_inline(values)?,
    };

    if basil::has_parameters(&query_text) && rows.is_empty() {
        return Err(FxError::Usage(format!(
            "query has parameters ({}) but no values were given (-i or -v)",
            basil::required_parameters(&query_text).join(", ")
        )));
    }

    let expansions: Vec<(Option<ParameterRow>, Result<String, FxError>)> = if rows.is_empty() {
        vec![(None, Ok(query_text.clone()))]
    } else {
        basil::expand(&query_text, &rows)
            .into_iter()
            .zip(rows)
            .map(|(text, row)| (Some(row), text))
            .collect()
    };

    let mut output_file = match (&invocation.output, &invocation.output_pattern) {
        (Some(path), None) => Some(create_file(path)?),
        _ => None,
    };

    let mut row_errors = 0usize;
    for (row, expanded) in expansions {
        let result = expanded.and_then(|text| {
            execute_one(&engine, &text, invocation.format.as_deref())
        });
        match result {
            Ok(formatted) => {
                if let Some(pattern) = &invocation.output_pattern {
                    let row = row.clone().unwrap_or_default();
                    let name = basil::expand_pattern(pattern, &row)?;
                    let mut file = create_file(Path::new(&name))?;
                    file.write_all(formatted.as_bytes()).map_err(|source| {
                        FxError::Io {
                            path: name.clone(),
                            source,
                        }
                    })?;
                } else if let Some(file) = output_file.as_mut() {
                    file.write_all(formatted.as_bytes()).map_err(|source| {
                        FxError::Io {
                            path: invocation
                                .output
                                .as_ref()
                                .expect("output path set")
                                .display()
                                .to_string(),
                            source,
                        }
                    })?;
                } else {
                    stdout
                        .write_all(formatted.as_bytes())
                        .map_err(|source| FxError::Io {
                            path: "<stdout>".into(),
                            source,
                        })?;
                }
            }
            Err(e @ FxError::Usage(_)) => return Err(e),
            Err(e) => {
                eprintln!("fx: {e}");
                row_errors += 1;
            }
        }
    }
    if row_errors > 0 {
        return Err(FxError::Unsupported(format!(
            "{row_errors} parameter row(s) failed"
        )));
    }
    Ok(())
}

fn execute_one(
    engine: &Engine,
    query_text: &str,
    format: Option<&str>,
) -> Result<String, FxError> {
    let query = parse_query(query_text)?;
    let is_graph = matches!(query.form, QueryForm::Construct { .. });
    let format = match format {
        Some(token) => {
            let format = OutputFormat::parse(token)?;
            check_compatible(is_graph, format)?;
            format
        }
        None if is_graph => OutputFormat::Turtle,
        None => OutputFormat::Json,
    };
    let outcome = engine.execute_parsed(&query)?;
    format_results(&outcome, format)
}

fn create_file(path: &Path) -> Result<std::fs::File, FxError> {
    std::fs::File::create(path).map_err(|source| FxError::Io {
        path: path.display().to_string(),
        source,
    })
}
