//! CSV: an ordered sequence of rows, each an ordered sequence of fields.
//! With `csv.headers=true` the first row names string slots; otherwise
//! cells land in membership slots. `csv.delimiter` retargets the parser
//! at any char-separated format (e.g. TSV).

use crate::config::FacadeOptions;
use crate::diag;
use crate::error::FxError;
use crate::rdf::{Graph, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::FacadeBuilder;
use crate::triplify::TriplifyContext;

pub fn triplify_csv(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let text = src.decode_text()?;
    let delimiter = delimiter(opts)?;
    let headers = opts.csv_headers()?;

    let mut reader = reader_for(&text, delimiter);
    let mut records = reader.records();

    let header_row: Option<Vec<String>> = if headers {
        match records.next() {
            Some(record) => Some(
                record
                    .map_err(|e| csv_error(src, e))?
                    .iter()
                    .map(str::to_owned)
                    .collect(),
            ),
            None => None,
        }
    } else {
        None
    };

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    for (row_number, record) in records.enumerate() {
        let record = record.map_err(|e| csv_error(src, e))?;
        let row = builder.next_container(&root);
        emit_row(
            &mut builder,
            &row,
            &record,
            header_row.as_deref(),
            row_number + 1,
        );
    }
    Ok(builder.finish())
}

pub(crate) fn reader_for(text: &str, delimiter: u8) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes())
}

pub(crate) fn emit_row(
    builder: &mut FacadeBuilder,
    row: &crate::triplify::builder::Node,
    record: &csv::StringRecord,
    headers: Option<&[String]>,
    row_number: usize,
) {
    match headers {
        Some(names) => {
            if record.len() != names.len() {
                diag::warn(format!(
                    "csv row {row_number}: {} cells do not match {} header fields",
                    record.len(),
                    names.len()
                ));
            }
            for (i, cell) in record.iter().enumerate() {
                match names.get(i) {
                    Some(name) => builder.key_value(row, name, Literal::string(cell)),
                    // Cells beyond the header fall back to index slots.
                    None => builder.value_at(row, i + 1, Literal::string(cell)),
                }
            }
        }
        None => {
            for cell in record.iter() {
                builder.next_value(row, Literal::string(cell));
            }
        }
    }
}

pub(crate) fn delimiter(opts: &FacadeOptions) -> Result<u8, FxError> {
    match opts.get("csv.delimiter") {
        None => Ok(b','),
        Some("\\t") | Some("tab") | Some("TAB") => Ok(b'\t'),
        Some(value) => {
            let mut chars = value.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii() => Ok(c as u8),
                _ => Err(FxError::InvalidConfig(format!(
                    "csv.delimiter must be a single character, got \"{value}\""
                ))),
            }
        }
    }
}

fn csv_error(src: &ResolvedSource, e: csv::Error) -> FxError {
    FxError::SourceSyntax {
        format: "CSV",
        origin: src.origin_label(),
        message: e.to_string(),
    }
}
