use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Query CSV, JSON, XML, HTML, YAML, Markdown, BibTeX, text, binary
/// files, directories and archives with a SPARQL subset, as if they
/// were RDF.
#[derive(Parser)]
#[command(name = "fx", version, disable_help_flag = false)]
struct Cli {
    /// Query file to execute
    #[arg(short = 'q', value_name = "FILE")]
    query: PathBuf,

    /// Output format: JSON, XML, CSV, TEXT (SELECT/ASK) or TTL, NT, NQ (CONSTRUCT)
    #[arg(short = 'f', value_name = "FORMAT")]
    format: Option<String>,

    /// Write the result to a file instead of standard output
    #[arg(short = 'o', value_name = "FILE")]
    output: Option<PathBuf>,

    /// SPARQL result set file (JSON or CSV) with parameter bindings
    #[arg(short = 'i', value_name = "FILE")]
    input_values: Option<PathBuf>,

    /// Inline parameter value as name=value; repeat for more variables
    #[arg(short = 'v', value_name = "NAME=VALUE")]
    values: Vec<String>,

    /// Output file-name pattern with ?_name placeholders, one file per row
    #[arg(short = 'p', value_name = "PATTERN")]
    output_pattern: Option<String>,

    /// Load an RDF file (or directory of files) as the base dataset
    #[arg(short = 'l', long = "load", value_name = "PATH")]
    load: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = fx_cli::Invocation {
        query_path: cli.query,
        format: cli.format,
        output: cli.output,
        values_file: cli.input_values,
        inline_values: cli.values,
        output_pattern: cli.output_pattern,
        load: cli.load,
    };
    ExitCode::from(fx_cli::run(&invocation) as u8)
}
