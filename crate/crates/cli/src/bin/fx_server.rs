use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use fx_core::endpoint::{load_dataset, serve, EndpointConfig};

/// Serve the facade engine as a SPARQL endpoint on /sparql.
#[derive(Parser)]
#[command(name = "fx-server", version)]
struct Cli {
    /// Address to bind
    #[arg(long, default_value = "127.0.0.1")]
    bind: String,

    /// Port to listen on (0 picks a free port)
    #[arg(long, default_value_t = 3000)]
    port: u16,

    /// Load an RDF file (or directory of files) as the base dataset
    #[arg(short = 'l', long = "load", value_name = "PATH")]
    load: Option<PathBuf>,

    /// Reject file and command sources in submitted queries
    #[arg(long)]
    no_local_files: bool,

    /// Per-query timeout in seconds
    #[arg(long, default_value_t = 30)]
    timeout: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base = match &cli.load {
        Some(path) => match load_dataset(path) {
            Ok(dataset) => dataset,
            Err(e) => {
                eprintln!("fx-server: {e}");
                return ExitCode::from(1);
            }
        },
        None => Default::default(),
    };
    let config = EndpointConfig {
        bind: cli.bind,
        port: cli.port,
        base,
        query_timeout: Duration::from_secs(cli.timeout.max(1)),
        no_local_files: cli.no_local_files,
        ..EndpointConfig::default()
    };
    match serve(config) {
        Ok(handle) => {
            eprintln!("fx-server: listening on port {}", handle.port);
            // Serve until the process is stopped.
            loop {
                std::thread::park();
            }
        }
        Err(e) => {
            eprintln!("fx-server: {e}");
            ExitCode::from(1)
        }
    }
}
