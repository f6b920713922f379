//! A minimal SPARQL endpoint over HTTP/1.1: the query operation only,
//! on /sparql, answering per the Accept header. Requests are isolated;
//! the base dataset is shared immutably.

use std::io::Read;
use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use tiny_http::{Header, Request, Response, Server};

use crate::error::FxError;
use crate::formats::{format_results, OutputFormat};
use crate::query::{parse_query, Engine, QueryForm};
use crate::rdf::{parse_dataset, Dataset, RdfFormat};
use crate::source::SourcePolicy;

pub struct EndpointConfig {
    pub bind: String,
    pub port: u16,
    /// Base dataset, as `--load` on the CLI.
    pub base: Dataset,
    pub body_limit: usize,
    pub query_timeout: Duration,
    /// Disable file and command sources inside submitted queries.
    pub no_local_files: bool,
}

impl Default for EndpointConfig {
    fn default() -> EndpointConfig {
        EndpointConfig {
            bind: "127.0.0.1".into(),
            port: 3000,
            base: Dataset::new(),
            body_limit: 1024 * 1024,
            query_timeout: Duration::from_secs(30),
            no_local_files: false,
        }
    }
}

pub struct EndpointHandle {
    pub port: u16,
    server: Arc<Server>,
    worker: Option<thread::JoinHandle<()>>,
}

impl EndpointHandle {
    /// Stops accepting requests and joins the accept loop.
    pub fn shutdown(mut self) {
        self.server.unblock();
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}

/// Starts the endpoint on the configured address. Port 0 picks a free
/// port (reported in the returned handle).
pub fn serve(config: EndpointConfig) -> Result<EndpointHandle, FxError> {
    let address = format!("{}:{}", config.bind, config.port);
    let server = Server::http(&address).map_err(|e| FxError::Usage(format!(
        "cannot bind {address}: {e}"
    )))?;
    let server = Arc::new(server);
    let port = server
        .server_addr()
        .to_ip()
        .map(|a| a.port())
        .unwrap_or(config.port);

    let mut engine = Engine::with_base(config.base);
    if config.no_local_files {
        engine.set_policy(SourcePolicy::no_local_files());
    }
    let engine = Arc::new(engine);
    let body_limit = config.body_limit;
    let timeout = config.query_timeout;

    let accept_server = Arc::clone(&server);
    let worker = thread::spawn(move || {
        for request in accept_server.incoming_requests() {
            let engine = Arc::clone(&engine);
            thread::spawn(move || {
                handle_request(request, engine, body_limit, timeout);
            });
        }
    });

    Ok(EndpointHandle {
        port,
        server,
        worker: Some(worker),
    })
}

fn handle_request(mut request: Request, engine: Arc<Engine>, body_limit: usize, timeout: Duration) {
    let response = respond(&mut request, engine, body_limit, timeout);
    let (status, content_type, body) = match response {
        Ok((content_type, body)) => (200, content_type, body),
        Err((status, message)) => (status, "text/plain; charset=utf-8".to_owned(), message),
    };
    let header =
        Header::from_bytes(&b"Content-Type"[..], content_type.as_bytes()).expect("valid header");
    let _ = request.respond(
        Response::from_string(body)
            .with_status_code(status)
            .with_header(header),
    );
}

type HandlerResult = Result<(String, String), (u16, String)>;

fn respond(
    request: &mut Request,
    engine: Arc<Engine>,
    body_limit: usize,
    timeout: Duration,
) -> HandlerResult {
    let url = request.url().to_owned();
    let path = url.split('?').next().unwrap_or("");
    if path != "/sparql" {
        return Err((404, format!("no such resource {path}; query at /sparql\n")));
    }

    let accept = request
        .headers()
        .iter()
        .find(|h| h.field.equiv("accept"))
        .map(|h| h.value.as_str().to_owned())
        .unwrap_or_default();

    let query_text = match request.method() {
        tiny_http::Method::Get => {
            let query_string = url.split_once('?').map(|(_, q)| q).unwrap_or("");
            form_urlencoded::parse(query_string.as_bytes())
                .find(|(name, _)| name == "query")
                .map(|(_, value)| value.into_owned())
                .ok_or((400, "missing query parameter\n".to_owned()))?
        }
        tiny_http::Method::Post => {
            let content_type = request
                .headers()
                .iter()
                .find(|h| h.field.equiv("content-type"))
                .map(|h| h.value.as_str().to_owned())
                .unwrap_or_default();
            let mut body = Vec::new();
            let mut reader = request.as_reader().take(body_limit as u64 + 1);
            reader
                .read_to_end(&mut body)
                .map_err(|e| (400, format!("cannot read request body: {e}\n")))?;
            if body.len() > body_limit {
                return Err((400, format!("request body exceeds {body_limit} bytes\n")));
            }
            let body = String::from_utf8(body)
                .map_err(|_| (400, "request body is not UTF-8\n".to_owned()))?;
            if content_type.starts_with("application/sparql-query") {
                body
            } else if content_type.starts_with("application/x-www-form-urlencoded") {
                form_urlencoded::parse(body.as_bytes())
                    .find(|(name, _)| name == "query")
                    .map(|(_, value)| value.into_owned())
                    .ok_or((400, "missing query form field\n".to_owned()))?
            } else {
                return Err((
                    415,
                    "unsupported content type; use application/sparql-query or a query= form\n"
                        .to_owned(),
                ));
            }
        }
        other => return Err((405, format!("method {other} not allowed\n"))),
    };

    let query = parse_query(&query_text).map_err(|e| (400, format!("{e}\n")))?;
    let format = negotiate(&query.form, &accept);

    // The worker may outlive a timeout; its result is simply dropped.
    let (sender, receiver) = mpsc::channel();
    let worker_query = query.clone();
    thread::spawn(move || {
        let outcome = engine.execute_parsed(&worker_query);
        let _ = sender.send(outcome);
    });
    let outcome = match receiver.recv_timeout(timeout) {
        Ok(Ok(outcome)) => outcome,
        Ok(Err(e)) => return Err((500, format!("{e}\n"))),
        Err(_) => return Err((504, "query timed out\n".to_owned())),
    };

    let body = format_results(&outcome, format).map_err(|e| (500, format!("{e}\n")))?;
    Ok((format!("{}; charset=utf-8", format.content_type()), body))
}

/// Content negotiation: graphs default to Turtle (N-Triples on
/// request), solutions and booleans to SPARQL Results JSON (CSV on
/// request).
fn negotiate(form: &QueryForm, accept: &str) -> OutputFormat {
    let graph = matches!(form, QueryForm::Construct { .. });
    if graph {
        if accept.contains("application/n-triples") {
            OutputFormat::NTriples
        } else {
            OutputFormat::Turtle
        }
    } else if accept.contains("text/csv") {
        OutputFormat::Csv
    } else if accept.contains("application/sparql-results+xml") {
        OutputFormat::Xml
    } else {
        OutputFormat::Json
    }
}

/// Loads an RDF file or a directory of RDF files, as the CLI `--load`.
pub fn load_dataset(path: &std::path::Path) -> Result<Dataset, FxError> {
    let mut dataset = Dataset::new();
    let io_err = |source: std::io::Error| FxError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.is_dir() {
        let mut entries: Vec<std::path::PathBuf> = std::fs::read_dir(path)
            .map_err(io_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        for entry in entries {
            if entry.is_file() {
                if let Some(format) = RdfFormat::from_extension(&entry.to_string_lossy()) {
                    dataset.merge(read_rdf_file(&entry, format)?);
                }
            }
        }
        Ok(dataset)
    } else {
        let format = RdfFormat::from_extension(&path.to_string_lossy()).ok_or_else(|| {
            FxError::Usage(format!(
                "cannot tell the RDF format of {} (expected .nt, .ttl or .nq)",
                path.display()
            ))
        })?;
        read_rdf_file(path, format)
    }
}

fn read_rdf_file(path: &std::path::Path, format: RdfFormat) -> Result<Dataset, FxError> {
    let text = std::fs::read_to_string(path).map_err(|source| FxError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&text, format)
}
