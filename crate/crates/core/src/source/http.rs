//! HTTP(S) resolution: request plans built from `http.*` options and
//! executed with a plain blocking client.

use std::time::Duration;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::util::encode_query_component;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HttpMethod {
    Get,
    Post,
    Put,
    Delete,
    Head,
    Patch,
}

impl HttpMethod {
    fn parse(token: &str) -> Result<HttpMethod, FxError> {
        match token.to_ascii_uppercase().as_str() {
            "GET" => Ok(HttpMethod::Get),
            "POST" => Ok(HttpMethod::Post),
            "PUT" => Ok(HttpMethod::Put),
            "DELETE" => Ok(HttpMethod::Delete),
            "HEAD" => Ok(HttpMethod::Head),
            "PATCH" => Ok(HttpMethod::Patch),
            other => Err(FxError::InvalidConfig(format!(
                "unknown HTTP method \"{other}\""
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            HttpMethod::Get => "GET",
            HttpMethod::Post => "POST",
            HttpMethod::Put => "PUT",
            HttpMethod::Delete => "DELETE",
            HttpMethod::Head => "HEAD",
            HttpMethod::Patch => "PATCH",
        }
    }
}

/// Everything needed to perform the request: method, final URL (query
/// parameters appended), headers in order, optional basic auth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpRequestPlan {
    pub method: HttpMethod,
    pub url: String,
    pub headers: Vec<(String, String)>,
    pub basic_auth: Option<(String, String)>,
}

/// Builds the request plan from `http.method`, `http.header.*`,
/// `http.query.*` and `http.auth.*` options. Query parameters are
/// appended to any query string already on the URL; header names
/// deduplicate case-insensitively, last write wins.
pub fn build_http_request_plan(
    location: &str,
    opts: &FacadeOptions,
) -> Result<HttpRequestPlan, FxError> {
    let method = match opts.get("http.method") {
        Some(token) => HttpMethod::parse(token)?,
        None => HttpMethod::Get,
    };

    let mut url = location.to_owned();
    for (name, value) in opts.with_prefix("http.query.") {
        url.push(if url.contains('?') { '&' } else { '?' });
        url.push_str(&encode_query_component(name));
        url.push('=');
        url.push_str(&encode_query_component(value));
    }

    let mut headers: Vec<(String, String)> = Vec::new();
    for (name, value) in opts.with_prefix("http.header.") {
        if let Some(existing) = headers
            .iter_mut()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
        {
            existing.1 = value.to_owned();
        } else {
            headers.push((name.to_owned(), value.to_owned()));
        }
    }

    let basic_auth = match (opts.get("http.auth.user"), opts.get("http.auth.password")) {
        (Some(user), password) => Some((user.to_owned(), password.unwrap_or("").to_owned())),
        (None, Some(_)) => {
            return Err(FxError::InvalidConfig(
                "http.auth.password given without http.auth.user".into(),
            ))
        }
        (None, None) => None,
    };

    Ok(HttpRequestPlan {
        method,
        url,
        headers,
        basic_auth,
    })
}

pub struct HttpResponse {
    pub body: Vec<u8>,
    pub charset: Option<String>,
}

/// Executes the plan. Redirects are followed up to 5 hops; 30 s timeout.
/// Status >= 400 is an error carrying the URL and code.
pub fn execute(plan: &HttpRequestPlan) -> Result<HttpResponse, FxError> {
    use base64::Engine as _;

    let agent: ureq::Agent = ureq::Agent::config_builder()
        .max_redirects(5)
        .timeout_global(Some(Duration::from_secs(30)))
        .http_status_as_error(false)
        .build()
        .into();

    let transport_err = |e: ureq::Error| FxError::HttpTransport {
        url: plan.url.clone(),
        message: e.to_string(),
    };

    let mut builder = match plan.method {
        HttpMethod::Get => agent.get(&plan.url),
        HttpMethod::Delete => agent.delete(&plan.url),
        HttpMethod::Head => agent.head(&plan.url),
        HttpMethod::Post | HttpMethod::Put | HttpMethod::Patch => {
            // Body-carrying methods send an empty body; request payloads
            // are not part of the option surface.
            let mut b = match plan.method {
                HttpMethod::Post => agent.post(&plan.url),
                HttpMethod::Put => agent.put(&plan.url),
                _ => agent.patch(&plan.url),
            };
            for (name, value) in &plan.headers {
                b = b.header(name.as_str(), value.as_str());
            }
            if let Some((user, password)) = &plan.basic_auth {
                let token =
                    base64::engine::general_purpose::STANDARD.encode(format!("{user}:{password}"));
                b = b.header("Authorization", &format!("Basic {token}"));
            }
            let response = b.send_empty().map_err(transport_err)?;
            return read_response(plan, response);
        }
    };
    for (name, value) in &plan.headers {
        builder = builder.header(name.as_str(), value.as_str());
    }
    if let Some((user, password)) = &plan.basic_auth {
        let token = base64::engine::general_purpose::STANDARD.encode(format!("{user}:{password}"));
        builder = builder.header("Authorization", &format!("Basic {token}"));
    }
    let response = builder.call().map_err(transport_err)?;
    read_response(plan, response)
}

fn read_response(
    plan: &HttpRequestPlan,
    mut response: ureq::http::Response<ureq::Body>,
) -> Result<HttpResponse, FxError> {
    let status = response.status().as_u16();
    if status >= 400 {
        return Err(FxError::HttpStatus {
            url: plan.url.clone(),
            status,
        });
    }
    let charset = response
        .headers()
        .get("content-type")
        .and_then(|v| v.to_str().ok())
        .and_then(extract_charset);
    let body = response
        .body_mut()
        .read_to_vec()
        .map_err(|e| FxError::HttpTransport {
            url: plan.url.clone(),
            message: e.to_string(),
        })?;
    Ok(HttpResponse { body, charset })
}

fn extract_charset(content_type: &str) -> Option<String> {
    content_type.split(';').skip(1).find_map(|param| {
        let (name, value) = param.split_once('=')?;
        if name.trim().eq_ignore_ascii_case("charset") {
            Some(value.trim().trim_matches('"').to_owned())
        } else {
            None
        }
    })
}
