//! The query engine: parsing, evaluation, SERVICE interception,
//! triple-filtering and sliced execution.

pub mod algebra;
mod eval;
mod expr;
mod filter;
mod inline;
mod parser;
mod service;
mod slice;

pub use algebra::{Query, QueryForm, Solution, Var};
pub use filter::build_triple_filter;
pub use inline::{extract_inline_properties, InlineConfig};
pub use parser::parse_query;

#[cfg(any(test, feature = "testing"))]
pub(crate) use eval::{eval_group, Counters, Scope};
#[cfg(any(test, feature = "testing"))]
pub(crate) use slice::{map_units_parallel, map_units_sequential};

use crate::error::FxError;
use crate::functions::FunctionRegistry;
use crate::rdf::{Dataset, Graph};
use crate::source::SourcePolicy;

/// The answer to one query: solution rows for SELECT, a graph for
/// CONSTRUCT, a boolean for ASK.
#[derive(Debug)]
pub enum QueryOutcome {
    Solutions {
        variables: Vec<String>,
        rows: Vec<Solution>,
    },
    Graph(Graph),
    Boolean(bool),
}

/// One engine instance: the base dataset queried by patterns outside
/// SERVICE clauses, the function registry, and the source policy.
/// Cheap to share across threads; each execution is isolated.
pub struct Engine {
    pub(crate) base: Dataset,
    pub(crate) registry: FunctionRegistry,
    pub(crate) policy: SourcePolicy,
}

impl Engine {
    pub fn new() -> Engine {
        Engine {
            base: Dataset::new(),
            registry: FunctionRegistry::default(),
            policy: SourcePolicy::default(),
        }
    }

    pub fn with_base(base: Dataset) -> Engine {
        Engine {
            base,
            ..Engine::new()
        }
    }

    pub fn set_policy(&mut self, policy: SourcePolicy) {
        self.policy = policy;
    }

    pub fn registry_mut(&mut self) -> &mut FunctionRegistry {
        &mut self.registry
    }

    pub fn base(&self) -> &Dataset {
        &self.base
    }

    pub fn execute(&self, query_text: &str) -> Result<QueryOutcome, FxError> {
        let query = parser::parse_query(query_text)?;
        self.execute_parsed(&query)
    }

    pub fn execute_parsed(&self, query: &Query) -> Result<QueryOutcome, FxError> {
        match eval::evaluate_query(self, query)? {
            eval::QueryOutcomeInner::Solutions { variables, rows } => Ok(QueryOutcome::Solutions {
                variables: variables.into_iter().map(|v| v.name).collect(),
                rows,
            }),
            eval::QueryOutcomeInner::Graph(g) => Ok(QueryOutcome::Graph(g)),
            eval::QueryOutcomeInner::Boolean(b) => Ok(QueryOutcome::Boolean(b)),
        }
    }
}

impl Default for Engine {
    fn default() -> Engine {
        Engine::new()
    }
}
