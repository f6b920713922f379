//! The parsed query tree: group patterns with their operators, the
//! expression language, and solution rows.

use std::collections::BTreeMap;
use std::fmt;

use crate::rdf::{Iri, Term};

/// A query variable. Anonymous variables come from blank nodes in
/// patterns; they join like any variable but are never projected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub anonymous: bool,
}

impl Var {
    pub fn named(name: impl Into<String>) -> Var {
        Var {
            name: name.into(),
            anonymous: false,
        }
    }

    pub fn anonymous(id: usize) -> Var {
        Var {
            name: format!("_anon{id}"),
            anonymous: true,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.name)
    }
}

/// One position of a triple pattern: a constant term or a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Term(Term),
    Var(Var),
}

impl PatternTerm {
    pub fn as_var(&self) -> Option<&Var> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ServiceTarget {
    Iri(Iri),
    Var(Var),
}

/// One operand of a group, in syntactic order.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Bgp(Vec<TriplePattern>),
    Group(GroupPattern),
    Union(Vec<GroupPattern>),
    Optional(GroupPattern),
    Filter(Expression),
    Bind { expr: Expression, var: Var },
    Values { vars: Vec<Var>, rows: Vec<Vec<Option<Term>>> },
    Service {
        target: ServiceTarget,
        pattern: GroupPattern,
        silent: bool,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupPattern {
    pub elements: Vec<Element>,
}

impl GroupPattern {
    /// Named variables mentioned anywhere in this group, in first-use
    /// order. This is what `SELECT *` projects.
    pub fn visible_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        fn push(out: &mut Vec<Var>, v: &Var) {
            if !v.anonymous && !out.contains(v) {
                out.push(v.clone());
            }
        }
        for element in &self.elements {
            match element {
                Element::Bgp(patterns) => {
                    for p in patterns {
                        for term in [&p.subject, &p.predicate, &p.object] {
                            if let PatternTerm::Var(v) = term {
                                push(out, v);
                            }
                        }
                    }
                }
                Element::Group(g) | Element::Optional(g) => g.collect_vars(out),
                Element::Union(branches) => {
                    for b in branches {
                        b.collect_vars(out);
                    }
                }
                Element::Filter(_) => {}
                Element::Bind { var, .. } => push(out, var),
                Element::Values { vars, .. } => {
                    for v in vars {
                        push(out, v);
                    }
                }
                Element::Service { target, pattern, .. } => {
                    if let ServiceTarget::Var(v) = target {
                        push(out, v);
                    }
                    pattern.collect_vars(out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    If,
    Coalesce,
    Bound,
    Concat,
    Str,
    StrLen,
    SubStr,
    StrStarts,
    StrEnds,
    Contains,
    Replace,
    Regex,
    LCase,
    UCase,
    Iri,
    BNode,
    StrDt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Term(Term),
    Var(Var),
    Or(Box<Expression>, Box<Expression>),
    And(Box<Expression>, Box<Expression>),
    Not(Box<Expression>),
    Compare(CmpOp, Box<Expression>, Box<Expression>),
    Arith(ArithOp, Box<Expression>, Box<Expression>),
    Neg(Box<Expression>),
    Builtin(Builtin, Vec<Expression>),
    /// Call by IRI: xsd casts and registered custom functions.
    Call(Iri, Vec<Expression>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderDirection {
    Asc,
    Desc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryForm {
    Select {
        distinct: bool,
        /// `None` projects every visible variable (`SELECT *`).
        projection: Option<Vec<Var>>,
    },
    Construct { template: Vec<TriplePattern> },
    Ask,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub form: QueryForm,
    pub pattern: GroupPattern,
    pub order_by: Vec<(OrderDirection, Expression)>,
    pub limit: Option<usize>,
    pub offset: Option<usize>,
}

impl Query {
    /// The variables a SELECT over this query answers with.
    pub fn projection_vars(&self) -> Vec<Var> {
        match &self.form {
            QueryForm::Select {
                projection: Some(vars),
                ..
            } => vars.clone(),
            _ => self.pattern.visible_vars(),
        }
    }
}

/// A variable-to-term binding row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    bindings: BTreeMap<Var, Term>,
}

impl Solution {
    pub fn new() -> Solution {
        Solution::default()
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn bind(&mut self, var: Var, term: Term) {
        self.bindings.insert(var, term);
    }

    pub fn bound(&self, var: &Var) -> bool {
        self.bindings.contains_key(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Merge when compatible: shared variables must agree.
    pub fn merge(&self, other: &Solution) -> Option<Solution> {
        let mut merged = self.clone();
        for (var, term) in other.iter() {
            match merged.bindings.get(var) {
                Some(existing) if existing != term => return None,
                Some(_) => {}
                None => {
                    merged.bindings.insert(var.clone(), term.clone());
                }
            }
        }
        Some(merged)
    }

    /// Keep only the given variables.
    pub fn project(&self, vars: &[Var]) -> Solution {
        let mut out = Solution::new();
        for var in vars {
            if let Some(term) = self.bindings.get(var) {
                out.bind(var.clone(), term.clone());
            }
        }
        out
    }

    /// A canonical text form used for DISTINCT and multiset comparison.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        for (var, term) in &self.bindings {
            out.push_str(&var.name);
            out.push('=');
            out.push_str(&crate::rdf::term_to_ntriples(term));
            out.push('\u{1}');
        }
        out
    }
}

impl FromIterator<(Var, Term)> for Solution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Solution {
        Solution {
            bindings: iter.into_iter().collect(),
        }
    }
}
