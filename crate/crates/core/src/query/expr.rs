//! Expression evaluation with SPARQL error semantics: errors are values
//! that make FILTER reject a row and leave BIND targets unbound.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use crate::functions::FunctionRegistry;
use crate::query::algebra::{ArithOp, Builtin, CmpOp, Expression, Solution};
use crate::rdf::{vocab, Iri, Literal, Term};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalError(pub String);

impl EvalError {
    fn new(msg: impl Into<String>) -> EvalError {
        EvalError(msg.into())
    }
}

type EvalResult = Result<Term, EvalError>;

pub struct ExprContext<'a> {
    pub registry: &'a FunctionRegistry,
    bnode_counter: &'a AtomicUsize,
}

impl<'a> ExprContext<'a> {
    pub fn new(registry: &'a FunctionRegistry, bnode_counter: &'a AtomicUsize) -> Self {
        ExprContext {
            registry,
            bnode_counter,
        }
    }
}

pub fn eval(expr: &Expression, solution: &Solution, ctx: &ExprContext) -> EvalResult {
    match expr {
        Expression::Term(t) => Ok(t.clone()),
        Expression::Var(v) => solution
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::new(format!("unbound variable ?{}", v.name))),
        Expression::Or(a, b) => {
            // Three-valued logic: true wins over error.
            match (truth(a, solution, ctx), truth(b, solution, ctx)) {
                (Ok(true), _) | (_, Ok(true)) => Ok(bool_term(true)),
                (Ok(false), Ok(false)) => Ok(bool_term(false)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
        Expression::And(a, b) => match (truth(a, solution, ctx), truth(b, solution, ctx)) {
            (Ok(false), _) | (_, Ok(false)) => Ok(bool_term(false)),
            (Ok(true), Ok(true)) => Ok(bool_term(true)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
        Expression::Not(inner) => truth(inner, solution, ctx).map(|b| bool_term(!b)),
        Expression::Compare(op, a, b) => {
            let a = eval(a, solution, ctx)?;
            let b = eval(b, solution, ctx)?;
            compare(*op, &a, &b).map(bool_term)
        }
        Expression::Arith(op, a, b) => {
            let a = eval(a, solution, ctx)?;
            let b = eval(b, solution, ctx)?;
            arithmetic(*op, &a, &b)
        }
        Expression::Neg(inner) => {
            let v = eval(inner, solution, ctx)?;
            match numeric(&v)? {
                Numeric::Integer(i) => Ok(Term::Literal(Literal::integer(-i))),
                Numeric::Double(d) => Ok(double_term(-d, vocab::XSD_DECIMAL)),
            }
        }
        Expression::Builtin(b, args) => builtin(*b, args, solution, ctx),
        Expression::Call(iri, args) => call_by_iri(iri, args, solution, ctx),
    }
}

/// Effective boolean value of an expression.
pub fn truth(expr: &Expression, solution: &Solution, ctx: &ExprContext) -> Result<bool, EvalError> {
    ebv(&eval(expr, solution, ctx)?)
}

pub fn ebv(term: &Term) -> Result<bool, EvalError> {
    let Term::Literal(lit) = term else {
        return Err(EvalError::new("effective boolean value of a non-literal"));
    };
    match lit.datatype().as_str() {
        vocab::XSD_BOOLEAN => match lit.lexical() {
            "true" | "1" => Ok(true),
            "false" | "0" => Ok(false),
            other => Err(EvalError::new(format!("invalid boolean \"{other}\""))),
        },
        vocab::XSD_STRING => Ok(!lit.lexical().is_empty()),
        _ if lit.language().is_some() => Ok(!lit.lexical().is_empty()),
        _ => match numeric(term) {
            Ok(Numeric::Integer(i)) => Ok(i != 0),
            Ok(Numeric::Double(d)) => Ok(d != 0.0 && !d.is_nan()),
            Err(_) => Err(EvalError::new("no effective boolean value")),
        },
    }
}

fn bool_term(b: bool) -> Term {
    Term::Literal(Literal::boolean(b))
}

enum Numeric {
    Integer(i64),
    Double(f64),
}

const INTEGER_TYPES: &[&str] = &[
    vocab::XSD_INT,
    vocab::XSD_INTEGER,
    "http://www.w3.org/2001/XMLSchema#long",
    "http://www.w3.org/2001/XMLSchema#short",
    "http://www.w3.org/2001/XMLSchema#byte",
    "http://www.w3.org/2001/XMLSchema#nonNegativeInteger",
    "http://www.w3.org/2001/XMLSchema#positiveInteger",
    "http://www.w3.org/2001/XMLSchema#unsignedInt",
    "http://www.w3.org/2001/XMLSchema#unsignedLong",
];

const DECIMAL_TYPES: &[&str] = &[
    vocab::XSD_FLOAT,
    vocab::XSD_DOUBLE,
    vocab::XSD_DECIMAL,
];

fn numeric(term: &Term) -> Result<Numeric, EvalError> {
    let Term::Literal(lit) = term else {
        return Err(EvalError::new("not a numeric literal"));
    };
    let dt = lit.datatype().as_str();
    if INTEGER_TYPES.contains(&dt) {
        lit.lexical()
            .trim()
            .parse::<i64>()
            .map(Numeric::Integer)
            .map_err(|_| EvalError::new(format!("invalid integer \"{}\"", lit.lexical())))
    } else if DECIMAL_TYPES.contains(&dt) {
        lit.lexical()
            .trim()
            .parse::<f64>()
            .map(Numeric::Double)
            .map_err(|_| EvalError::new(format!("invalid number \"{}\"", lit.lexical())))
    } else {
        Err(EvalError::new("not a numeric literal"))
    }
}

fn double_term(value: f64, datatype: &str) -> Term {
    let mut lexical = format!("{value}");
    if !lexical.contains('.') && !lexical.contains('e') && !lexical.contains("inf")
        && !lexical.contains("NaN")
    {
        lexical.push_str(".0");
    }
    Term::Literal(Literal::typed(lexical, Iri::new_unchecked(datatype)))
}

fn compare(op: CmpOp, a: &Term, b: &Term) -> Result<bool, EvalError> {
    if matches!(op, CmpOp::Eq | CmpOp::Ne) {
        let equal = terms_equal(a, b)?;
        return Ok(if op == CmpOp::Eq { equal } else { !equal });
    }
    let ordering = order_comparable(a, b)?;
    Ok(match op {
        CmpOp::Lt => ordering == Ordering::Less,
        CmpOp::Le => ordering != Ordering::Greater,
        CmpOp::Gt => ordering == Ordering::Greater,
        CmpOp::Ge => ordering != Ordering::Less,
        CmpOp::Eq | CmpOp::Ne => unreachable!(),
    })
}

fn terms_equal(a: &Term, b: &Term) -> Result<bool, EvalError> {
    // Numeric literals compare by value across datatypes.
    if let (Ok(x), Ok(y)) = (numeric(a), numeric(b)) {
        return Ok(match (x, y) {
            (Numeric::Integer(i), Numeric::Integer(j)) => i == j,
            (Numeric::Integer(i), Numeric::Double(d))
            | (Numeric::Double(d), Numeric::Integer(i)) => d == i as f64,
            (Numeric::Double(d), Numeric::Double(e)) => d == e,
        });
    }
    Ok(a == b)
}

fn order_comparable(a: &Term, b: &Term) -> Result<Ordering, EvalError> {
    if let (Ok(x), Ok(y)) = (numeric(a), numeric(b)) {
        let (x, y) = match (x, y) {
            (Numeric::Integer(i), Numeric::Integer(j)) => {
                return Ok(i.cmp(&j));
            }
            (Numeric::Integer(i), Numeric::Double(d)) => (i as f64, d),
            (Numeric::Double(d), Numeric::Integer(j)) => (d, j as f64),
            (Numeric::Double(d), Numeric::Double(e)) => (d, e),
        };
        return x
            .partial_cmp(&y)
            .ok_or_else(|| EvalError::new("NaN is not comparable"));
    }
    match (a, b) {
        (Term::Literal(la), Term::Literal(lb))
            if string_like(la) && string_like(lb) =>
        {
            Ok(la.lexical().cmp(lb.lexical()))
        }
        (Term::Literal(la), Term::Literal(lb))
            if la.datatype().as_str() == vocab::XSD_BOOLEAN
                && lb.datatype().as_str() == vocab::XSD_BOOLEAN =>
        {
            Ok(la.lexical().cmp(lb.lexical()))
        }
        _ => Err(EvalError::new("terms are not comparable")),
    }
}

fn string_like(lit: &Literal) -> bool {
    lit.is_plain_string() || lit.language().is_some()
}

fn arithmetic(op: ArithOp, a: &Term, b: &Term) -> EvalResult {
    let x = numeric(a)?;
    let y = numeric(b)?;
    match (x, y) {
        (Numeric::Integer(i), Numeric::Integer(j)) => match op {
            ArithOp::Add => Ok(Term::Literal(Literal::integer(
                i.checked_add(j).ok_or_else(|| EvalError::new("overflow"))?,
            ))),
            ArithOp::Sub => Ok(Term::Literal(Literal::integer(
                i.checked_sub(j).ok_or_else(|| EvalError::new("overflow"))?,
            ))),
            ArithOp::Mul => Ok(Term::Literal(Literal::integer(
                i.checked_mul(j).ok_or_else(|| EvalError::new("overflow"))?,
            ))),
            // Integer division produces a decimal, per the operator map.
            ArithOp::Div => {
                if j == 0 {
                    return Err(EvalError::new("division by zero"));
                }
                Ok(double_term(i as f64 / j as f64, vocab::XSD_DECIMAL))
            }
        },
        (x, y) => {
            let i = match x {
                Numeric::Integer(i) => i as f64,
                Numeric::Double(d) => d,
            };
            let j = match y {
                Numeric::Integer(i) => i as f64,
                Numeric::Double(d) => d,
            };
            let value = match op {
                ArithOp::Add => i + j,
                ArithOp::Sub => i - j,
                ArithOp::Mul => i * j,
                ArithOp::Div => {
                    if j == 0.0 {
                        return Err(EvalError::new("division by zero"));
                    }
                    i / j
                }
            };
            Ok(double_term(value, vocab::XSD_DOUBLE))
        }
    }
}

fn string_arg(term: &Term) -> Result<String, EvalError> {
    match term {
        Term::Literal(lit) if string_like(lit) => Ok(lit.lexical().to_owned()),
        _ => Err(EvalError::new("expected a string literal")),
    }
}

fn builtin(
    b: Builtin,
    args: &[Expression],
    solution: &Solution,
    ctx: &ExprContext,
) -> EvalResult {
    let arity = |expected: usize| {
        if args.len() == expected {
            Ok(())
        } else {
            Err(EvalError::new(format!(
                "{b:?} takes {expected} argument(s), got {}",
                args.len()
            )))
        }
    };
    match b {
        Builtin::If => {
            arity(3)?;
            if truth(&args[0], solution, ctx)? {
                eval(&args[1], solution, ctx)
            } else {
                eval(&args[2], solution, ctx)
            }
        }
        Builtin::Coalesce => {
            for arg in args {
                if let Ok(t) = eval(arg, solution, ctx) {
                    return Ok(t);
                }
            }
            Err(EvalError::new("COALESCE: all arguments errored"))
        }
        Builtin::Bound => {
            arity(1)?;
            match &args[0] {
                Expression::Var(v) => Ok(bool_term(solution.bound(v))),
                _ => Err(EvalError::new("BOUND takes a variable")),
            }
        }
        Builtin::Concat => {
            let mut out = String::new();
            for arg in args {
                out.push_str(&string_arg(&eval(arg, solution, ctx)?)?);
            }
            Ok(Term::string(out))
        }
        Builtin::Str => {
            arity(1)?;
            match eval(&args[0], solution, ctx)? {
                Term::Iri(iri) => Ok(Term::string(iri.as_str())),
                Term::Literal(lit) => Ok(Term::string(lit.lexical())),
                Term::Blank(_) => Err(EvalError::new("STR of a blank node")),
            }
        }
        Builtin::StrLen => {
            arity(1)?;
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            Ok(Term::Literal(Literal::integer(s.chars().count() as i64)))
        }
        Builtin::SubStr => {
            if args.len() != 2 && args.len() != 3 {
                return Err(EvalError::new("SUBSTR takes 2 or 3 arguments"));
            }
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            let start = match numeric(&eval(&args[1], solution, ctx)?)? {
                Numeric::Integer(i) => i,
                Numeric::Double(d) => d.round() as i64,
            };
            let chars: Vec<char> = s.chars().collect();
            // XPath substring: 1-based start.
            let from = (start.max(1) - 1) as usize;
            let taken: String = match args.get(2) {
                Some(len_expr) => {
                    let len = match numeric(&eval(len_expr, solution, ctx)?)? {
                        Numeric::Integer(i) => i,
                        Numeric::Double(d) => d.round() as i64,
                    };
                    let end = (start + len - 1).max(0) as usize;
                    chars
                        .iter()
                        .take(end.min(chars.len()))
                        .skip(from.min(chars.len()))
                        .collect()
                }
                None => chars.iter().skip(from.min(chars.len())).collect(),
            };
            Ok(Term::string(taken))
        }
        Builtin::StrStarts => {
            arity(2)?;
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            let t = string_arg(&eval(&args[1], solution, ctx)?)?;
            Ok(bool_term(s.starts_with(&t)))
        }
        Builtin::StrEnds => {
            arity(2)?;
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            let t = string_arg(&eval(&args[1], solution, ctx)?)?;
            Ok(bool_term(s.ends_with(&t)))
        }
        Builtin::Contains => {
            arity(2)?;
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            let t = string_arg(&eval(&args[1], solution, ctx)?)?;
            Ok(bool_term(s.contains(&t)))
        }
        Builtin::Replace => {
            if args.len() != 3 && args.len() != 4 {
                return Err(EvalError::new("REPLACE takes 3 or 4 arguments"));
            }
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            let pattern = string_arg(&eval(&args[1], solution, ctx)?)?;
            let replacement = string_arg(&eval(&args[2], solution, ctx)?)?;
            let flags = match args.get(3) {
                Some(f) => string_arg(&eval(f, solution, ctx)?)?,
                None => String::new(),
            };
            let regex = build_regex(&pattern, &flags)?;
            Ok(Term::string(
                regex.replace_all(&s, replacement.as_str()).into_owned(),
            ))
        }
        Builtin::Regex => {
            if args.len() != 2 && args.len() != 3 {
                return Err(EvalError::new("REGEX takes 2 or 3 arguments"));
            }
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            let pattern = string_arg(&eval(&args[1], solution, ctx)?)?;
            let flags = match args.get(2) {
                Some(f) => string_arg(&eval(f, solution, ctx)?)?,
                None => String::new(),
            };
            let regex = build_regex(&pattern, &flags)?;
            Ok(bool_term(regex.is_match(&s)))
        }
        Builtin::LCase => {
            arity(1)?;
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            Ok(Term::string(s.to_lowercase()))
        }
        Builtin::UCase => {
            arity(1)?;
            let s = string_arg(&eval(&args[0], solution, ctx)?)?;
            Ok(Term::string(s.to_uppercase()))
        }
        Builtin::Iri => {
            arity(1)?;
            match eval(&args[0], solution, ctx)? {
                Term::Iri(iri) => Ok(Term::Iri(iri)),
                Term::Literal(lit) if string_like(&lit) => {
                    Term::iri(lit.lexical().to_owned()).map_err(|e| EvalError::new(e.to_string()))
                }
                _ => Err(EvalError::new("IRI expects a string or an IRI")),
            }
        }
        Builtin::BNode => {
            let n = ctx.bnode_counter.fetch_add(1, AtomicOrdering::Relaxed);
            Ok(Term::blank(format!("expr{n}")))
        }
        Builtin::StrDt => {
            arity(2)?;
            let lexical = string_arg(&eval(&args[0], solution, ctx)?)?;
            match eval(&args[1], solution, ctx)? {
                Term::Iri(dt) => Ok(Term::Literal(Literal::typed(lexical, dt))),
                _ => Err(EvalError::new("STRDT datatype must be an IRI")),
            }
        }
    }
}

fn build_regex(pattern: &str, flags: &str) -> Result<regex::Regex, EvalError> {
    let mut prefix = String::new();
    for flag in flags.chars() {
        match flag {
            'i' => prefix.push_str("(?i)"),
            's' => prefix.push_str("(?s)"),
            'm' => prefix.push_str("(?m)"),
            'x' => prefix.push_str("(?x)"),
            other => return Err(EvalError::new(format!("unsupported regex flag '{other}'"))),
        }
    }
    regex::Regex::new(&format!("{prefix}{pattern}"))
        .map_err(|e| EvalError::new(format!("invalid regex: {e}")))
}

/// Calls by IRI: XSD constructor casts, then the custom registry.
fn call_by_iri(
    iri: &Iri,
    args: &[Expression],
    solution: &Solution,
    ctx: &ExprContext,
) -> EvalResult {
    if let Some(local) = iri.as_str().strip_prefix(vocab::XSD_NS) {
        if args.len() != 1 {
            return Err(EvalError::new(format!("xsd:{local} takes one argument")));
        }
        let value = eval(&args[0], solution, ctx)?;
        return xsd_cast(local, &value);
    }
    let f = ctx
        .registry
        .function(iri.as_str())
        .ok_or_else(|| EvalError::new(format!("unknown function <{}>", iri.as_str())))?;
    let mut values = Vec::with_capacity(args.len());
    for arg in args {
        values.push(eval(arg, solution, ctx)?);
    }
    f(&values).map_err(EvalError)
}

fn xsd_cast(local: &str, value: &Term) -> EvalResult {
    let lexical = match value {
        Term::Iri(iri) if local == "string" => iri.as_str().to_owned(),
        Term::Iri(_) => return Err(EvalError::new("cannot cast an IRI")),
        Term::Blank(_) => return Err(EvalError::new("cannot cast a blank node")),
        Term::Literal(lit) => lit.lexical().trim().to_owned(),
    };
    match local {
        "string" => Ok(Term::string(lexical)),
        "boolean" => match lexical.as_str() {
            "true" | "1" => Ok(bool_term(true)),
            "false" | "0" => Ok(bool_term(false)),
            _ => Err(EvalError::new(format!("invalid boolean \"{lexical}\""))),
        },
        "int" | "integer" | "long" => {
            let n: i64 = lexical
                .parse()
                .map_err(|_| EvalError::new(format!("invalid integer \"{lexical}\"")))?;
            let dt = if local == "int" {
                vocab::XSD_INT
            } else {
                vocab::XSD_INTEGER
            };
            Ok(Term::Literal(Literal::typed(
                n.to_string(),
                Iri::new_unchecked(dt),
            )))
        }
        "float" | "double" | "decimal" => {
            let v: f64 = lexical
                .parse()
                .map_err(|_| EvalError::new(format!("invalid number \"{lexical}\"")))?;
            let dt = match local {
                "float" => vocab::XSD_FLOAT,
                "double" => vocab::XSD_DOUBLE,
                _ => vocab::XSD_DECIMAL,
            };
            Ok(double_term(v, dt))
        }
        other => Err(EvalError::new(format!("unsupported cast xsd:{other}"))),
    }
}

/// The total order used by ORDER BY: unbound, then blanks, IRIs and
/// literals; comparable literals by value; a term-kind/lexical tiebreak
/// keeps the order total.
pub fn order_terms(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => {
            let rank = |t: &Term| match t {
                Term::Blank(_) => 0,
                Term::Iri(_) => 1,
                Term::Literal(_) => 2,
            };
            rank(a).cmp(&rank(b)).then_with(|| {
                if let Ok(ordering) = order_comparable(a, b) {
                    return ordering;
                }
                format!("{a:?}").cmp(&format!("{b:?}"))
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::algebra::Var;

    fn ctx_fixture() -> (FunctionRegistry, AtomicUsize) {
        (FunctionRegistry::default(), AtomicUsize::new(0))
    }

    fn eval_str(expr: &Expression) -> EvalResult {
        let (registry, counter) = ctx_fixture();
        let ctx = ExprContext::new(&registry, &counter);
        eval(expr, &Solution::new(), &ctx)
    }

    fn lit(s: &str) -> Expression {
        Expression::Term(Term::string(s))
    }

    fn int(i: i64) -> Expression {
        Expression::Term(Term::Literal(Literal::integer(i)))
    }

    #[test]
    fn substr_is_one_based() {
        // SUBSTR("A00001", 1, 1) = "A"; SUBSTR("A00001", 2, 3) = "000".
        let e = Expression::Builtin(Builtin::SubStr, vec![lit("A00001"), int(1), int(1)]);
        assert_eq!(eval_str(&e).unwrap(), Term::string("A"));
        let e = Expression::Builtin(Builtin::SubStr, vec![lit("A00001"), int(2), int(3)]);
        assert_eq!(eval_str(&e).unwrap(), Term::string("000"));
        let e = Expression::Builtin(Builtin::SubStr, vec![lit("AR00123"), int(3), int(3)]);
        assert_eq!(eval_str(&e).unwrap(), Term::string("001"));
    }

    #[test]
    fn concat_and_cases() {
        let e = Expression::Builtin(Builtin::Concat, vec![lit("a/"), lit("B"), lit(".json")]);
        assert_eq!(eval_str(&e).unwrap(), Term::string("a/B.json"));
        let e = Expression::Builtin(
            Builtin::LCase,
            vec![Expression::Builtin(Builtin::Concat, vec![lit("A"), lit("B")])],
        );
        assert_eq!(eval_str(&e).unwrap(), Term::string("ab"));
    }

    #[test]
    fn numeric_comparison_across_types() {
        let a = Term::Literal(Literal::int(5));
        let b = Term::Literal(Literal::typed("5.0", Iri::new_unchecked(vocab::XSD_FLOAT)));
        assert!(compare(CmpOp::Eq, &a, &b).unwrap());
        assert!(compare(CmpOp::Le, &a, &b).unwrap());
        let c = Term::Literal(Literal::int(7));
        assert!(compare(CmpOp::Lt, &a, &c).unwrap());
    }

    #[test]
    fn or_true_absorbs_error() {
        let unbound = Expression::Var(Var::named("missing"));
        let e = Expression::Or(
            Box::new(Expression::Term(bool_term(true))),
            Box::new(unbound.clone()),
        );
        assert_eq!(eval_str(&e).unwrap(), bool_term(true));
        // false || error => error
        let e = Expression::Or(Box::new(Expression::Term(bool_term(false))), Box::new(unbound));
        assert!(eval_str(&e).is_err());
    }

    #[test]
    fn if_branches_on_ebv() {
        let e = Expression::Builtin(
            Builtin::If,
            vec![
                Expression::Builtin(Builtin::StrStarts, vec![lit("AR123"), lit("AR")]),
                lit("yes"),
                lit("no"),
            ],
        );
        assert_eq!(eval_str(&e).unwrap(), Term::string("yes"));
    }

    #[test]
    fn iri_builtin_validates() {
        let e = Expression::Builtin(Builtin::Iri, vec![lit("http://x/y")]);
        assert_eq!(eval_str(&e).unwrap(), Term::iri_unchecked("http://x/y"));
        let e = Expression::Builtin(Builtin::Iri, vec![lit("not absolute")]);
        assert!(eval_str(&e).is_err());
    }

    #[test]
    fn coalesce_takes_first_success() {
        let e = Expression::Builtin(
            Builtin::Coalesce,
            vec![Expression::Var(Var::named("missing")), lit("fallback")],
        );
        assert_eq!(eval_str(&e).unwrap(), Term::string("fallback"));
    }

    #[test]
    fn xsd_casts() {
        let e = Expression::Call(Iri::new_unchecked(vocab::XSD_INT), vec![lit("42")]);
        let result = eval_str(&e).unwrap();
        assert_eq!(result.as_literal().unwrap().lexical(), "42");
        assert_eq!(result.as_literal().unwrap().datatype().as_str(), vocab::XSD_INT);
        let e = Expression::Call(Iri::new_unchecked(vocab::XSD_BOOLEAN), vec![lit("nope")]);
        assert!(eval_str(&e).is_err());
    }

    #[test]
    fn arithmetic_promotion() {
        let e = Expression::Arith(ArithOp::Add, Box::new(int(2)), Box::new(int(3)));
        assert_eq!(
            eval_str(&e).unwrap().as_literal().unwrap().lexical(),
            "5"
        );
        let e = Expression::Arith(ArithOp::Div, Box::new(int(7)), Box::new(int(2)));
        assert_eq!(
            eval_str(&e).unwrap().as_literal().unwrap().lexical(),
            "3.5"
        );
        let e = Expression::Arith(ArithOp::Div, Box::new(int(1)), Box::new(int(0)));
        assert!(eval_str(&e).is_err());
    }

    #[test]
    fn regex_flags() {
        let e = Expression::Builtin(Builtin::Regex, vec![lit("Hello"), lit("^h"), lit("i")]);
        assert_eq!(eval_str(&e).unwrap(), bool_term(true));
        let e = Expression::Builtin(Builtin::Regex, vec![lit("Hello"), lit("^h")]);
        assert_eq!(eval_str(&e).unwrap(), bool_term(false));
    }

    #[test]
    fn replace_with_backreferences() {
        let e = Expression::Builtin(
            Builtin::Replace,
            vec![lit("a1b2"), lit("([a-z])([0-9])"), lit("$2$1")],
        );
        assert_eq!(eval_str(&e).unwrap(), Term::string("1a2b"));
    }

    #[test]
    fn custom_function_via_registry() {
        let e = Expression::Call(
            Iri::new_unchecked(format!("{}entity", vocab::FX_NS)),
            vec![
                Expression::Term(Term::iri_unchecked("http://e/")),
                lit("x"),
            ],
        );
        assert_eq!(eval_str(&e).unwrap(), Term::iri_unchecked("http://e/x"));
    }
}
