//! Recursive-descent parser for the supported SPARQL subset: SELECT
//! (DISTINCT, ORDER BY, LIMIT, OFFSET), CONSTRUCT, ASK; group patterns
//! with OPTIONAL, UNION, FILTER, BIND, VALUES and SERVICE; the
//! expression grammar with the builtins the engine evaluates. Anything
//! outside the subset fails with an error naming the construct.

use std::collections::HashMap;

use crate::error::FxError;
use crate::query::algebra::{
    ArithOp, Builtin, CmpOp, Element, Expression, GroupPattern, OrderDirection, PatternTerm,
    Query, QueryForm, ServiceTarget, TriplePattern, Var,
};
use crate::rdf::{vocab, Iri, Literal, Term};

pub fn parse_query(text: &str) -> Result<Query, FxError> {
    let mut parser = QueryParser::new(text);
    let query = parser.parse()?;
    Ok(query)
}

struct QueryParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: HashMap<String, String>,
    anon_counter: usize,
    template_blank_counter: usize,
}

impl QueryParser {
    fn new(text: &str) -> QueryParser {
        QueryParser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            prefixes: HashMap::new(),
            anon_counter: 0,
            template_blank_counter: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> FxError {
        FxError::QuerySyntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn expect(&mut self, expected: char) -> Result<(), FxError> {
        self.skip_ws();
        match self.bump() {
            Some(c) if c == expected => Ok(()),
            Some(c) => Err(self.error(format!("expected '{expected}', found '{c}'"))),
            None => Err(self.error(format!("expected '{expected}', found end of query"))),
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    /// Case-insensitive keyword match; consumes it when it is not glued
    /// to a name character.
    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        for (i, expected) in word.chars().enumerate() {
            match self.peek_at(i) {
                Some(c) if c.eq_ignore_ascii_case(&expected) => {}
                _ => return false,
            }
        }
        if let Some(next) = self.peek_at(word.len()) {
            if next.is_alphanumeric() || next == '_' {
                return false;
            }
        }
        for _ in 0..word.len() {
            self.bump();
        }
        true
    }

    fn peek_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        for (i, expected) in word.chars().enumerate() {
            match self.peek_at(i) {
                Some(c) if c.eq_ignore_ascii_case(&expected) => {}
                _ => return false,
            }
        }
        match self.peek_at(word.len()) {
            Some(next) if next.is_alphanumeric() || next == '_' => false,
            _ => true,
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    // ---- top level ----

    fn parse(&mut self) -> Result<Query, FxError> {
        loop {
            if self.keyword("PREFIX") {
                self.read_prefix_decl()?;
                continue;
            }
            if self.peek_keyword("BASE") {
                return Err(self.error("BASE declarations are not supported"));
            }
            break;
        }
        self.skip_ws();
        let query = if self.keyword("SELECT") {
            self.parse_select()?
        } else if self.keyword("CONSTRUCT") {
            self.parse_construct()?
        } else if self.keyword("ASK") {
            self.keyword("WHERE");
            let pattern = self.parse_group()?;
            Query {
                form: QueryForm::Ask,
                pattern,
                order_by: Vec::new(),
                limit: None,
                offset: None,
            }
        } else if self.peek_keyword("DESCRIBE") {
            return Err(self.error("DESCRIBE queries are not supported"));
        } else {
            return Err(self.error("expected SELECT, CONSTRUCT or ASK"));
        };
        if !self.at_end() {
            return Err(self.error("unexpected trailing content"));
        }
        Ok(query)
    }

    fn read_prefix_decl(&mut self) -> Result<(), FxError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_whitespace() {
                return Err(self.error("expected ':' in PREFIX declaration"));
            }
            name.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.read_iri_ref()?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn parse_select(&mut self) -> Result<Query, FxError> {
        let distinct = self.keyword("DISTINCT");
        if self.keyword("REDUCED") {
            return Err(self.error("REDUCED is not supported"));
        }
        self.skip_ws();
        let projection = if self.peek() == Some('*') {
            self.bump();
            None
        } else {
            let mut vars = Vec::new();
            loop {
                self.skip_ws();
                match self.peek() {
                    Some('?') | Some('$') => vars.push(self.read_var()?),
                    Some('(') => {
                        return Err(self.error(
                            "projection expressions (SELECT (expr AS ?v)) are not supported",
                        ))
                    }
                    _ => break,
                }
            }
            if vars.is_empty() {
                return Err(self.error("SELECT needs '*' or at least one variable"));
            }
            Some(vars)
        };
        self.keyword("WHERE");
        let pattern = self.parse_group()?;
        let (order_by, limit, offset) = self.parse_modifiers()?;
        Ok(Query {
            form: QueryForm::Select {
                distinct,
                projection,
            },
            pattern,
            order_by,
            limit,
            offset,
        })
    }

    fn parse_construct(&mut self) -> Result<Query, FxError> {
        self.skip_ws();
        let template = self.parse_template()?;
        if !self.keyword("WHERE") {
            return Err(self.error("CONSTRUCT requires WHERE"));
        }
        let pattern = self.parse_group()?;
        let (order_by, limit, offset) = self.parse_modifiers()?;
        Ok(Query {
            form: QueryForm::Construct { template },
            pattern,
            order_by,
            limit,
            offset,
        })
    }

    fn parse_modifiers(
        &mut self,
    ) -> Result<(Vec<(OrderDirection, Expression)>, Option<usize>, Option<usize>), FxError> {
        let mut order_by = Vec::new();
        if self.keyword("ORDER") {
            if !self.keyword("BY") {
                return Err(self.error("expected BY after ORDER"));
            }
            loop {
                self.skip_ws();
                if self.keyword("ASC") {
                    self.expect('(')?;
                    let e = self.parse_expression()?;
                    self.expect(')')?;
                    order_by.push((OrderDirection::Asc, e));
                } else if self.keyword("DESC") {
                    self.expect('(')?;
                    let e = self.parse_expression()?;
                    self.expect(')')?;
                    order_by.push((OrderDirection::Desc, e));
                } else if matches!(self.peek(), Some('?') | Some('$')) {
                    order_by.push((OrderDirection::Asc, Expression::Var(self.read_var()?)));
                } else if self.peek() == Some('(') {
                    self.bump();
                    let e = self.parse_expression()?;
                    self.expect(')')?;
                    order_by.push((OrderDirection::Asc, e));
                } else {
                    break;
                }
            }
            if order_by.is_empty() {
                return Err(self.error("ORDER BY needs at least one key"));
            }
        }
        let mut limit = None;
        let mut offset = None;
        loop {
            if self.keyword("LIMIT") {
                limit = Some(self.read_unsigned()?);
            } else if self.keyword("OFFSET") {
                offset = Some(self.read_unsigned()?);
            } else {
                break;
            }
        }
        Ok((order_by, limit, offset))
    }

    fn read_unsigned(&mut self) -> Result<usize, FxError> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        digits
            .parse()
            .map_err(|_| self.error("expected a non-negative integer"))
    }

    // ---- group graph patterns ----

    fn parse_group(&mut self) -> Result<GroupPattern, FxError> {
        self.expect('{')?;
        let mut elements: Vec<Element> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok(GroupPattern { elements });
                }
                None => return Err(self.error("unterminated group, expected '}'")),
                _ => {}
            }
            if self.keyword("OPTIONAL") {
                let inner = self.parse_group()?;
                elements.push(Element::Optional(inner));
            } else if self.keyword("FILTER") {
                let expr = self.parse_constraint()?;
                elements.push(Element::Filter(expr));
            } else if self.keyword("BIND") {
                self.expect('(')?;
                let expr = self.parse_expression()?;
                if !self.keyword("AS") {
                    return Err(self.error("expected AS in BIND"));
                }
                let var = self.read_var()?;
                self.expect(')')?;
                if group_mentions_var(&elements, &var) {
                    return Err(self.error(format!(
                        "BIND variable ?{} is already in scope",
                        var.name
                    )));
                }
                elements.push(Element::Bind { expr, var });
            } else if self.keyword("VALUES") {
                elements.push(self.parse_values()?);
            } else if self.keyword("SERVICE") {
                let silent = self.keyword("SILENT");
                self.skip_ws();
                let target = match self.peek() {
                    Some('?') | Some('$') => ServiceTarget::Var(self.read_var()?),
                    Some('<') => {
                        let iri = self.read_iri_ref()?;
                        ServiceTarget::Iri(Iri::new(iri).map_err(|e| self.error(e.to_string()))?)
                    }
                    _ => {
                        let term = self.parse_term_or_var(false)?;
                        match term {
                            PatternTerm::Term(Term::Iri(iri)) => ServiceTarget::Iri(iri),
                            _ => return Err(self.error("SERVICE target must be an IRI or variable")),
                        }
                    }
                };
                let pattern = self.parse_group()?;
                elements.push(Element::Service {
                    target,
                    pattern,
                    silent,
                });
            } else if self.peek() == Some('{') {
                // Nested group, possibly a UNION chain.
                let first = self.parse_group()?;
                let mut branches = vec![first];
                while self.keyword("UNION") {
                    branches.push(self.parse_group()?);
                }
                if branches.len() == 1 {
                    elements.push(Element::Group(branches.pop().expect("one branch")));
                } else {
                    elements.push(Element::Union(branches));
                }
            } else if self.keyword("GRAPH") {
                return Err(self.error("GRAPH patterns are not supported"));
            } else if self.keyword("MINUS") {
                return Err(self.error("MINUS is not supported"));
            } else {
                let patterns = self.parse_triples_block()?;
                if patterns.is_empty() {
                    return Err(self.error("expected a graph pattern"));
                }
                // Adjacent triples merge into one basic graph pattern.
                if let Some(Element::Bgp(existing)) = elements.last_mut() {
                    existing.extend(patterns);
                } else {
                    elements.push(Element::Bgp(patterns));
                }
            }
            self.skip_ws();
            if self.peek() == Some('.') {
                self.bump();
            }
        }
    }

    fn parse_values(&mut self) -> Result<Element, FxError> {
        self.skip_ws();
        match self.peek() {
            Some('?') | Some('$') => {
                let var = self.read_var()?;
                self.expect('{')?;
                let mut rows = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some('}') {
                        self.bump();
                        break;
                    }
                    if self.keyword("UNDEF") {
                        rows.push(vec![None]);
                    } else {
                        let term = self.parse_data_term()?;
                        rows.push(vec![Some(term)]);
                    }
                }
                Ok(Element::Values {
                    vars: vec![var],
                    rows,
                })
            }
            Some('(') => {
                self.bump();
                let mut vars = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(')') {
                        self.bump();
                        break;
                    }
                    vars.push(self.read_var()?);
                }
                self.expect('{')?;
                let mut rows = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some('}') => {
                            self.bump();
                            break;
                        }
                        Some('(') => {
                            self.bump();
                            let mut row = Vec::new();
                            loop {
                                self.skip_ws();
                                if self.peek() == Some(')') {
                                    self.bump();
                                    break;
                                }
                                if self.keyword("UNDEF") {
                                    row.push(None);
                                } else {
                                    row.push(Some(self.parse_data_term()?));
                                }
                            }
                            if row.len() != vars.len() {
                                return Err(self.error(format!(
                                    "VALUES row has {} terms for {} variables",
                                    row.len(),
                                    vars.len()
                                )));
                            }
                            rows.push(row);
                        }
                        _ => return Err(self.error("expected '(' or '}' in VALUES")),
                    }
                }
                Ok(Element::Values { vars, rows })
            }
            _ => Err(self.error("expected variable or '(' after VALUES")),
        }
    }

    /// A constant term usable in VALUES rows.
    fn parse_data_term(&mut self) -> Result<Term, FxError> {
        match self.parse_term_or_var(false)? {
            PatternTerm::Term(t) => Ok(t),
            PatternTerm::Var(_) => Err(self.error("variables cannot appear in VALUES data")),
        }
    }

    // ---- triples ----

    fn parse_template(&mut self) -> Result<Vec<TriplePattern>, FxError> {
        self.expect('{')?;
        let mut patterns = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some('}') {
                self.bump();
                return Ok(patterns);
            }
            let mut block = self.parse_triples_same_subject(true)?;
            patterns.append(&mut block);
            self.skip_ws();
            if self.peek() == Some('.') {
                self.bump();
            }
        }
    }

    fn parse_triples_block(&mut self) -> Result<Vec<TriplePattern>, FxError> {
        self.parse_triples_same_subject(false)
    }

    fn parse_triples_same_subject(
        &mut self,
        template: bool,
    ) -> Result<Vec<TriplePattern>, FxError> {
        let mut out = Vec::new();
        self.skip_ws();
        let subject = if self.peek() == Some('[') {
            let node = self.parse_blank_property_list(template, &mut out)?;
            self.skip_ws();
            // "[ ... ]" alone is a complete triples block.
            if matches!(self.peek(), Some('.') | Some('}')) {
                return Ok(out);
            }
            node
        } else {
            self.parse_term_or_var(template)?
        };
        if matches!(&subject, PatternTerm::Term(t) if t.is_literal()) {
            return Err(self.error("literal cannot be used as subject"));
        }
        self.parse_predicate_object_list(&subject, template, &mut out)?;
        Ok(out)
    }

    fn parse_predicate_object_list(
        &mut self,
        subject: &PatternTerm,
        template: bool,
        out: &mut Vec<TriplePattern>,
    ) -> Result<(), FxError> {
        loop {
            self.skip_ws();
            let predicate = self.parse_verb(template)?;
            loop {
                self.skip_ws();
                let object = if self.peek() == Some('[') {
                    self.parse_blank_property_list(template, out)?
                } else {
                    self.parse_term_or_var(template)?
                };
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                    continue;
                }
                break;
            }
            self.skip_ws();
            if self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
                if matches!(self.peek(), Some('.') | Some('}') | Some(']')) {
                    return Ok(());
                }
                continue;
            }
            return Ok(());
        }
    }

    fn parse_verb(&mut self, template: bool) -> Result<PatternTerm, FxError> {
        self.skip_ws();
        if self.peek() == Some('a') {
            let next = self.peek_at(1);
            let terminates = next.is_none_or(|c| {
                c.is_whitespace() || c == '<' || c == '[' || c == '?' || c == '$' || c == '"'
            });
            if terminates {
                self.bump();
                return Ok(PatternTerm::Term(Term::iri_unchecked(vocab::RDF_TYPE)));
            }
        }
        let verb = self.parse_term_or_var(template)?;
        match &verb {
            PatternTerm::Var(_) => Ok(verb),
            PatternTerm::Term(Term::Iri(_)) => Ok(verb),
            _ => Err(self.error("predicate must be an IRI or variable")),
        }
    }

    fn parse_blank_property_list(
        &mut self,
        template: bool,
        out: &mut Vec<TriplePattern>,
    ) -> Result<PatternTerm, FxError> {
        self.expect('[')?;
        let node = self.fresh_blank(template);
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.parse_predicate_object_list(&node, template, out)?;
        self.skip_ws();
        self.expect(']')?;
        Ok(node)
    }

    /// In WHERE patterns a blank node is an anonymous variable; in
    /// CONSTRUCT templates it is a fresh blank node per solution.
    fn fresh_blank(&mut self, template: bool) -> PatternTerm {
        if template {
            let n = self.template_blank_counter;
            self.template_blank_counter += 1;
            PatternTerm::Term(Term::blank(format!("tpl{n}")))
        } else {
            let n = self.anon_counter;
            self.anon_counter += 1;
            PatternTerm::Var(Var::anonymous(n))
        }
    }

    fn parse_term_or_var(&mut self, template: bool) -> Result<PatternTerm, FxError> {
        self.skip_ws();
        match self.peek() {
            Some('?') | Some('$') => Ok(PatternTerm::Var(self.read_var()?)),
            Some('<') => {
                let iri = self.read_iri_ref()?;
                Ok(PatternTerm::Term(
                    Term::iri(iri).map_err(|e| self.error(e.to_string()))?,
                ))
            }
            Some('_') if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        label.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if template {
                    Ok(PatternTerm::Term(Term::blank(format!("tplu{label}"))))
                } else {
                    // Blank labels in patterns behave as anonymous variables.
                    Ok(PatternTerm::Var(Var {
                        name: format!("_blank_{label}"),
                        anonymous: true,
                    }))
                }
            }
            Some('"') | Some('\'') => Ok(PatternTerm::Term(self.parse_string_literal()?)),
            Some('(') => Err(self.error("collections in patterns are not supported")),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                Ok(PatternTerm::Term(self.parse_numeric_literal()?))
            }
            Some(_) => {
                if self.keyword_literal("true") {
                    return Ok(PatternTerm::Term(Term::Literal(Literal::boolean(true))));
                }
                if self.keyword_literal("false") {
                    return Ok(PatternTerm::Term(Term::Literal(Literal::boolean(false))));
                }
                let iri = self.read_prefixed_name()?;
                Ok(PatternTerm::Term(Term::Iri(iri)))
            }
            None => Err(self.error("unexpected end of query")),
        }
    }

    fn keyword_literal(&mut self, word: &str) -> bool {
        for (i, expected) in word.chars().enumerate() {
            if self.peek_at(i) != Some(expected) {
                return false;
            }
        }
        if let Some(next) = self.peek_at(word.len()) {
            if next.is_alphanumeric() || next == '_' || next == ':' || next == '-' {
                return false;
            }
        }
        for _ in 0..word.len() {
            self.bump();
        }
        true
    }

    fn read_var(&mut self) -> Result<Var, FxError> {
        self.skip_ws();
        match self.bump() {
            Some('?') | Some('$') => {}
            _ => return Err(self.error("expected a variable")),
        }
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if name.is_empty() {
            return Err(self.error("empty variable name"));
        }
        Ok(Var::named(name))
    }

    fn read_iri_ref(&mut self) -> Result<String, FxError> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some(c) if c == ' ' || c == '\n' || c == '"' || c == '{' => {
                    return Err(self.error(format!("invalid character '{c}' in IRI")))
                }
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
    }

    fn read_prefixed_name(&mut self) -> Result<Iri, FxError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                prefix.push(c);
                self.bump();
            } else {
                return Err(self.error(format!("unexpected character '{c}'")));
            }
        }
        if self.peek() != Some(':') {
            return Err(self.error(format!("unknown construct '{prefix}'")));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '%' {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        let ns = self
            .prefixes
            .get(&prefix)
            .ok_or_else(|| self.error(format!("unknown prefix '{prefix}:'")))?;
        Iri::new(format!("{ns}{local}")).map_err(|e| self.error(e.to_string()))
    }

    fn parse_string_literal(&mut self) -> Result<Term, FxError> {
        let quote = self.bump().expect("caller checked");
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => break,
                Some('\\') => match self.bump() {
                    Some('t') => lexical.push('\t'),
                    Some('n') => lexical.push('\n'),
                    Some('r') => lexical.push('\r'),
                    Some('"') => lexical.push('"'),
                    Some('\'') => lexical.push('\''),
                    Some('\\') => lexical.push('\\'),
                    Some(c) => return Err(self.error(format!("invalid escape '\\{c}'"))),
                    None => return Err(self.error("unterminated escape")),
                },
                Some(c) => lexical.push(c),
                None => return Err(self.error("unterminated string literal")),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() {
                    return Err(self.error("empty language tag"));
                }
                Ok(Term::Literal(Literal::lang(lexical, tag)))
            }
            Some('^') => {
                self.bump();
                self.expect('^')?;
                self.skip_ws();
                let dt = if self.peek() == Some('<') {
                    Iri::new(self.read_iri_ref()?).map_err(|e| self.error(e.to_string()))?
                } else {
                    self.read_prefixed_name()?
                };
                Ok(Term::Literal(Literal::typed(lexical, dt)))
            }
            _ => Ok(Term::string(lexical)),
        }
    }

    fn parse_numeric_literal(&mut self) -> Result<Term, FxError> {
        let mut text = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            text.push(self.bump().expect("sign"));
        }
        let mut has_dot = false;
        let mut has_exp = false;
        while let Some(c) = self.peek() {
            match c {
                '0'..='9' => {
                    text.push(c);
                    self.bump();
                }
                '.' if !has_dot && !has_exp
                    && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) =>
                {
                    has_dot = true;
                    text.push(c);
                    self.bump();
                }
                'e' | 'E' if !has_exp => {
                    has_exp = true;
                    text.push(c);
                    self.bump();
                    if matches!(self.peek(), Some('+') | Some('-')) {
                        text.push(self.bump().expect("sign"));
                    }
                }
                _ => break,
            }
        }
        if !text.bytes().any(|b| b.is_ascii_digit()) {
            return Err(self.error("malformed number"));
        }
        let datatype = if has_exp {
            vocab::XSD_DOUBLE
        } else if has_dot {
            vocab::XSD_DECIMAL
        } else {
            vocab::XSD_INTEGER
        };
        Ok(Term::Literal(Literal::typed(
            text,
            Iri::new_unchecked(datatype),
        )))
    }

    // ---- expressions ----

    fn parse_constraint(&mut self) -> Result<Expression, FxError> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            let e = self.parse_expression()?;
            self.expect(')')?;
            Ok(e)
        } else {
            // Builtin or function call form: FILTER REGEX(...), FILTER fx:f(...).
            self.parse_primary()
        }
    }

    fn parse_expression(&mut self) -> Result<Expression, FxError> {
        self.parse_or()
    }

    fn parse_or(&mut self) -> Result<Expression, FxError> {
        let mut left = self.parse_and()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('|') && self.peek_at(1) == Some('|') {
                self.bump();
                self.bump();
                let right = self.parse_and()?;
                left = Expression::Or(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn parse_and(&mut self) -> Result<Expression, FxError> {
        let mut left = self.parse_relational()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('&') && self.peek_at(1) == Some('&') {
                self.bump();
                self.bump();
                let right = self.parse_relational()?;
                left = Expression::And(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn parse_relational(&mut self) -> Result<Expression, FxError> {
        let left = self.parse_additive()?;
        self.skip_ws();
        let op = match (self.peek(), self.peek_at(1)) {
            (Some('='), _) => {
                self.bump();
                CmpOp::Eq
            }
            (Some('!'), Some('=')) => {
                self.bump();
                self.bump();
                CmpOp::Ne
            }
            (Some('<'), Some('=')) => {
                self.bump();
                self.bump();
                CmpOp::Le
            }
            (Some('>'), Some('=')) => {
                self.bump();
                self.bump();
                CmpOp::Ge
            }
            // '<' starts an IRI only when glued to non-space; in
            // expression position a comparison is the only valid read.
            (Some('<'), _) => {
                self.bump();
                CmpOp::Lt
            }
            (Some('>'), _) => {
                self.bump();
                CmpOp::Gt
            }
            _ => return Ok(left),
        };
        let right = self.parse_additive()?;
        Ok(Expression::Compare(op, Box::new(left), Box::new(right)))
    }

    fn parse_additive(&mut self) -> Result<Expression, FxError> {
        let mut left = self.parse_multiplicative()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let right = self.parse_multiplicative()?;
                    left = Expression::Arith(ArithOp::Add, Box::new(left), Box::new(right));
                }
                Some('-') => {
                    self.bump();
                    let right = self.parse_multiplicative()?;
                    left = Expression::Arith(ArithOp::Sub, Box::new(left), Box::new(right));
                }
                _ => return Ok(left),
            }
        }
    }

    fn parse_multiplicative(&mut self) -> Result<Expression, FxError> {
        let mut left = self.parse_unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let right = self.parse_unary()?;
                    left = Expression::Arith(ArithOp::Mul, Box::new(left), Box::new(right));
                }
                Some('/') => {
                    self.bump();
                    let right = self.parse_unary()?;
                    left = Expression::Arith(ArithOp::Div, Box::new(left), Box::new(right));
                }
                _ => return Ok(left),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Expression, FxError> {
        self.skip_ws();
        match self.peek() {
            Some('!') if self.peek_at(1) != Some('=') => {
                self.bump();
                Ok(Expression::Not(Box::new(self.parse_unary()?)))
            }
            Some('-') => {
                self.bump();
                Ok(Expression::Neg(Box::new(self.parse_unary()?)))
            }
            Some('+') => {
                self.bump();
                self.parse_unary()
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<Expression, FxError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.parse_expression()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('?') | Some('$') => Ok(Expression::Var(self.read_var()?)),
            Some('"') | Some('\'') => Ok(Expression::Term(self.parse_string_literal()?)),
            Some('<') => {
                let iri = self.read_iri_ref()?;
                let iri = Iri::new(iri).map_err(|e| self.error(e.to_string()))?;
                self.maybe_call(Expression::Term(Term::Iri(iri)))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expression::Term(self.parse_numeric_literal()?)),
            Some(_) => {
                if self.keyword_literal("true") {
                    return Ok(Expression::Term(Term::Literal(Literal::boolean(true))));
                }
                if self.keyword_literal("false") {
                    return Ok(Expression::Term(Term::Literal(Literal::boolean(false))));
                }
                if let Some(builtin) = self.try_builtin()? {
                    return Ok(builtin);
                }
                let iri = self.read_prefixed_name()?;
                self.maybe_call(Expression::Term(Term::Iri(iri)))
            }
            None => Err(self.error("unexpected end of expression")),
        }
    }

    /// An IRI (from either syntax) followed by '(' is a function call.
    fn maybe_call(&mut self, term: Expression) -> Result<Expression, FxError> {
        self.skip_ws();
        if self.peek() == Some('(') {
            let Expression::Term(Term::Iri(iri)) = term else {
                return Err(self.error("only IRIs can be called"));
            };
            let args = self.parse_arg_list()?;
            return Ok(Expression::Call(iri, args));
        }
        Ok(term)
    }

    fn parse_arg_list(&mut self) -> Result<Vec<Expression>, FxError> {
        self.expect('(')?;
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(')') {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.parse_expression()?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(')') => return Ok(args),
                Some(c) => return Err(self.error(format!("expected ',' or ')', found '{c}'"))),
                None => return Err(self.error("unterminated argument list")),
            }
        }
    }

    fn try_builtin(&mut self) -> Result<Option<Expression>, FxError> {
        const BUILTINS: &[(&str, Builtin)] = &[
            ("COALESCE", Builtin::Coalesce),
            ("CONCAT", Builtin::Concat),
            ("STRLEN", Builtin::StrLen),
            ("SUBSTR", Builtin::SubStr),
            ("STRSTARTS", Builtin::StrStarts),
            ("STRENDS", Builtin::StrEnds),
            ("CONTAINS", Builtin::Contains),
            ("REPLACE", Builtin::Replace),
            ("REGEX", Builtin::Regex),
            ("LCASE", Builtin::LCase),
            ("UCASE", Builtin::UCase),
            ("BOUND", Builtin::Bound),
            ("BNODE", Builtin::BNode),
            ("STRDT", Builtin::StrDt),
            ("IRI", Builtin::Iri),
            ("URI", Builtin::Iri),
            ("STR", Builtin::Str),
            ("IF", Builtin::If),
        ];
        for (name, builtin) in BUILTINS {
            if self.peek_builtin_call(name) {
                for _ in 0..name.len() {
                    self.bump();
                }
                let args = self.parse_arg_list()?;
                return Ok(Some(Expression::Builtin(*builtin, args)));
            }
        }
        Ok(None)
    }

    /// A builtin name only parses as one when followed by '('; otherwise
    /// it may be a prefixed name like `if:foo`.
    fn peek_builtin_call(&mut self, word: &str) -> bool {
        for (i, expected) in word.chars().enumerate() {
            match self.peek_at(i) {
                Some(c) if c.eq_ignore_ascii_case(&expected) => {}
                _ => return false,
            }
        }
        let mut offset = word.len();
        match self.peek_at(offset) {
            Some(c) if c.is_alphanumeric() || c == '_' || c == ':' || c == '-' => return false,
            _ => {}
        }
        while let Some(c) = self.peek_at(offset) {
            if c.is_whitespace() {
                offset += 1;
            } else {
                return c == '(';
            }
        }
        false
    }
}

fn group_mentions_var(elements: &[Element], var: &Var) -> bool {
    let group = GroupPattern {
        elements: elements.to_vec(),
    };
    group.visible_vars().contains(var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ask_empty() {
        let q = parse_query("ASK {}").unwrap();
        assert_eq!(q.form, QueryForm::Ask);
        assert!(q.pattern.elements.is_empty());
    }

    #[test]
    fn select_star_single_pattern() {
        let q = parse_query("SELECT * { ?s ?p ?o }").unwrap();
        match &q.form {
            QueryForm::Select { projection, .. } => assert!(projection.is_none()),
            other => panic!("unexpected form {other:?}"),
        }
        assert_eq!(q.pattern.elements.len(), 1);
        match &q.pattern.elements[0] {
            Element::Bgp(patterns) => assert_eq!(patterns.len(), 1),
            other => panic!("unexpected element {other:?}"),
        }
        assert_eq!(q.projection_vars().len(), 3);
    }

    #[test]
    fn figure_style_query_has_two_services() {
        let text = r#"
            PREFIX fx: <http://sparql.xyz/facade-x/ns/>
            PREFIX xyz: <http://sparql.xyz/facade-x/data/>
            PREFIX tate: <http://sparql.xyz/example/tate/>
            SELECT ?id ?subjectId WHERE {
              # artworks come from the CSV facade
              SERVICE <x-sparql-anything:csv.headers=true,location=./artwork_data.csv> {
                [] xyz:id ?id ; xyz:accession_number ?accId .
              }
              BIND (fx:entity("x-sparql-anything:location=./artworks/", ?accId) AS ?meta)
              SERVICE ?meta {
                [] xyz:children [ fx:anySlot [ xyz:id ?subjectId ] ] .
              }
            }
        "#;
        let q = parse_query(text).unwrap();
        let mut constant_targets = 0;
        let mut variable_targets = 0;
        for el in &q.pattern.elements {
            if let Element::Service { target, .. } = el {
                match target {
                    ServiceTarget::Iri(_) => constant_targets += 1,
                    ServiceTarget::Var(_) => variable_targets += 1,
                }
            }
        }
        assert_eq!(constant_targets, 1);
        assert_eq!(variable_targets, 1);
    }

    #[test]
    fn predicate_object_lists_and_blanks() {
        let q = parse_query("SELECT * { [] <http://p> ?v ; a <http://T> . }").unwrap();
        match &q.pattern.elements[0] {
            Element::Bgp(patterns) => {
                assert_eq!(patterns.len(), 2);
                // Both share the same anonymous subject variable.
                assert_eq!(patterns[0].subject, patterns[1].subject);
                assert!(matches!(
                    &patterns[0].subject,
                    PatternTerm::Var(v) if v.anonymous
                ));
            }
            other => panic!("unexpected element {other:?}"),
        }
    }

    #[test]
    fn construct_template_blanks_are_terms() {
        let q = parse_query(
            "CONSTRUCT { [] <http://p> ?v } WHERE { ?s <http://q> ?v }",
        )
        .unwrap();
        match &q.form {
            QueryForm::Construct { template } => {
                assert!(matches!(
                    &template[0].subject,
                    PatternTerm::Term(Term::Blank(_))
                ));
            }
            other => panic!("unexpected form {other:?}"),
        }
    }

    #[test]
    fn optional_union_filter_bind_values() {
        let text = r#"
            SELECT ?x ?y {
              VALUES ?x { "a" "b" }
              OPTIONAL { ?x <http://p> ?y . FILTER(?y > 1) }
              { ?x <http://q> ?z } UNION { ?x <http://r> ?z }
              FILTER (BOUND(?y) || ?x = "a")
              BIND (CONCAT(?x, "!") AS ?loud)
            }
            ORDER BY DESC(?x) LIMIT 5 OFFSET 2
        "#;
        let q = parse_query(text).unwrap();
        assert_eq!(q.limit, Some(5));
        assert_eq!(q.offset, Some(2));
        assert_eq!(q.order_by.len(), 1);
        assert_eq!(q.order_by[0].0, OrderDirection::Desc);
        let kinds: Vec<&str> = q
            .pattern
            .elements
            .iter()
            .map(|e| match e {
                Element::Values { .. } => "values",
                Element::Optional(_) => "optional",
                Element::Union(_) => "union",
                Element::Filter(_) => "filter",
                Element::Bind { .. } => "bind",
                _ => "other",
            })
            .collect();
        assert_eq!(kinds, vec!["values", "optional", "union", "filter", "bind"]);
    }

    #[test]
    fn bind_in_scope_is_rejected() {
        let err = parse_query("SELECT * { ?x <http://p> ?y BIND(1 AS ?x) }").unwrap_err();
        assert!(err.to_string().contains("already in scope"));
    }

    #[test]
    fn out_of_subset_constructs_name_themselves() {
        for (text, needle) in [
            ("SELECT * { GRAPH ?g { ?s ?p ?o } }", "GRAPH"),
            ("SELECT * { ?s ?p ?o MINUS { ?s ?p ?o } }", "MINUS"),
            ("DESCRIBE <http://x>", "DESCRIBE"),
            ("SELECT (COUNT(*) AS ?c) { ?s ?p ?o }", "projection expressions"),
        ] {
            let err = parse_query(text).unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "error for {text} should mention {needle}, got: {err}"
            );
        }
    }

    #[test]
    fn service_silent_flag() {
        let q = parse_query(
            "SELECT * { SERVICE SILENT <x-sparql-anything:content=x> { ?s ?p ?o } }",
        )
        .unwrap();
        match &q.pattern.elements[0] {
            Element::Service { silent, .. } => assert!(silent),
            other => panic!("unexpected element {other:?}"),
        }
    }

    #[test]
    fn comments_are_skipped_anywhere_between_tokens() {
        let q = parse_query("# leading\nSELECT * # trailing\n{ ?s ?p ?o } # end").unwrap();
        assert_eq!(q.projection_vars().len(), 3);
    }

    #[test]
    fn keywords_are_case_insensitive() {
        let q = parse_query("select distinct ?s where { ?s ?p ?o } limit 1").unwrap();
        match q.form {
            QueryForm::Select { distinct, .. } => assert!(distinct),
            other => panic!("unexpected form {other:?}"),
        }
    }

    #[test]
    fn expression_iri_ambiguity() {
        // '<' in expression position is a comparison, not an IRI.
        let q = parse_query("SELECT * { ?s ?p ?o FILTER(?o < 5) }").unwrap();
        let filter = q
            .pattern
            .elements
            .iter()
            .find_map(|e| match e {
                Element::Filter(f) => Some(f),
                _ => None,
            })
            .unwrap();
        assert!(matches!(filter, Expression::Compare(CmpOp::Lt, _, _)));
    }
}
