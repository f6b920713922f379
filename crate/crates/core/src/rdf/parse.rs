//! Readers for N-Triples, N-Quads and the Turtle subset the engine emits:
//! prefix directives, predicate-object lists, object lists, blank-node
//! property lists, numeric/boolean/string literals with datatypes and
//! language tags. Collections are not supported.

use std::collections::HashMap;

use crate::error::FxError;
use crate::rdf::model::{Dataset, Graph, Iri, Literal, Term, Triple};
use crate::rdf::serialize::RdfFormat;
use crate::rdf::vocab;

pub fn parse_graph(text: &str, format: RdfFormat) -> Result<Graph, FxError> {
    match format {
        RdfFormat::Turtle => Parser::new(text, "Turtle").parse_turtle(),
        RdfFormat::NTriples => {
            let ds = Parser::new(text, "N-Triples").parse_lines(false)?;
            Ok(ds.default)
        }
        RdfFormat::NQuads => {
            let ds = parse_dataset(text, format)?;
            if !ds.named.is_empty() {
                return Err(FxError::RdfSyntax {
                    format: "N-Quads",
                    line: 1,
                    column: 1,
                    message: "named graphs cannot be read into a bare graph".into(),
                });
            }
            Ok(ds.default)
        }
    }
}

pub fn parse_dataset(text: &str, format: RdfFormat) -> Result<Dataset, FxError> {
    match format {
        RdfFormat::NQuads => Parser::new(text, "N-Quads").parse_lines(true),
        other => Ok(Dataset::from_default(parse_graph(text, other)?)),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    format: &'static str,
    prefixes: HashMap<String, String>,
    anon_prefix: String,
    anon_counter: usize,
}

impl Parser {
    fn new(text: &str, format: &'static str) -> Parser {
        // Generated labels for [] must not collide with labels in the text.
        let mut anon_prefix = String::from("gen");
        while text.contains(&format!("_:{anon_prefix}")) {
            anon_prefix.push('g');
        }
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            format,
            prefixes: HashMap::new(),
            anon_prefix,
            anon_counter: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> FxError {
        FxError::RdfSyntax {
            format: self.format,
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
        match self.bump() {
            Some(c) if c == expected => Ok(()),
            Some(c) => Err(self.error(format!("expected '{expected}', found '{c}'"))),
            None => Err(self.error(format!("expected '{expected}', found end of input"))),
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

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn fresh_blank(&mut self) -> Term {
        let label = format!("{}{}", self.anon_prefix, self.anon_counter);
        self.anon_counter += 1;
        Term::blank(label)
    }

    // ---- Turtle ----

    fn parse_turtle(mut self) -> Result<Graph, FxError> {
        let mut graph = Graph::new();
        loop {
            if self.at_end() {
                return Ok(graph);
            }
            if self.try_directive()? {
                continue;
            }
            self.parse_statement(&mut graph)?;
        }
    }

    fn try_directive(&mut self) -> Result<bool, FxError> {
        self.skip_ws();
        if self.peek() == Some('@') {
            let word = self.peek_word();
            if word.eq_ignore_ascii_case("@prefix") {
                self.consume_word();
                self.read_prefix_decl()?;
                self.skip_ws();
                self.expect('.')?;
                return Ok(true);
            }
            return Err(self.error(format!("unsupported directive {word}")));
        }
        let word = self.peek_word();
        if word.eq_ignore_ascii_case("prefix") {
            self.consume_word();
            self.read_prefix_decl()?;
            return Ok(true);
        }
        if word.eq_ignore_ascii_case("@base") || word.eq_ignore_ascii_case("base") {
            return Err(self.error("base directives are not supported"));
        }
        Ok(false)
    }

    fn peek_word(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while let Some(c) = self.peek_at(i) {
            if c.is_whitespace() || i > 16 {
                break;
            }
            out.push(c);
            i += 1;
        }
        out
    }

    fn consume_word(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                break;
            }
            self.bump();
        }
    }

    fn read_prefix_decl(&mut self) -> Result<(), FxError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_whitespace() {
                return Err(self.error("expected ':' in prefix declaration"));
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

    fn parse_statement(&mut self, graph: &mut Graph) -> Result<(), FxError> {
        self.skip_ws();
        let subject = if self.peek() == Some('[') {
            let node = self.parse_blank_property_list(graph)?;
            self.skip_ws();
            // A bare "[ ... ] ." statement is allowed.
            if self.peek() == Some('.') {
                self.bump();
                return Ok(());
            }
            node
        } else {
            let term = self.parse_term(graph, true)?;
            if term.is_literal() {
                return Err(self.error("literal cannot be used as subject"));
            }
            term
        };
        self.parse_predicate_object_list(graph, &subject)?;
        self.skip_ws();
        self.expect('.')?;
        Ok(())
    }

    fn parse_predicate_object_list(
        &mut self,
        graph: &mut Graph,
        subject: &Term,
    ) -> Result<(), FxError> {
        loop {
            self.skip_ws();
            let predicate = self.parse_verb(graph)?;
            loop {
                self.skip_ws();
                let object = if self.peek() == Some('[') {
                    self.parse_blank_property_list(graph)?
                } else {
                    self.parse_term(graph, false)?
                };
                graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
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
                // Trailing ';' before '.' or ']' is legal.
                if matches!(self.peek(), Some('.') | Some(']')) {
                    return Ok(());
                }
                continue;
            }
            return Ok(());
        }
    }

    fn parse_verb(&mut self, graph: &mut Graph) -> Result<Term, FxError> {
        self.skip_ws();
        if self.peek() == Some('a') {
            let next = self.peek_at(1);
            if next.is_none_or(|c| c.is_whitespace() || c == '<' || c == '[' || c == '"') {
                self.bump();
                return Ok(Term::iri_unchecked(vocab::RDF_TYPE));
            }
        }
        let term = self.parse_term(graph, true)?;
        if !term.is_iri() {
            return Err(self.error("predicate must be an IRI"));
        }
        Ok(term)
    }

    fn parse_blank_property_list(&mut self, graph: &mut Graph) -> Result<Term, FxError> {
        self.expect('[')?;
        let node = self.fresh_blank();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.parse_predicate_object_list(graph, &node)?;
        self.skip_ws();
        self.expect(']')?;
        Ok(node)
    }

    /// One term in Turtle syntax. `subject_position` only affects error
    /// wording; validity is checked by the callers.
    fn parse_term(&mut self, _graph: &mut Graph, _subject_position: bool) -> Result<Term, FxError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => {
                let iri = self.read_iri_ref()?;
                Iri::new(iri).map(Term::Iri)
            }
            Some('_') if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.read_blank_label()?;
                Ok(Term::blank(label))
            }
            Some('"') | Some('\'') => self.parse_string_literal(),
            Some('(') => Err(self.error("collections are not supported")),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.parse_numeric(),
            Some(_) => {
                if self.try_keyword("true") {
                    return Ok(Term::Literal(Literal::boolean(true)));
                }
                if self.try_keyword("false") {
                    return Ok(Term::Literal(Literal::boolean(false)));
                }
                self.parse_prefixed_name()
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Consumes `word` if it appears here as a standalone keyword, i.e.
    /// not followed by a name character or colon.
    fn try_keyword(&mut self, word: &str) -> bool {
        for (i, expected) in word.chars().enumerate() {
            if self.peek_at(i) != Some(expected) {
                return false;
            }
        }
        if let Some(next) = self.peek_at(word.len()) {
            if next.is_alphanumeric() || next == '_' || next == '-' || next == ':' {
                return false;
            }
        }
        for _ in 0..word.len() {
            self.bump();
        }
        true
    }

    fn parse_prefixed_name(&mut self) -> Result<Term, FxError> {
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
        self.expect(':')?;
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '%' {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // A trailing dot terminates the statement, not the name.
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        let ns = self
            .prefixes
            .get(&prefix)
            .ok_or_else(|| self.error(format!("unknown prefix '{prefix}:'")))?;
        Iri::new(format!("{ns}{local}")).map(Term::Iri)
    }

    fn parse_numeric(&mut self) -> Result<Term, FxError> {
        let mut text = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            text.push(self.bump().unwrap());
        }
        let mut has_dot = false;
        let mut has_exp = false;
        while let Some(c) = self.peek() {
            match c {
                '0'..='9' => {
                    text.push(c);
                    self.bump();
                }
                '.' if !has_dot && !has_exp => {
                    // Only part of the number if a digit follows.
                    if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                        has_dot = true;
                        text.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                'e' | 'E' if !has_exp => {
                    has_exp = true;
                    text.push(c);
                    self.bump();
                    if matches!(self.peek(), Some('+') | Some('-')) {
                        text.push(self.bump().unwrap());
                    }
                }
                _ => break,
            }
        }
        if !text.bytes().any(|b| b.is_ascii_digit()) {
            return Err(self.error("malformed numeric literal"));
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

    fn parse_string_literal(&mut self) -> Result<Term, FxError> {
        let quote = self.bump().unwrap();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => break,
                Some('\\') => lexical.push(self.read_escape()?),
                Some('\n') => return Err(self.error("unterminated string literal")),
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
                let dt = match self.peek() {
                    Some('<') => Iri::new(self.read_iri_ref()?)?,
                    _ => match self.parse_prefixed_name()? {
                        Term::Iri(iri) => iri,
                        _ => return Err(self.error("datatype must be an IRI")),
                    },
                };
                if dt.as_str() == vocab::RDF_LANG_STRING {
                    return Err(self.error("rdf:langString requires a language tag"));
                }
                Ok(Term::Literal(Literal::typed(lexical, dt)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn read_escape(&mut self) -> Result<char, FxError> {
        match self.bump() {
            Some('t') => Ok('\t'),
            Some('n') => Ok('\n'),
            Some('r') => Ok('\r'),
            Some('b') => Ok('\u{08}'),
            Some('f') => Ok('\u{0C}'),
            Some('"') => Ok('"'),
            Some('\'') => Ok('\''),
            Some('\\') => Ok('\\'),
            Some('u') => self.read_unicode_escape(4),
            Some('U') => self.read_unicode_escape(8),
            Some(c) => Err(self.error(format!("invalid escape '\\{c}'"))),
            None => Err(self.error("unterminated escape")),
        }
    }

    fn read_unicode_escape(&mut self, len: usize) -> Result<char, FxError> {
        let mut value: u32 = 0;
        for _ in 0..len {
            let c = self
                .bump()
                .ok_or_else(|| self.error("unterminated unicode escape"))?;
            let digit = c
                .to_digit(16)
                .ok_or_else(|| self.error(format!("invalid hex digit '{c}'")))?;
            value = value * 16 + digit;
        }
        char::from_u32(value).ok_or_else(|| self.error(format!("invalid code point U+{value:X}")))
    }

    fn read_iri_ref(&mut self) -> Result<String, FxError> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => match self.peek() {
                    Some('u') => {
                        self.bump();
                        out.push(self.read_unicode_escape(4)?);
                    }
                    Some('U') => {
                        self.bump();
                        out.push(self.read_unicode_escape(8)?);
                    }
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some(c) if c == ' ' || c == '<' || c == '"' || c == '\n' => {
                    return Err(self.error(format!("invalid character '{c}' in IRI")))
                }
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
    }

    fn read_blank_label(&mut self) -> Result<String, FxError> {
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // A trailing dot belongs to the statement terminator.
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        if label.is_empty() {
            return Err(self.error("empty blank node label"));
        }
        Ok(label)
    }

    // ---- N-Triples / N-Quads ----

    fn parse_lines(mut self, quads: bool) -> Result<Dataset, FxError> {
        let mut dataset = Dataset::new();
        loop {
            if self.at_end() {
                return Ok(dataset);
            }
            let subject = self.parse_simple_term()?;
            if subject.is_literal() {
                return Err(self.error("literal cannot be used as subject"));
            }
            let predicate = self.parse_simple_term()?;
            if !predicate.is_iri() {
                return Err(self.error("predicate must be an IRI"));
            }
            let object = self.parse_simple_term()?;
            self.skip_ws();
            let graph_name = if quads && self.peek() != Some('.') {
                let g = self.parse_simple_term()?;
                match g {
                    Term::Iri(iri) => Some(iri),
                    _ => return Err(self.error("graph label must be an IRI")),
                }
            } else {
                None
            };
            self.skip_ws();
            self.expect('.')?;
            let triple = Triple::new(subject, predicate, object);
            match graph_name {
                Some(name) => {
                    dataset.named_graph_mut(name).insert(triple);
                }
                None => {
                    dataset.default.insert(triple);
                }
            }
        }
    }

    fn parse_simple_term(&mut self) -> Result<Term, FxError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Iri::new(self.read_iri_ref()?).map(Term::Iri),
            Some('_') if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                Ok(Term::blank(self.read_blank_label()?))
            }
            Some('"') => self.parse_string_literal(),
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::serialize::serialize_graph;

    #[test]
    fn empty_input_yields_empty_graph() {
        let g = parse_graph("", RdfFormat::NTriples).unwrap();
        assert!(g.is_empty());
        let g = parse_graph("  # just a comment\n", RdfFormat::Turtle).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn json_example_turtle_block_has_seven_triples() {
        let ttl = r#"
            @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
            @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
            @prefix fx: <http://sparql.xyz/facade-x/ns/> .
            @prefix xyz: <http://sparql.xyz/facade-x/data/> .
            [ a fx:root ;
              xyz:fc "Kazimir Malevich" ;
              xyz:gender "Male" ;
              xyz:id "1561"^^xsd:int ;
              xyz:activePlaces [ rdf:_1 "Ukrayina" ; rdf:_2 "Moskov" ] ] .
        "#;
        let g = parse_graph(ttl, RdfFormat::Turtle).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.roots().len(), 1);
    }

    #[test]
    fn nt_round_trip_statement() {
        let nt = "_:b0 <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://sparql.xyz/facade-x/ns/root> .\n";
        let g = parse_graph(nt, RdfFormat::NTriples).unwrap();
        assert_eq!(serialize_graph(&g, RdfFormat::NTriples), nt);
    }

    #[test]
    fn numeric_and_boolean_literals() {
        let ttl = r#"
            @prefix x: <http://example.org/> .
            x:s x:int 42 ; x:dec 3.5 ; x:dbl 1.0e2 ; x:neg -7 ; x:t true ; x:f false .
        "#;
        let g = parse_graph(ttl, RdfFormat::Turtle).unwrap();
        assert_eq!(g.len(), 6);
        let lexicals: Vec<String> = g
            .iter()
            .map(|t| {
                let lit = t.object.as_literal().unwrap();
                format!("{}^^{}", lit.lexical(), lit.datatype().as_str())
            })
            .collect();
        assert!(lexicals.contains(&format!("42^^{}", vocab::XSD_INTEGER)));
        assert!(lexicals.contains(&format!("3.5^^{}", vocab::XSD_DECIMAL)));
        assert!(lexicals.contains(&format!("1.0e2^^{}", vocab::XSD_DOUBLE)));
        assert!(lexicals.contains(&format!("-7^^{}", vocab::XSD_INTEGER)));
        assert!(lexicals.contains(&format!("true^^{}", vocab::XSD_BOOLEAN)));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_graph("_:b0 <http://p> \"unterminated .", RdfFormat::NTriples)
            .unwrap_err();
        match err {
            FxError::RdfSyntax { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nquads_named_graphs() {
        let nq = "<http://s> <http://p> \"v\" <http://g> .\n<http://s> <http://p> \"w\" .\n";
        let ds = parse_dataset(nq, RdfFormat::NQuads).unwrap();
        assert_eq!(ds.default.len(), 1);
        assert_eq!(ds.named.len(), 1);
    }

    #[test]
    fn unknown_prefix_is_an_error() {
        let err = parse_graph("nope:s nope:p nope:o .", RdfFormat::Turtle).unwrap_err();
        assert!(err.to_string().contains("unknown prefix"));
    }

    #[test]
    fn collections_are_rejected() {
        let ttl = "@prefix x: <http://e/> . x:s x:p (1 2) .";
        let err = parse_graph(ttl, RdfFormat::Turtle).unwrap_err();
        assert!(err.to_string().contains("collections"));
    }
}
