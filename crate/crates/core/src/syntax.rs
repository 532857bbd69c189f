//! Parsers and serializers for the mini triple syntax used by data
//! files (`.dg`) and query files (`.rq`).
//!
//! Grammar, data mode: `triple := term term term`, triples separated by
//! `.` with the trailing dot optional; `#` starts a line comment. Terms:
//! `:name` (abbreviated IRI), `<...>` (full IRI), `"..."` (literal with
//! `\"`, `\\`, `\n`, `\t` escapes), `_:label` (blank), `?label`
//! (variable; rejected in data mode). An optional leading
//! `@prefix : <...> .` resolves abbreviated IRIs; without it the
//! abbreviated label is the IRI identity. This is a deliberately small
//! syntax, not the W3C Turtle or SPARQL grammars.

use std::fmt;

use thiserror::Error;

use crate::fresh::RESERVED_PREFIX;
use crate::graph::{Graph, Triple};
use crate::select::{SelectError, SelectQuery};
use crate::term::Term;

/// Position of a token in the source text. 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: syntax error: expected {expected}")]
    Syntax { span: SourceSpan, expected: String },
    #[error("{span}: unterminated {what}")]
    Unterminated { span: SourceSpan, what: &'static str },
    #[error("{span}: variables are not allowed in data graphs")]
    VariableInData { span: SourceSpan },
    #[error("{span}: blank labels starting with \"{RESERVED_PREFIX}\" are reserved")]
    ReservedBlankPrefix { span: SourceSpan },
    #[error(transparent)]
    Select(#[from] SelectError),
}

/// A parsed query file: either a CONSTRUCT pattern/template pair or a
/// SELECT query. The CONSTRUCT pair is raw; rule construction (blank
/// disjointness, unbound-variable policy) happens at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedQuery {
    Construct { pattern: Graph, template: Graph },
    Select(SelectQuery),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Term(Term),
    Dot,
    LBrace,
    RBrace,
    Word(String),
    Prefix,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn span(&self) -> SourceSpan {
        SourceSpan { line: self.line, column: self.col, offset: self.pos }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.bump();
            } else if c == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn is_name_byte(c: u8) -> bool {
        c.is_ascii_alphanumeric() || c == b'_' || c == b'-' || c == b':'
    }

    fn take_name(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if Self::is_name_byte(c) {
                self.bump();
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn tokens(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let span = self.span();
            let Some(c) = self.peek() else { break };
            let tok = match c {
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b':' => {
                    self.bump();
                    let name = self.take_name();
                    if name.is_empty() {
                        // a bare ':' is the empty-prefix name in @prefix
                        Tok::Word(":".into())
                    } else {
                        Tok::Term(Term::iri(name))
                    }
                }
                b'<' => {
                    self.bump();
                    let start = self.pos;
                    loop {
                        match self.peek() {
                            Some(b'>') => break,
                            Some(_) => {
                                self.bump();
                            }
                            None => {
                                return Err(ParseError::Unterminated { span, what: "IRI" })
                            }
                        }
                    }
                    let iri = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    self.bump();
                    Tok::Term(Term::iri(iri))
                }
                b'"' => {
                    self.bump();
                    // collect raw bytes; escapes are ASCII, so the result
                    // stays valid UTF-8 whenever the input was
                    let mut value = Vec::new();
                    loop {
                        match self.bump() {
                            Some(b'"') => break,
                            Some(b'\\') => match self.bump() {
                                Some(b'"') => value.push(b'"'),
                                Some(b'\\') => value.push(b'\\'),
                                Some(b'n') => value.push(b'\n'),
                                Some(b't') => value.push(b'\t'),
                                _ => {
                                    return Err(ParseError::Syntax {
                                        span,
                                        expected: "escape: one of \\\" \\\\ \\n \\t".into(),
                                    })
                                }
                            },
                            Some(other) => value.push(other),
                            None => {
                                return Err(ParseError::Unterminated { span, what: "literal" })
                            }
                        }
                    }
                    Tok::Term(Term::literal(String::from_utf8_lossy(&value).into_owned()))
                }
                b'_' => {
                    self.bump();
                    if self.peek() != Some(b':') {
                        return Err(ParseError::Syntax {
                            span,
                            expected: "':' after '_' in a blank label".into(),
                        });
                    }
                    self.bump();
                    let name = self.take_name();
                    if name.is_empty() {
                        return Err(ParseError::Syntax { span, expected: "blank label".into() });
                    }
                    if name.starts_with(RESERVED_PREFIX) {
                        return Err(ParseError::ReservedBlankPrefix { span });
                    }
                    Tok::Term(Term::blank(name))
                }
                b'?' => {
                    self.bump();
                    let name = self.take_name();
                    if name.is_empty() {
                        return Err(ParseError::Syntax { span, expected: "variable name".into() });
                    }
                    Tok::Term(Term::variable(name))
                }
                b'@' => {
                    self.bump();
                    let word = self.take_name();
                    if word.eq_ignore_ascii_case("prefix") {
                        Tok::Prefix
                    } else {
                        return Err(ParseError::Syntax { span, expected: "@prefix".into() });
                    }
                }
                c if c.is_ascii_alphabetic() => Tok::Word(self.take_name()),
                _ => {
                    return Err(ParseError::Syntax {
                        span,
                        expected: "a term, '.', '{' or '}'".into(),
                    })
                }
            };
            out.push(Token { tok, span });
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: SourceSpan,
    prefix: Option<String>,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        // walk once to find the end position for eof spans
        let end = {
            let mut probe = Lexer::new(text);
            while probe.bump().is_some() {}
            probe.span()
        };
        let tokens = Lexer::new(text).tokens()?;
        Ok(Parser { tokens, pos: 0, end, prefix: None })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn span(&self) -> SourceSpan {
        self.peek().map(|t| t.span).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, expected: &str) -> Result<(), ParseError> {
        match self.bump() {
            Some(t) if &t.tok == want => Ok(()),
            Some(t) => Err(ParseError::Syntax { span: t.span, expected: expected.into() }),
            None => Err(ParseError::Syntax { span: self.end, expected: expected.into() }),
        }
    }

    fn maybe_prefix_directive(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Prefix)) {
            self.bump();
            self.expect(&Tok::Word(":".into()), "':'")?;
            match self.bump() {
                Some(Token { tok: Tok::Term(t), .. }) if t.kind == crate::term::TermKind::Iri => {
                    self.prefix = Some(t.label);
                }
                Some(t) => {
                    return Err(ParseError::Syntax { span: t.span, expected: "<IRI>".into() })
                }
                None => {
                    return Err(ParseError::Syntax { span: self.end, expected: "<IRI>".into() })
                }
            }
            self.expect(&Tok::Dot, "'.' after @prefix directive")?;
        }
        Ok(())
    }

    fn term(&mut self, allow_variables: bool) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Token { tok: Tok::Term(t), span }) => {
                if t.is_variable() && !allow_variables {
                    return Err(ParseError::VariableInData { span });
                }
                Ok(self.resolve(t))
            }
            Some(t) => Err(ParseError::Syntax { span: t.span, expected: "a term".into() }),
            None => Err(ParseError::Syntax { span: self.end, expected: "a term".into() }),
        }
    }

    fn resolve(&self, t: Term) -> Term {
        match (&self.prefix, t.kind) {
            (Some(base), crate::term::TermKind::Iri) if !t.label.contains("://") => {
                Term::iri(format!("{}{}", base, t.label))
            }
            _ => t,
        }
    }

    /// `term term term (. term term term)* .?` until `stop` or eof.
    fn pattern(&mut self, allow_variables: bool, stop: Option<&Tok>) -> Result<Graph, ParseError> {
        let mut g = Graph::new();
        loop {
            match self.peek() {
                None => break,
                Some(t) if Some(&t.tok) == stop => break,
                Some(Token { tok: Tok::Dot, .. }) => {
                    self.bump();
                    continue;
                }
                _ => {}
            }
            let s = self.term(allow_variables)?;
            let p = self.term(allow_variables)?;
            let o = self.term(allow_variables)?;
            g.insert(Triple::new(s, p, o));
            match self.peek() {
                None => break,
                Some(t) if Some(&t.tok) == stop => break,
                Some(Token { tok: Tok::Dot, .. }) => {
                    self.bump();
                }
                Some(t) => {
                    return Err(ParseError::Syntax {
                        span: t.span,
                        expected: "'.' between triples".into(),
                    })
                }
            }
        }
        Ok(g)
    }
}

/// Parse a data graph: triples without variables.
pub fn parse_data(text: &str) -> Result<Graph, ParseError> {
    let mut p = Parser::new(text)?;
    p.maybe_prefix_directive()?;
    let g = p.pattern(false, None)?;
    match p.peek() {
        None => Ok(g),
        Some(t) => Err(ParseError::Syntax { span: t.span, expected: "end of input".into() }),
    }
}

/// Parse a query: `CONSTRUCT { template } WHERE { pattern }` or
/// `SELECT ?v ... WHERE { pattern }`. Keywords are case-insensitive.
pub fn parse_query(text: &str) -> Result<ParsedQuery, ParseError> {
    let mut p = Parser::new(text)?;
    p.maybe_prefix_directive()?;
    let keyword = match p.bump() {
        Some(Token { tok: Tok::Word(w), .. }) => w,
        Some(t) => {
            return Err(ParseError::Syntax {
                span: t.span,
                expected: "CONSTRUCT or SELECT".into(),
            })
        }
        None => {
            return Err(ParseError::Syntax {
                span: p.end,
                expected: "CONSTRUCT or SELECT".into(),
            })
        }
    };
    let query = if keyword.eq_ignore_ascii_case("construct") {
        p.expect(&Tok::LBrace, "'{'")?;
        let template = p.pattern(true, Some(&Tok::RBrace))?;
        p.expect(&Tok::RBrace, "'}'")?;
        expect_where(&mut p)?;
        p.expect(&Tok::LBrace, "'{'")?;
        let pattern = p.pattern(true, Some(&Tok::RBrace))?;
        p.expect(&Tok::RBrace, "'}'")?;
        ParsedQuery::Construct { pattern, template }
    } else if keyword.eq_ignore_ascii_case("select") {
        let mut projection = Vec::new();
        loop {
            match p.peek() {
                Some(Token { tok: Tok::Term(t), .. }) if t.is_variable() => {
                    projection.push(t.clone());
                    p.bump();
                }
                _ => break,
            }
        }
        if projection.is_empty() {
            return Err(ParseError::Syntax {
                span: p.span(),
                expected: "at least one projection variable".into(),
            });
        }
        expect_where(&mut p)?;
        p.expect(&Tok::LBrace, "'{'")?;
        let pattern = p.pattern(true, Some(&Tok::RBrace))?;
        p.expect(&Tok::RBrace, "'}'")?;
        ParsedQuery::Select(SelectQuery::new(pattern, projection)?)
    } else {
        return Err(ParseError::Syntax {
            span: p.tokens[p.pos - 1].span,
            expected: "CONSTRUCT or SELECT".into(),
        });
    };
    match p.peek() {
        None => Ok(query),
        Some(t) => Err(ParseError::Syntax { span: t.span, expected: "end of input".into() }),
    }
}

fn expect_where(p: &mut Parser) -> Result<(), ParseError> {
    match p.bump() {
        Some(Token { tok: Tok::Word(w), .. }) if w.eq_ignore_ascii_case("where") => Ok(()),
        Some(t) => Err(ParseError::Syntax { span: t.span, expected: "WHERE".into() }),
        None => Err(ParseError::Syntax { span: p.end, expected: "WHERE".into() }),
    }
}

/// Whether an IRI label must be written in `<...>` form to survive a
/// round trip through the abbreviated syntax.
pub(crate) fn iri_needs_brackets(label: &str) -> bool {
    label.is_empty() || !label.bytes().all(Lexer::is_name_byte)
}

pub(crate) fn escape_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

/// Serialize a graph, one triple per line in canonical order, ` . `
/// separating triples. With `canonical_blanks`, blanks are relabeled
/// `b1, b2, ...` in first-occurrence order first.
pub fn serialize_graph(g: &Graph, canonical_blanks: bool) -> String {
    let g = if canonical_blanks { canonicalize_blanks(g) } else { g.clone() };
    let lines: Vec<String> = g
        .iter()
        .map(|t| format!("{} {} {}", t.subject, t.predicate, t.object))
        .collect();
    lines.join(" .\n")
}

/// Relabel blanks `b1, b2, ...` in first-occurrence order over the
/// canonical triple iteration.
pub fn canonicalize_blanks(g: &Graph) -> Graph {
    let mut renaming = std::collections::BTreeMap::new();
    let mut counter = 0usize;
    for t in g {
        for a in t.terms() {
            if a.is_blank() && !renaming.contains_key(a) {
                counter += 1;
                renaming.insert(a.clone(), Term::blank(format!("b{}", counter)));
            }
        }
    }
    g.map_attributes(&renaming)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_triples() {
        let g = parse_data(":alice :name \"Alice\" . :alice :nick \"Lissie\"").unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&Triple::new(
            Term::iri("alice"),
            Term::iri("name"),
            Term::literal("Alice")
        )));
    }

    #[test]
    fn empty_and_comment_only_inputs() {
        assert!(parse_data("").unwrap().is_empty());
        assert!(parse_data("# just a comment\n  \n").unwrap().is_empty());
    }

    #[test]
    fn trailing_dot_is_optional() {
        let a = parse_data(":a :p :b .").unwrap();
        let b = parse_data(":a :p :b").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn variables_rejected_in_data() {
        let err = parse_data(":a :b ?x").unwrap_err();
        assert!(matches!(err, ParseError::VariableInData { .. }));
    }

    #[test]
    fn reserved_blank_prefix_rejected() {
        let err = parse_data("_:fresh1 :p :o").unwrap_err();
        assert!(matches!(err, ParseError::ReservedBlankPrefix { .. }));
    }

    #[test]
    fn error_spans_point_into_input() {
        let text = ":a :b\n?x";
        match parse_data(text).unwrap_err() {
            ParseError::VariableInData { span } => {
                assert_eq!(span.line, 2);
                assert_eq!(span.column, 1);
                assert!(span.offset < text.len());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_full_iri_and_prefix_directive() {
        let g = parse_data("@prefix : <http://example.org/> .\n:alice :knows <http://other/bob>")
            .unwrap();
        let attrs = g.attributes();
        assert!(attrs.contains(&Term::iri("http://example.org/alice")));
        assert!(attrs.contains(&Term::iri("http://other/bob")));
    }

    #[test]
    fn parse_construct_query() {
        let q = parse_query("CONSTRUCT { ?x :FN ?name } WHERE { ?x :name ?name }").unwrap();
        match q {
            ParsedQuery::Construct { pattern, template } => {
                assert_eq!(pattern.len(), 1);
                assert_eq!(template.len(), 1);
                assert!(template.attributes().contains(&Term::iri("FN")));
            }
            _ => panic!("expected construct"),
        }
    }

    #[test]
    fn parse_select_query() {
        let q = parse_query(
            "SELECT ?nameX ?nameY\nWHERE { ?x :knows ?y . ?x :name ?nameX . ?y :name ?nameY }",
        )
        .unwrap();
        match q {
            ParsedQuery::Select(s) => {
                assert_eq!(s.pattern().len(), 3);
                assert_eq!(
                    s.projection(),
                    [Term::variable("nameX"), Term::variable("nameY")]
                );
            }
            _ => panic!("expected select"),
        }
    }

    #[test]
    fn keywords_are_case_insensitive() {
        assert!(parse_query("construct { ?x :p ?y } where { ?x :q ?y }").is_ok());
        assert!(parse_query("Select ?x WHERE { ?x :p ?y }").is_ok());
    }

    #[test]
    fn select_validation_errors() {
        assert_eq!(
            parse_query("SELECT ?z WHERE { ?x :p ?y }").unwrap_err(),
            ParseError::Select(SelectError::ProjectionNotInPattern(Term::variable("z")))
        );
        assert_eq!(
            parse_query("SELECT ?x ?x WHERE { ?x :p ?y }").unwrap_err(),
            ParseError::Select(SelectError::DuplicateProjectionVar(Term::variable("x")))
        );
    }

    #[test]
    fn serialize_round_trip() {
        let text = ":alice :knows _:b .\n_:c :knows :bob .\n:alice :says \"hi, \\\"you\\\"\\n\"";
        let g = parse_data(text).unwrap();
        let round = parse_data(&serialize_graph(&g, false)).unwrap();
        assert_eq!(g, round);
    }

    #[test]
    fn serialize_empty_graph() {
        assert_eq!(serialize_graph(&Graph::new(), true), "");
    }

    #[test]
    fn canonical_blank_labels() {
        let g = parse_data("_:zz :FN \"Alice\" . _:aa :FN \"Bob\"").unwrap();
        let text = serialize_graph(&g, true);
        assert_eq!(text, "_:b1 :FN \"Bob\" .\n_:b2 :FN \"Alice\"");
    }

    #[test]
    fn full_iri_survives_round_trip() {
        let g: Graph = [Triple::new(
            Term::iri("http://example.org/x"),
            Term::iri("p"),
            Term::literal("tab\there"),
        )]
        .into_iter()
        .collect();
        let round = parse_data(&serialize_graph(&g, false)).unwrap();
        assert_eq!(g, round);
    }
}
