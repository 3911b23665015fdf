//! The `.inet` text format: named diagrams plus queries with optional
//! expected verdicts, so a corpus file is self-checking.
//!
//! ```text
//! # comments run to end of line
//! net tweety {
//!   a -> b;  a -> c;  c -> b;  b -> d;  c !> d;
//! }
//! query tweety: a ? d expect neg;
//! ```
//!
//! `->` is a positive link, `!>` a negative one. Whitespace is free-form;
//! CRLF input is accepted and LF is emitted. Serialization is canonical:
//! nets first in declaration order with statements sorted, then queries in
//! declaration order, so `parse(serialize(f))` is structurally `f`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::net::{build_diagram, Diagram, Link, NetError, NodeId, Polarity, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{col}: expected {expected}, found {found:?}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}: net {net:?}: {source}")]
    InvalidNet {
        line: usize,
        net: String,
        source: NetError,
    },
    #[error("line {line}: duplicate net name {0:?}", .name)]
    DuplicateNet { line: usize, name: String },
    #[error("line {line}: query references unknown net {0:?}", .net)]
    UnknownNet { line: usize, net: String },
    #[error("line {line}: query node {node:?} is not in net {net:?}")]
    UnknownQueryNode {
        line: usize,
        net: String,
        node: String,
    },
}

/// A named diagram as declared in a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedNet {
    pub name: String,
    pub diagram: Diagram,
}

/// `query <net>: <subject> ? <predicate> [expect pos|neg|none];`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub net: String,
    pub subject: NodeId,
    pub predicate: NodeId,
    pub expected: Option<Verdict>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetFile {
    pub nets: Vec<NamedNet>,
    pub queries: Vec<Query>,
}

impl NetFile {
    pub fn net(&self, name: &str) -> Option<&NamedNet> {
        self.nets.iter().find(|n| n.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Arrow(Polarity),
    LBrace,
    RBrace,
    Semi,
    Colon,
    Question,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => s.clone(),
            Token::Arrow(Polarity::Positive) => "->".into(),
            Token::Arrow(Polarity::Negative) => "!>".into(),
            Token::LBrace => "{".into(),
            Token::RBrace => "}".into(),
            Token::Semi => ";".into(),
            Token::Colon => ":".into(),
            Token::Question => "?".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

type Spanned = (Token, usize, usize);

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, expected: &str, found: impl Into<String>) -> DslError {
        DslError::Syntax {
            line: self.line,
            col: self.col,
            expected: expected.to_string(),
            found: found.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, DslError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let token = match c {
                '{' => {
                    self.bump();
                    Token::LBrace
                }
                '}' => {
                    self.bump();
                    Token::RBrace
                }
                ';' => {
                    self.bump();
                    Token::Semi
                }
                ':' => {
                    self.bump();
                    Token::Colon
                }
                '?' => {
                    self.bump();
                    Token::Question
                }
                '-' => {
                    self.bump();
                    match self.chars.peek() {
                        Some('>') => {
                            self.bump();
                            Token::Arrow(Polarity::Positive)
                        }
                        other => {
                            let found = other.map(|c| c.to_string()).unwrap_or_default();
                            return Err(self.error("'>' after '-'", found));
                        }
                    }
                }
                '!' => {
                    self.bump();
                    match self.chars.peek() {
                        Some('>') => {
                            self.bump();
                            Token::Arrow(Polarity::Negative)
                        }
                        other => {
                            let found = other.map(|c| c.to_string()).unwrap_or_default();
                            return Err(self.error("'>' after '!'", found));
                        }
                    }
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Token::Ident(ident)
                }
                other => return Err(self.error("a token", other.to_string())),
            };
            out.push((token, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.at)
    }

    fn error_here(&self, expected: &str) -> DslError {
        match self.peek() {
            Some((t, line, col)) => DslError::Syntax {
                line: *line,
                col: *col,
                expected: expected.to_string(),
                found: t.describe(),
            },
            None => DslError::Syntax {
                line: self.end_line,
                col: self.end_col,
                expected: expected.to_string(),
                found: "end of input".to_string(),
            },
        }
    }

    fn next(&mut self, expected: &str) -> Result<Spanned, DslError> {
        match self.tokens.get(self.at) {
            Some(t) => {
                self.at += 1;
                Ok(t.clone())
            }
            None => Err(self.error_here(expected)),
        }
    }

    fn expect(&mut self, want: &Token, expected: &str) -> Result<usize, DslError> {
        let before = self.at;
        let (t, line, _) = self.next(expected)?;
        if &t == want {
            Ok(line)
        } else {
            self.at = before;
            Err(self.error_here(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, usize), DslError> {
        let before = self.at;
        let (t, line, _) = self.next(expected)?;
        match t {
            Token::Ident(s) => Ok((s, line)),
            _ => {
                self.at = before;
                Err(self.error_here(expected))
            }
        }
    }
}

/// Parses a `.inet` file.
pub fn parse(text: &str) -> Result<NetFile, DslError> {
    let text = text.replace("\r\n", "\n");
    let end_line = text.lines().count().max(1);
    let end_col = text.lines().last().map(|l| l.len() + 1).unwrap_or(1);
    let tokens = Lexer::new(&text).tokens()?;
    let mut p = Parser {
        tokens,
        at: 0,
        end_line,
        end_col,
    };

    let mut file = NetFile::default();
    while let Some((token, line, col)) = p.peek().cloned() {
        match token {
            Token::Ident(kw) if kw == "net" => {
                p.at += 1;
                let (name, name_line) = p.ident("a net name")?;
                if file.net(&name).is_some() {
                    return Err(DslError::DuplicateNet {
                        line: name_line,
                        name,
                    });
                }
                p.expect(&Token::LBrace, "'{'")?;
                let mut links = Vec::new();
                loop {
                    if p.expect(&Token::RBrace, "'}'").is_ok() {
                        break;
                    }
                    let (source, stmt_line) = p.ident("a node name or '}'")?;
                    let before = p.at;
                    let (t, _, _) = p.next("'->' or '!>'")?;
                    let polarity = match t {
                        Token::Arrow(pol) => pol,
                        _ => {
                            p.at = before;
                            return Err(p.error_here("'->' or '!>'"));
                        }
                    };
                    let (target, _) = p.ident("a node name")?;
                    p.expect(&Token::Semi, "';'")?;
                    let link = Link::new(
                        NodeId::new(source).expect("lexer yields valid idents"),
                        NodeId::new(target).expect("lexer yields valid idents"),
                        polarity,
                    )
                    .map_err(|source| DslError::InvalidNet {
                        line: stmt_line,
                        net: name.clone(),
                        source,
                    })?;
                    links.push(link);
                }
                let diagram = build_diagram([], links).map_err(|source| DslError::InvalidNet {
                    line,
                    net: name.clone(),
                    source,
                })?;
                file.nets.push(NamedNet { name, diagram });
            }
            Token::Ident(kw) if kw == "query" => {
                p.at += 1;
                let (net, net_line) = p.ident("a net name")?;
                p.expect(&Token::Colon, "':'")?;
                let (subject, subj_line) = p.ident("a subject node")?;
                p.expect(&Token::Question, "'?'")?;
                let (predicate, pred_line) = p.ident("a predicate node")?;
                let mut expected = None;
                if let Some((Token::Ident(kw), _, _)) = p.peek() {
                    if kw == "expect" {
                        p.at += 1;
                        let (verdict, _) = p.ident("'pos', 'neg' or 'none'")?;
                        expected = Some(match verdict.as_str() {
                            "pos" => Verdict::Positive,
                            "neg" => Verdict::Negative,
                            "none" => Verdict::None,
                            _ => {
                                p.at -= 1;
                                return Err(p.error_here("'pos', 'neg' or 'none'"));
                            }
                        });
                    }
                }
                p.expect(&Token::Semi, "';'")?;

                let Some(named) = file.net(&net) else {
                    return Err(DslError::UnknownNet {
                        line: net_line,
                        net,
                    });
                };
                let subject_id = NodeId::new(subject.clone()).expect("valid ident");
                let predicate_id = NodeId::new(predicate.clone()).expect("valid ident");
                for (node, node_line) in [(&subject_id, subj_line), (&predicate_id, pred_line)] {
                    if !named.diagram.contains(node) {
                        return Err(DslError::UnknownQueryNode {
                            line: node_line,
                            net,
                            node: node.as_str().to_string(),
                        });
                    }
                }
                file.queries.push(Query {
                    net,
                    subject: subject_id,
                    predicate: predicate_id,
                    expected,
                });
            }
            _ => {
                return Err(DslError::Syntax {
                    line,
                    col,
                    expected: "'net' or 'query'".to_string(),
                    found: token.describe(),
                });
            }
        }
    }
    Ok(file)
}

/// Canonical text: nets in declaration order with statements sorted by
/// (source, target, polarity), then queries in declaration order. LF line
/// endings.
pub fn serialize(file: &NetFile) -> String {
    let mut out = String::new();
    for named in &file.nets {
        let _ = writeln!(out, "net {} {{", named.name);
        let mut links: Vec<&Link> = named.diagram.links().iter().collect();
        links.sort_by(|a, b| {
            (&a.source, &a.target, a.polarity).cmp(&(&b.source, &b.target, b.polarity))
        });
        for l in links {
            let _ = writeln!(out, "  {} {} {};", l.source, l.polarity, l.target);
        }
        let _ = writeln!(out, "}}");
    }
    for q in &file.queries {
        let expect = match q.expected {
            None => String::new(),
            Some(Verdict::Positive) => " expect pos".to_string(),
            Some(Verdict::Negative) => " expect neg".to_string(),
            Some(Verdict::None) => " expect none".to_string(),
        };
        let _ = writeln!(
            out,
            "query {}: {} ? {}{};",
            q.net, q.subject, q.predicate, expect
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tweety_with_query() {
        let file =
            parse("net t { a->b; a->c; c->b; b->d; c!>d; } query t: a ? d expect neg;").unwrap();
        assert_eq!(file.nets.len(), 1);
        assert_eq!(file.nets[0].diagram.links().len(), 5);
        assert_eq!(file.queries.len(), 1);
        assert_eq!(file.queries[0].expected, Some(Verdict::Negative));
    }

    #[test]
    fn parses_nixon() {
        let file = parse("net n { a->b; a->c; b->d; c!>d; }").unwrap();
        let d = &file.net("n").unwrap().diagram;
        assert_eq!(d.nodes().len(), 4);
        assert_eq!(d.links().len(), 4);
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse("net x { a -> ; }").unwrap_err();
        match err {
            DslError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 14);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_crlf_are_accepted() {
        let file = parse("# heading\r\nnet t { # inline\r\n a->b;\r\n}\r\n").unwrap();
        assert_eq!(file.nets.len(), 1);
    }

    #[test]
    fn semantic_errors_carry_line_numbers() {
        let err = parse("net bad {\n a->b;\n b->a;\n}").unwrap_err();
        assert!(matches!(
            err,
            DslError::InvalidNet {
                source: NetError::CycleDetected(_),
                ..
            }
        ));
        let err = parse("net ok { a->b; }\nquery nope: a ? b;").unwrap_err();
        assert!(matches!(err, DslError::UnknownNet { line: 2, .. }));
        let err = parse("net ok { a->b; }\nquery ok: a ? q;").unwrap_err();
        assert!(matches!(err, DslError::UnknownQueryNode { .. }));
    }

    #[test]
    fn duplicate_net_rejected() {
        let err = parse("net t { a->b; } net t { c->d; }").unwrap_err();
        assert!(matches!(err, DslError::DuplicateNet { .. }));
    }

    #[test]
    fn round_trips_canonically() {
        let source = "net t { c!>d; a->b; a->c; c->b; b->d; } query t: a ? d expect neg;";
        let file = parse(source).unwrap();
        let text = serialize(&file);
        let reparsed = parse(&text).unwrap();
        assert_eq!(file, reparsed);
        assert_eq!(text, serialize(&reparsed));
        assert!(text.contains("expect neg"));
    }

    #[test]
    fn empty_file_serializes_empty() {
        let file = NetFile::default();
        assert_eq!(serialize(&file), "");
        assert_eq!(parse("").unwrap(), file);
    }
}
