//! The plain-text structured document grammar shared by fan files and
//! machine-readable reports: `key ["name"] = value` entries where a value
//! is an integer, a quoted string, or a (possibly nested) list. UTF-8,
//! newline-agnostic, `#` comments to end of line.

use num_bigint::BigInt;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    Str(String),
    List(Vec<Value>),
}

impl Value {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_int().and_then(|i| i64::try_from(i.clone()).ok())
    }

    pub fn as_usize(&self) -> Option<usize> {
        self.as_int().and_then(|i| usize::try_from(i.clone()).ok())
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Value::Int(i) => out.push_str(&i.to_string()),
            Value::Str(s) => {
                out.push('"');
                out.push_str(s);
                out.push('"');
            }
            Value::List(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
        }
    }
}

pub fn int_value(i: i64) -> Value {
    Value::Int(BigInt::from(i))
}

pub fn str_value(s: impl Into<String>) -> Value {
    Value::Str(s.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub name: Option<String>,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub entries: Vec<Entry>,
}

impl Document {
    pub fn push(&mut self, key: &str, name: Option<&str>, value: Value) {
        self.entries.push(Entry {
            key: key.to_string(),
            name: name.map(str::to_string),
            value,
        });
    }

    pub fn first(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn all(&self, key: &str) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.key == key).collect()
    }

    pub fn parse(text: &str) -> Result<Document, ParseError> {
        Parser::new(text)?.parse_document()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.key);
            if let Some(name) = &e.name {
                out.push_str(" \"");
                out.push_str(name);
                out.push('"');
            }
            out.push_str(" = ");
            e.value.write(&mut out);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(BigInt),
    Str(String),
    Equals,
    LBracket,
    RBracket,
    Comma,
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let mut tokens = Vec::new();
        let mut line = 1usize;
        let mut col = 1usize;
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (tl, tc) = (line, col);
            match c {
                '\n' => {
                    chars.next();
                    line += 1;
                    col = 1;
                }
                c if c.is_whitespace() => {
                    chars.next();
                    col += 1;
                }
                '#' => {
                    while let Some(&c) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        chars.next();
                        col += 1;
                    }
                }
                '=' => {
                    chars.next();
                    col += 1;
                    tokens.push((Token::Equals, tl, tc));
                }
                '[' => {
                    chars.next();
                    col += 1;
                    tokens.push((Token::LBracket, tl, tc));
                }
                ']' => {
                    chars.next();
                    col += 1;
                    tokens.push((Token::RBracket, tl, tc));
                }
                ',' => {
                    chars.next();
                    col += 1;
                    tokens.push((Token::Comma, tl, tc));
                }
                '"' => {
                    chars.next();
                    col += 1;
                    let mut s = String::new();
                    let mut closed = false;
                    while let Some(&c) = chars.peek() {
                        chars.next();
                        col += 1;
                        if c == '"' {
                            closed = true;
                            break;
                        }
                        if c == '\n' {
                            line += 1;
                            col = 1;
                        }
                        s.push(c);
                    }
                    if !closed {
                        return Err(ParseError {
                            line: tl,
                            column: tc,
                            message: "unterminated string".into(),
                        });
                    }
                    tokens.push((Token::Str(s), tl, tc));
                }
                c if c == '-' || c.is_ascii_digit() => {
                    let mut s = String::new();
                    s.push(c);
                    chars.next();
                    col += 1;
                    while let Some(&c) = chars.peek() {
                        if c.is_ascii_digit() {
                            s.push(c);
                            chars.next();
                            col += 1;
                        } else {
                            break;
                        }
                    }
                    match s.parse::<BigInt>() {
                        Ok(i) => tokens.push((Token::Int(i), tl, tc)),
                        Err(_) => {
                            return Err(ParseError {
                                line: tl,
                                column: tc,
                                message: format!("malformed integer `{s}`"),
                            });
                        }
                    }
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&c) = chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            s.push(c);
                            chars.next();
                            col += 1;
                        } else {
                            break;
                        }
                    }
                    tokens.push((Token::Ident(s), tl, tc));
                }
                other => {
                    return Err(ParseError {
                        line: tl,
                        column: tc,
                        message: format!("unexpected character `{other}`"),
                    });
                }
            }
        }
        Ok(Parser {
            tokens,
            pos: 0,
            end_line: line,
            end_col: col,
        })
    }

    fn peek(&self) -> Option<&(Token, usize, usize)> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn parse_document(mut self) -> Result<Document, ParseError> {
        let mut doc = Document::default();
        while self.peek().is_some() {
            let key = match self.next_token() {
                Some(Token::Ident(s)) => s,
                _ => return Err(self.error("expected a key identifier")),
            };
            let name = match self.peek() {
                Some((Token::Str(_), _, _)) => match self.next_token() {
                    Some(Token::Str(s)) => Some(s),
                    _ => unreachable!(),
                },
                _ => None,
            };
            match self.next_token() {
                Some(Token::Equals) => {}
                _ => return Err(self.error(format!("expected `=` after key `{key}`"))),
            }
            let value = self.parse_value()?;
            doc.entries.push(Entry { key, name, value });
        }
        Ok(doc)
    }

    fn next_token(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_value(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some((Token::Int(_), _, _)) => match self.next_token() {
                Some(Token::Int(i)) => Ok(Value::Int(i)),
                _ => unreachable!(),
            },
            Some((Token::Str(_), _, _)) => match self.next_token() {
                Some(Token::Str(s)) => Ok(Value::Str(s)),
                _ => unreachable!(),
            },
            Some((Token::LBracket, _, _)) => {
                self.next_token();
                let mut items = Vec::new();
                loop {
                    match self.peek() {
                        Some((Token::RBracket, _, _)) => {
                            self.next_token();
                            break;
                        }
                        None => return Err(self.error("unterminated list")),
                        _ => {
                            items.push(self.parse_value()?);
                            match self.peek() {
                                Some((Token::Comma, _, _)) => {
                                    self.next_token();
                                }
                                Some((Token::RBracket, _, _)) => {}
                                None => return Err(self.error("unterminated list")),
                                _ => return Err(self.error("expected `,` or `]` in list")),
                            }
                        }
                    }
                }
                Ok(Value::List(items))
            }
            _ => Err(self.error("expected an integer, string, or list")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_entries() {
        let doc = Document::parse("rank = 2\ncone \"sigma\" = [[1,0],[0,1]]\n").unwrap();
        assert_eq!(doc.entries.len(), 2);
        assert_eq!(doc.entries[0].key, "rank");
        assert_eq!(doc.entries[0].value, int_value(2));
        assert_eq!(doc.entries[1].name.as_deref(), Some("sigma"));
    }

    #[test]
    fn newline_agnostic_and_comments() {
        let doc =
            Document::parse("# a fan\nrank\n  = 2\ncone = [\n  [1, 0],  # first ray\n  [0, 1]\n]")
                .unwrap();
        assert_eq!(doc.entries.len(), 2);
    }

    #[test]
    fn round_trip() {
        let mut doc = Document::default();
        doc.push("rank", None, int_value(3));
        doc.push(
            "cone",
            Some("c"),
            Value::List(vec![
                Value::List(vec![int_value(1), int_value(-2)]),
                str_value("x"),
            ]),
        );
        let text = doc.to_text();
        assert_eq!(Document::parse(&text).unwrap(), doc);
    }

    #[test]
    fn errors_carry_position() {
        let err = Document::parse("rank 2").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("="));

        let err = Document::parse("rank = [1, 2").unwrap_err();
        assert!(err.message.contains("unterminated"));

        let err = Document::parse("rank = 1.5").unwrap_err();
        assert_eq!(err.line, 1, "{err}");
    }
}
