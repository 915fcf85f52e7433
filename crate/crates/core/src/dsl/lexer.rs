use std::sync::Arc;

use crate::dsl::{ErrorKind, ParseError};
use crate::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Dot,
    Eq,
    Ne,
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits source text into tokens. `//` starts a comment running to end of
/// line. `≠` and `→` are accepted for `!=` and `->`.
pub(crate) fn lex(text: &str, file: &Arc<str>) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);
    let span = |line, col, len| SourceSpan::new(file.clone(), line, col, len);

    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '/' {
            chars.next();
            col += 1;
            if chars.peek() == Some(&'/') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            return Err(ParseError::new(
                ErrorKind::Lexical,
                span(l0, c0, 1),
                "unexpected character `/`",
                vec!["`//`".into()],
            ));
        }
        if c.is_ascii_alphabetic() || c == '_' || c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let len = s.len() as u32;
            out.push(Token {
                tok: Tok::Ident(s),
                span: span(l0, c0, len),
            });
            continue;
        }
        chars.next();
        col += 1;
        let (tok, len) = match c {
            '.' => (Tok::Dot, 1),
            '=' => (Tok::Eq, 1),
            '≠' => (Tok::Ne, 1),
            '→' => (Tok::Arrow, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '!' if chars.peek() == Some(&'=') => {
                chars.next();
                col += 1;
                (Tok::Ne, 2)
            }
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                col += 1;
                (Tok::Arrow, 2)
            }
            other => {
                return Err(ParseError::new(
                    ErrorKind::Lexical,
                    span(l0, c0, 1),
                    format!("unexpected character `{other}`"),
                    Vec::new(),
                ))
            }
        };
        out.push(Token {
            tok,
            span: span(l0, c0, len),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(line, col, 0),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, &Arc::from("t")).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_unicode_aliases() {
        assert_eq!(toks("a != b ≠ c -> d → e"), vec![
            Tok::Ident("a".into()),
            Tok::Ne,
            Tok::Ident("b".into()),
            Tok::Ne,
            Tok::Ident("c".into()),
            Tok::Arrow,
            Tok::Ident("d".into()),
            Tok::Arrow,
            Tok::Ident("e".into()),
            Tok::Eof
        ]);
    }

    #[test]
    fn comments_and_positions() {
        let t = lex("// hi\n  foo.bar // x\n}", &Arc::from("t")).unwrap();
        assert_eq!(t[0].tok, Tok::Ident("foo".into()));
        assert_eq!((t[0].span.line, t[0].span.column, t[0].span.length), (2, 3, 3));
        assert_eq!((t[2].span.line, t[2].span.column), (2, 7));
        assert_eq!((t[3].span.line, t[3].span.column), (3, 1));
    }

    #[test]
    fn stray_character_is_lexical_error() {
        let e = lex("a\n  $", &Arc::from("t")).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Lexical);
        assert_eq!((e.span.line, e.span.column), (2, 3));
    }
}
