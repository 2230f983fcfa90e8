//! Tokenizer. ASCII surface syntax, with `⊗ ∧ ∂ · − λ` accepted as input
//! aliases. Newlines end statements except inside brackets.

use crate::diag::{codes, Diagnostic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    Ox,
    Partial,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eq,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number {s}"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Wedge => "`^^`".into(),
            Tok::Ox => "`ox`".into(),
            Tok::Partial => "`∂`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    /// Byte range in the source.
    pub start: usize,
    pub end: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut line_start) = (1usize, 0usize);
    let mut depth = 0usize;
    while let Some(&(start, c)) = chars.peek() {
        let column = src[line_start..start].chars().count() + 1;
        let mut push = |tok: Tok, end: usize| {
            out.push(Token {
                tok,
                line,
                column,
                start,
                end,
            })
        };
        match c {
            '\n' | ';' => {
                chars.next();
                if depth == 0 {
                    push(Tok::Newline, start + 1);
                }
                if c == '\n' {
                    line += 1;
                    line_start = start + 1;
                }
            }
            '#' => {
                while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            c if ident_start(c) => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !ident_char(c) {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                let word = &src[start..end];
                push(if word == "ox" { Tok::Ox } else { Tok::Ident(word.to_string()) }, end);
            }
            c if c.is_ascii_digit() => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    end = i + 1;
                    chars.next();
                }
                push(Tok::Num(src[start..end].to_string()), end);
            }
            _ => {
                chars.next();
                let end = start + c.len_utf8();
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '·' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => {
                        if chars.peek().is_some_and(|&(_, c)| c == '^') {
                            chars.next();
                            push(Tok::Wedge, end + 1);
                            continue;
                        }
                        Tok::Caret
                    }
                    '∧' => Tok::Wedge,
                    '⊗' => Tok::Ox,
                    '∂' => Tok::Partial,
                    'λ' => Tok::Ident("lambda".into()),
                    '(' | '{' | '[' => {
                        depth += 1;
                        match c {
                            '(' => Tok::LParen,
                            '{' => Tok::LBrace,
                            _ => Tok::LBracket,
                        }
                    }
                    ')' | '}' | ']' => {
                        depth = depth.saturating_sub(1);
                        match c {
                            ')' => Tok::RParen,
                            '}' => Tok::RBrace,
                            _ => Tok::RBracket,
                        }
                    }
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '=' => Tok::Eq,
                    _ => {
                        return Err(Diagnostic::new(
                            codes::UNEXPECTED_CHAR,
                            format!("unexpected character `{c}`"),
                            line,
                            column,
                        ))
                    }
                };
                push(tok, end);
            }
        }
    }
    let column = src[line_start..].chars().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_aliases() {
        assert_eq!(
            kinds("d/dx ^^ dy ox x^2"),
            vec![
                Tok::Ident("d".into()),
                Tok::Slash,
                Tok::Ident("dx".into()),
                Tok::Wedge,
                Tok::Ident("dy".into()),
                Tok::Ox,
                Tok::Ident("x".into()),
                Tok::Caret,
                Tok::Num("2".into()),
                Tok::Eof
            ]
        );
        assert_eq!(kinds("a ∧ b ⊗ c · 2 − 1"), kinds("a ^^ b ox c * 2 - 1"));
    }

    #[test]
    fn newlines_inside_brackets_are_dropped() {
        let toks = kinds("chart M {\n x:0,\n y:1 }\n# comment\nfn f on M = x");
        assert_eq!(toks.iter().filter(|t| **t == Tok::Newline).count(), 2);
    }

    #[test]
    fn positions_and_errors() {
        let toks = tokenize("fn f\n  on").unwrap();
        assert_eq!((toks[3].line, toks[3].column), (2, 3));
        let err = tokenize("x = 1.5").unwrap_err();
        assert_eq!(err.code, "E101");
        assert_eq!((err.line, err.column), (1, 6));
    }
}
