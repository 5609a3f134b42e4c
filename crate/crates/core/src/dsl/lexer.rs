// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use super::ast::Span;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Number(f64),
    /// Identifier, possibly with `.suffix` parts (`s.r`).
    Ident(String),
    Str(String),
    Assign,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    /// `..`
    Curve,
    /// `...`
    Tense,
    /// `--`
    Line,
    /// `---`
    SmoothLine,
    Amp,
    Lt,
    Gt,
    Colon,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(_) => "string".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Assign => ":=",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Curve => "..",
            Tok::Tense => "...",
            Tok::Line => "--",
            Tok::SmoothLine => "---",
            Tok::Amp => "&",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Colon => ":",
            _ => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// No whitespace or comment between this token and the previous one.
    pub glued: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub message: String,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
    file: u16,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: usize, line: u32, col: u32) -> Span {
        Span {
            file: self.file,
            start: start as u32,
            end: self.pos as u32,
            line,
            col,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `src` into tokens. Unicode en and em dashes are read as `--` and
/// `---`, as they appear in typeset source.
pub fn lex(src: &str, file: u16) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        src,
        pos: 0,
        line: 1,
        col: 1,
        file,
    };
    let mut out = Vec::new();
    let mut glued = false;
    loop {
        // whitespace and comments
        let mut skipped = false;
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
                skipped = true;
            } else if c == '%' {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
                skipped = true;
            } else {
                break;
            }
        }
        if skipped {
            glued = false;
        }
        let (start, line, col) = (cur.pos, cur.line, cur.col);
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                span: cur.span_from(start, line, col),
                glued: false,
            });
            return Ok(out);
        };
        let tok = if c.is_ascii_digit() || (c == '.' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            while cur.peek().is_some_and(|d| d.is_ascii_digit()) {
                cur.bump();
            }
            if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                cur.bump();
                while cur.peek().is_some_and(|d| d.is_ascii_digit()) {
                    cur.bump();
                }
            }
            let text = &src[start..cur.pos];
            let value: f64 = text.parse().map_err(|_| LexError {
                message: format!("malformed number `{text}`"),
                span: cur.span_from(start, line, col),
            })?;
            Tok::Number(value)
        } else if is_ident_start(c) {
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            // suffixes: `s.r`, `z.l1`
            while cur.peek() == Some('.') && cur.peek_at(1).is_some_and(is_ident_start) {
                cur.bump();
                while cur.peek().is_some_and(is_ident_continue) {
                    cur.bump();
                }
            }
            Tok::Ident(src[start..cur.pos].to_string())
        } else if c == '"' {
            cur.bump();
            let body_start = cur.pos;
            loop {
                match cur.peek() {
                    Some('"') => break,
                    Some('\n') | None => {
                        return Err(LexError {
                            message: "unterminated string".into(),
                            span: cur.span_from(start, line, col),
                        })
                    }
                    _ => {
                        cur.bump();
                    }
                }
            }
            let body = src[body_start..cur.pos].to_string();
            cur.bump();
            Tok::Str(body)
        } else {
            cur.bump();
            match c {
                ':' if cur.peek() == Some('=') => {
                    cur.bump();
                    Tok::Assign
                }
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                '-' if cur.peek() == Some('-') => {
                    cur.bump();
                    if cur.peek() == Some('-') {
                        cur.bump();
                        Tok::SmoothLine
                    } else {
                        Tok::Line
                    }
                }
                '-' => Tok::Minus,
                '\u{2013}' => Tok::Line,
                '\u{2014}' => Tok::SmoothLine,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '&' => Tok::Amp,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '.' if cur.peek() == Some('.') => {
                    cur.bump();
                    if cur.peek() == Some('.') {
                        cur.bump();
                        Tok::Tense
                    } else {
                        Tok::Curve
                    }
                }
                '.' => Tok::Dot,
                other => {
                    return Err(LexError {
                        message: format!("unexpected character `{other}`"),
                        span: cur.span_from(start, line, col),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            span: cur.span_from(start, line, col),
            glued,
        });
        glued = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src, 0).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn joins_and_numbers() {
        assert_eq!(
            toks("z0..z1---z2--z3...(.8, 2.5)"),
            vec![
                Tok::Ident("z0".into()),
                Tok::Curve,
                Tok::Ident("z1".into()),
                Tok::SmoothLine,
                Tok::Ident("z2".into()),
                Tok::Line,
                Tok::Ident("z3".into()),
                Tok::Tense,
                Tok::LParen,
                Tok::Number(0.8),
                Tok::Comma,
                Tok::Number(2.5),
                Tok::RParen,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn suffixes_comments_and_typeset_dashes() {
        assert_eq!(
            toks("s.r % note\n(0,0) \u{2014} (1,0) \u{2013} (2,0)"),
            vec![
                Tok::Ident("s.r".into()),
                Tok::LParen,
                Tok::Number(0.0),
                Tok::Comma,
                Tok::Number(0.0),
                Tok::RParen,
                Tok::SmoothLine,
                Tok::LParen,
                Tok::Number(1.0),
                Tok::Comma,
                Tok::Number(0.0),
                Tok::RParen,
                Tok::Line,
                Tok::LParen,
                Tok::Number(2.0),
                Tok::Comma,
                Tok::Number(0.0),
                Tok::RParen,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn spans_track_lines_and_columns() {
        let t = lex("a :=\n  10;", 0).unwrap();
        assert_eq!((t[2].span.line, t[2].span.col), (2, 3));
        assert!(!t[2].glued && t[3].glued);
    }

    #[test]
    fn bad_character_is_reported() {
        let err = lex("a := 1 # 2", 0).unwrap_err();
        assert_eq!((err.span.line, err.span.col), (1, 8));
    }
}
