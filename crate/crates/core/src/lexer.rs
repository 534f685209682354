//! Tokenizer shared by the algebra-file, state-expression and mode-table parsers.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned decimal integer literal.
    Int(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

const SYMBOLS: &str = "+-*/^(){}[],;:=|<>_.";

/// Splits `text` into tokens. `#` starts a comment running to the end of the
/// line. An underscore belongs to an identifier only when followed by an
/// alphanumeric character, so `L_{n}` lexes as `L`, `_`, `{`, `n`, `}`.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() {
                let d = chars[i];
                let joins = d == '_' && chars.get(i + 1).is_some_and(|e| e.is_ascii_alphanumeric() || *e == '_');
                if d.is_ascii_alphanumeric() || joins {
                    s.push(d);
                    i += 1;
                    col += 1;
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            Tok::Int(s)
        } else if SYMBOLS.contains(c) {
            i += 1;
            col += 1;
            Tok::Sym(c)
        } else {
            return Err(SyntaxError { line, col, message: format!("unexpected character `{c}`") });
        };
        out.push(Token { tok, line: start.0, col: start.1 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Cursor over a token list with error helpers.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Cursor, SyntaxError> {
        Ok(Cursor { toks: tokenize(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        let t = self.here();
        SyntaxError { line: t.line, col: t.col, message: message.into() }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", self.peek())))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.error(format!("expected an identifier, found {other}"))),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            other => Err(self.error(format!("expected `{kw}`, found {other}"))),
        }
    }

    pub fn expect_int(&mut self) -> Result<u64, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let v = s.parse().map_err(|_| self.error(format!("integer `{s}` is too large")))?;
                self.next();
                Ok(v)
            }
            other => Err(self.error(format!("expected an integer, found {other}"))),
        }
    }

    /// Parses `[-]p[/q]`.
    pub fn signed_rational(&mut self) -> Result<crate::symbolic::Q, SyntaxError> {
        let neg = self.eat_sym('-');
        let p = self.expect_int()? as i64;
        let q = if self.eat_sym('/') { self.expect_int()? as i64 } else { 1 };
        if q == 0 {
            return Err(self.error("zero denominator"));
        }
        let v = crate::symbolic::Q::new(p, q);
        Ok(if neg { -&v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn underscores_and_positions() {
        let toks = tokenize("L_{n+m} neveu_schwarz\n  J_1 |0>").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("L".into()));
        assert_eq!(kinds[1], Tok::Sym('_'));
        assert_eq!(kinds[7], Tok::Ident("neveu_schwarz".into()));
        assert_eq!(kinds[8], Tok::Ident("J_1".into()));
        assert_eq!((toks[8].line, toks[8].col), (2, 3));
        assert!(tokenize("a $ b").is_err());
    }
}
