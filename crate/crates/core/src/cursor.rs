//! Byte-level scanning shared by the scalar, tree, and expression parsers.

use crate::error::Error;
use crate::Result;

pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0 }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Peek at the next character, decoding UTF-8 (for '·' and '−').
    pub fn peek_char(&self) -> Option<char> {
        std::str::from_utf8(&self.src[self.pos.min(self.src.len())..])
            .ok()
            .and_then(|s| s.chars().next())
    }

    pub fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub fn bump_char(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    /// Rewinds to a position previously obtained from [`Cursor::pos`].
    pub fn restore(&mut self, pos: usize) {
        self.pos = pos;
    }

    /// 1-based line and column of a byte position.
    pub fn line_col_of(&self, pos: usize) -> (usize, usize) {
        let mut line = 1usize;
        let mut col = 1usize;
        for &b in &self.src[..pos.min(self.src.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    pub fn column(&self) -> usize {
        self.line_col_of(self.pos).1
    }

    pub fn err_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.line_col_of(pos);
        Error::syntax(line, column, message)
    }

    pub fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.pos, message)
    }

    pub fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err_at(start, "integer too large"))
    }

    /// Consumes `[A-Za-z][A-Za-z0-9_]*` if present.
    pub fn identifier(&mut self) -> Option<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if (c as char).is_ascii_alphabetic() => self.pos += 1,
            _ => return None,
        }
        while matches!(self.peek(), Some(c) if (c as char).is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Some(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
    }
}
