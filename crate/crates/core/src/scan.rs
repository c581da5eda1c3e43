//! Minimal whitespace-skipping scanner shared by the text grammars.

use crate::{Error, Result};
use alloc::format;
use alloc::string::String;

pub(crate) struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    /// Consumes `c` or fails.
    pub fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            Some(found) if found == c => {
                self.pos += found.len_utf8();
                Ok(())
            }
            other => Err(Error::Parse(format!(
                "expected '{c}' at byte {}, found {:?}",
                self.pos, other
            ))),
        }
    }

    /// Consumes `c` if present, reporting whether it did.
    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            Some(found) if found == c => {
                self.pos += found.len_utf8();
                true
            }
            _ => false,
        }
    }

    /// Consumes a literal keyword (no internal whitespace).
    pub fn expect_str(&mut self, s: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected \"{s}\" at byte {}",
                self.pos
            )))
        }
    }

    pub fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut pos = self.pos;
        if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
            pos += 1;
        }
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == digits_start {
            return Err(Error::Parse(format!("expected integer at byte {start}")));
        }
        self.pos = pos;
        self.src[start..pos]
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("integer out of range at byte {start}")))
    }

    pub fn uint(&mut self) -> Result<u64> {
        let v = self.int()?;
        u64::try_from(v).map_err(|_| Error::Parse(String::from("expected nonnegative integer")))
    }

    /// ASCII identifier: `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut pos = self.pos;
        if pos < bytes.len() && (bytes[pos].is_ascii_alphabetic() || bytes[pos] == b'_') {
            pos += 1;
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
        }
        if pos == start {
            return Err(Error::Parse(format!("expected identifier at byte {start}")));
        }
        self.pos = pos;
        Ok(String::from(&self.src[start..pos]))
    }

    /// Fails unless the remaining input is whitespace.
    pub fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "trailing input at byte {}: {:?}",
                self.pos,
                &self.src[self.pos..self.src.len().min(self.pos + 16)]
            )))
        }
    }
}
