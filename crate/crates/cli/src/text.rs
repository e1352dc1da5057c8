//! Line-oriented helpers shared by the text formats.

use std::fmt::Display;
use std::str::{FromStr, SplitWhitespace};

use thiserror::Error;

/// A parse failure at a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Iterates nonblank lines, remembering the current line number.
pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Line number of the most recent line, or of end-of-file after exhaustion.
    pub fn line(&self) -> usize {
        self.last
    }

    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            if !l.trim().is_empty() {
                return Some((i + 1, l.trim()));
            }
        }
        self.last += 1;
        None
    }

    pub fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.next_line() {
            Some(l) => Ok(l),
            None => Err(ParseError::new(self.last, format!("unexpected end of file, expected {what}"))),
        }
    }

    /// Fails if any nonblank line remains.
    pub fn finish(mut self, what: &str) -> Result<(), ParseError> {
        match self.next_line() {
            Some((line, _)) => Err(ParseError::new(line, format!("unexpected content after {what}"))),
            None => Ok(()),
        }
    }
}

pub(crate) fn field<T: FromStr>(line: usize, name: &str, s: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| ParseError::new(line, format!("invalid {name} `{s}`")))
}

pub(crate) fn finite(line: usize, name: &str, s: &str) -> Result<f64, ParseError> {
    let v: f64 = field(line, name, s)?;
    if !v.is_finite() {
        return Err(ParseError::new(line, format!("non-finite {name} `{s}`")));
    }
    Ok(v)
}

/// Splits a header of the form `<magic> v1 <fields…>`.
pub(crate) fn header<'a>(line: usize, text: &'a str, magic: &str) -> Result<SplitWhitespace<'a>, ParseError> {
    let mut parts = text.split_whitespace();
    if parts.next() != Some(magic) {
        return Err(ParseError::new(line, format!("expected `{magic}` header")));
    }
    match parts.next() {
        Some("v1") => Ok(parts),
        Some(v) => Err(ParseError::new(line, format!("unsupported {magic} version `{v}`"))),
        None => Err(ParseError::new(line, "missing format version")),
    }
}

pub(crate) fn join<T: Display>(values: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for (i, v) in values.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&v.to_string());
    }
    out
}
