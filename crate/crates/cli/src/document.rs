//! Matrix files: one bracketed matrix plus optional `key: value` lines.
//!
//! ```text
//! # comment
//! depth: 2
//! class: positive
//! [[1 - t, 1 + t],
//!  [1 + t^2, 1 - t]]
//! ```
//!
//! Recognised keys are `depth`, `tol`, `delta`, `seed` and `class`
//! (`subtraction-free`, `positive` or `nonnegative`).

use std::fmt;
use std::str::FromStr;

use perron_core::series_core::Positivity;
use perron_core::{Exponent, PuiseuxMatrix};

use crate::parse::{parse_entry, ParseError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocumentError {
    #[error("line {line}: {source}")]
    Entry { line: usize, source: ParseError },
    #[error("byte {0}: {1}")]
    Syntax(usize, String),
    #[error("line {0}: unknown option '{1}'")]
    UnknownOption(usize, String),
    #[error("line {0}: bad value for '{1}'")]
    BadValue(usize, String),
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("matrix is declared {declared} but is {found:?}")]
    ClassMismatch { declared: SignClass, found: Positivity },
    #[error("no matrix found")]
    Missing,
}

/// Sign class a document may declare for its matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    SubtractionFree,
    Positive,
    Nonnegative,
}

impl SignClass {
    /// True when `y` belongs to the class.
    pub fn holds_for(self, y: &PuiseuxMatrix) -> bool {
        let no_zero = y.entries().iter().all(|x| !x.is_zero());
        match (self, y.positivity()) {
            (SignClass::SubtractionFree, p) => p == Positivity::SubtractionFree,
            (SignClass::Positive, Positivity::Positive) => true,
            (SignClass::Positive, Positivity::SubtractionFree) => no_zero,
            (SignClass::Positive, _) => false,
            (SignClass::Nonnegative, p) => p.is_nonnegative(),
        }
    }
}

impl FromStr for SignClass {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "subtraction-free" => Ok(SignClass::SubtractionFree),
            "positive" => Ok(SignClass::Positive),
            "nonnegative" => Ok(SignClass::Nonnegative),
            _ => Err(()),
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::SubtractionFree => "subtraction-free",
            SignClass::Positive => "positive",
            SignClass::Nonnegative => "nonnegative",
        })
    }
}

/// Run options stored in a file; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DocumentOptions {
    pub depth: Option<Exponent>,
    pub tol: Option<f64>,
    pub delta: Option<Exponent>,
    pub seed: Option<u64>,
    pub class: Option<SignClass>,
}

/// A parsed matrix file.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub(crate) entries: Vec<Vec<String>>,
    pub(crate) matrix: PuiseuxMatrix,
    pub(crate) options: DocumentOptions,
}

impl MatrixDocument {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry expressions as written, row by row.
    pub fn entries(&self) -> &[Vec<String>] {
        &self.entries
    }

    pub fn matrix(&self) -> &PuiseuxMatrix {
        &self.matrix
    }

    pub fn options(&self) -> &DocumentOptions {
        &self.options
    }
}

/// An entry's text with its byte offset in the file.
struct Span<'a> {
    start: usize,
    text: &'a str,
}

impl FromStr for MatrixDocument {
    type Err = DocumentError;

    fn from_str(text: &str) -> Result<Self, DocumentError> {
        // Comments become spaces so that byte offsets stay valid.
        let mut clean = String::with_capacity(text.len());
        let mut in_comment = false;
        for c in text.chars() {
            in_comment = c != '\n' && (in_comment || c == '#');
            if in_comment {
                clean.extend(std::iter::repeat_n(' ', c.len_utf8()));
            } else {
                clean.push(c);
            }
        }
        let mut options = DocumentOptions::default();
        let mut rows: Option<Vec<Vec<Span<'_>>>> = None;
        let mut offset = 0;
        while offset < clean.len() {
            let rest = &clean[offset..];
            let trimmed = rest.trim_start();
            let at = offset + rest.len() - trimmed.len();
            if trimmed.is_empty() {
                break;
            }
            if trimmed.starts_with('[') {
                if rows.is_some() {
                    return Err(DocumentError::Syntax(at, "a second matrix".into()));
                }
                let (parsed, end) = split_matrix(&clean, at)?;
                rows = Some(parsed);
                offset = end;
            } else {
                let end = trimmed.find('\n').map_or(clean.len(), |i| at + i);
                read_option(&clean[at..end], line_of(&clean, at), &mut options)?;
                offset = end;
            }
        }
        let rows = rows.ok_or(DocumentError::Missing)?;
        let n = rows.len();
        let mut series = Vec::with_capacity(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(DocumentError::Ragged { row: r + 1, found: row.len(), expected: n });
            }
            for span in row {
                let parsed = parse_entry(span.text).map_err(|e| {
                    let source = e.shifted(span.start);
                    DocumentError::Entry { line: line_of(text, source.offset), source }
                })?;
                series.push(parsed);
            }
        }
        let matrix = PuiseuxMatrix::new(n, n, series).map_err(|e| DocumentError::Syntax(0, e.to_string()))?;
        if let Some(class) = options.class {
            if !class.holds_for(&matrix) {
                return Err(DocumentError::ClassMismatch { declared: class, found: matrix.positivity() });
            }
        }
        let entries =
            rows.iter().map(|row| row.iter().map(|s| s.text.trim().to_string()).collect()).collect();
        Ok(MatrixDocument { entries, matrix, options })
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn read_option(line: &str, number: usize, options: &mut DocumentOptions) -> Result<(), DocumentError> {
    let (key, value) =
        line.split_once(':').ok_or_else(|| DocumentError::UnknownOption(number, line.trim().to_string()))?;
    let (key, value) = (key.trim(), value.trim());
    let bad = || DocumentError::BadValue(number, key.to_string());
    match key {
        "depth" => options.depth = Some(value.parse().map_err(|_| bad())?),
        "tol" => options.tol = Some(value.parse().map_err(|_| bad())?),
        "delta" => options.delta = Some(value.parse().map_err(|_| bad())?),
        "seed" => options.seed = Some(value.parse().map_err(|_| bad())?),
        "class" => options.class = Some(value.parse().map_err(|_| bad())?),
        _ => return Err(DocumentError::UnknownOption(number, key.to_string())),
    }
    Ok(())
}

/// Splits `[[a, b], [c, d]]` starting at `start` into entry spans.
///
/// Returns the rows and the offset just past the closing bracket.
fn split_matrix(text: &str, start: usize) -> Result<(Vec<Vec<Span<'_>>>, usize), DocumentError> {
    let mut rows = Vec::new();
    let mut row: Vec<Span<'_>> = Vec::new();
    let mut depth = 0usize;
    let mut entry_start = start;
    let mut expect_row = true;
    for (i, c) in text[start..].char_indices() {
        let at = start + i;
        match c {
            '[' => {
                depth += 1;
                if depth > 2 {
                    return Err(DocumentError::Syntax(at, "brackets nested too deeply".into()));
                }
                if depth == 2 {
                    if !expect_row {
                        return Err(DocumentError::Syntax(at, "expected ',' between rows".into()));
                    }
                    entry_start = at + 1;
                    expect_row = false;
                }
            }
            ']' => {
                match depth {
                    2 => {
                        row.push(Span { start: entry_start, text: &text[entry_start..at] });
                        rows.push(std::mem::take(&mut row));
                    }
                    1 => return Ok((rows, at + 1)),
                    _ => return Err(DocumentError::Syntax(at, "unbalanced ']'".into())),
                }
                depth -= 1;
            }
            ',' if depth == 2 => {
                row.push(Span { start: entry_start, text: &text[entry_start..at] });
                entry_start = at + 1;
            }
            ',' if depth == 1 => {
                if expect_row {
                    return Err(DocumentError::Syntax(at, "empty row".into()));
                }
                expect_row = true;
            }
            c if depth == 1 && !c.is_whitespace() => {
                return Err(DocumentError::Syntax(at, format!("unexpected '{c}' between rows")));
            }
            _ => {}
        }
    }
    Err(DocumentError::Syntax(text.len(), "unterminated matrix".into()))
}
