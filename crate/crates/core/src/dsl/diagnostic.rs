use std::fmt;

use super::ast::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("error")
    }
}

/// A positioned parse or evaluation failure. Lines and columns are 1-based;
/// columns count characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub column: usize,
    /// The offending source line followed by a caret line.
    pub snippet: String,
}

impl Diagnostic {
    pub fn new(source: &str, span: Span, message: impl Into<String>) -> Self {
        let offset = span.start.min(source.len());
        let offset = (0..=offset).rev().find(|&i| source.is_char_boundary(i)).unwrap_or(0);
        let line_start = source[..offset].rfind('\n').map_or(0, |i| i + 1);
        let line_end = source[offset..].find('\n').map_or(source.len(), |i| offset + i);
        let line = source[..offset].matches('\n').count() + 1;
        let column = source[line_start..offset].chars().count() + 1;
        let text = source[line_start..line_end].trim_end_matches('\r');
        let width = line.to_string().len();
        let snippet = format!(
            "{:width$} |\n{line} | {text}\n{:width$} | {}^",
            "",
            "",
            " ".repeat(column - 1),
        );
        Self { severity: Severity::Error, message: message.into(), line, column, snippet }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.severity, self.message)?;
        writeln!(f, " --> {}:{}", self.line, self.column)?;
        f.write_str(&self.snippet)
    }
}

impl std::error::Error for Diagnostic {}
