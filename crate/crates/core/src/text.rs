//! Helpers shared by the line-based text formats.

use crate::error::Error;

/// A non-blank, comment-stripped line together with its 1-based number.
#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub content: &'a str,
    /// Column (1-based) at which `content` starts in the raw line.
    pub start: usize,
}

impl Line<'_> {
    pub fn error(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.number,
            column: self.start + offset,
            message: message.into(),
        }
    }
}

/// Splits `src` into meaningful lines, dropping blanks and `#` comments.
/// A `#` inside single quotes does not start a comment.
pub(crate) fn lines(src: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let mut in_quote = false;
        let mut cut = raw.len();
        for (pos, ch) in raw.char_indices() {
            match ch {
                '\'' => in_quote = !in_quote,
                '#' if !in_quote => {
                    cut = pos;
                    break;
                }
                _ => {}
            }
        }
        let kept = &raw[..cut];
        let trimmed = kept.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = kept.len() - kept.trim_start().len() + 1;
        out.push(Line {
            number: i + 1,
            content: trimmed,
            start,
        });
    }
    out
}

/// Splits on whitespace, keeping the byte offset of each token.
pub(crate) fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}
