//! UTF-8 text helpers shared by the file readers.
//!
//! Every reader normalizes to NFC so that `médica` typed with a combining
//! accent and `médica` with a precomposed one compare equal.

use std::fs;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Reads a whole file and normalizes it to NFC.
pub fn read_normalized(path: &Path) -> Result<String> {
    let raw = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(nfc(&raw))
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Splits a sentence on whitespace after NFC normalization.
pub fn tokenize(sentence: &str) -> Vec<String> {
    nfc(sentence).split_whitespace().map(str::to_string).collect()
}

/// Iterates over `(1-based line number, line)` skipping blank and `#` lines.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub(crate) fn is_plain_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nfc_merges_combining_accent() {
        let decomposed = "me\u{301}dica";
        assert_eq!(nfc(decomposed), "médica");
        assert_eq!(tokenize("la  me\u{301}dica "), vec!["la", "médica"]);
    }

    #[test]
    fn content_lines_skip_comments_and_blanks() {
        let text = "# header\n\na\tb\n#x\nc\n";
        let lines: Vec<_> = content_lines(text).collect();
        assert_eq!(lines, vec![(3, "a\tb"), (5, "c")]);
    }
}
