use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, is_plain_token, read_normalized};

/// Maps between target words and the model's token vocabulary.
///
/// `detokenize` must invert `segment` on concatenations of segmented words.
pub trait Segmenter: Sync {
    fn segment(&self, word: &str) -> Vec<String>;
    fn detokenize(&self, tokens: &[String]) -> Vec<String>;
}

/// One model token per word.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentitySegmenter;

impl Segmenter for IdentitySegmenter {
    fn segment(&self, word: &str) -> Vec<String> {
        vec![word.to_string()]
    }

    fn detokenize(&self, tokens: &[String]) -> Vec<String> {
        tokens.to_vec()
    }
}

/// Explicit word -> subword table; unlisted words are a single token.
///
/// Detokenization greedily matches the longest listed piece sequence.
#[derive(Debug, Clone, Default)]
pub struct TableSegmenter {
    pieces: BTreeMap<String, Vec<String>>,
    inverse: BTreeMap<Vec<String>, String>,
    longest: usize,
}

impl TableSegmenter {
    pub fn new(entries: impl IntoIterator<Item = (String, Vec<String>)>) -> Result<Self> {
        let mut seg = TableSegmenter::default();
        for (word, pieces) in entries {
            if pieces.is_empty() || !pieces.iter().all(|p| is_plain_token(p)) {
                return Err(Error::Invalid(format!("bad segmentation for `{word}`")));
            }
            if let Some(other) = seg.inverse.get(&pieces) {
                if other != &word {
                    return Err(Error::Invalid(format!(
                        "`{word}` and `{other}` share a segmentation"
                    )));
                }
            }
            seg.longest = seg.longest.max(pieces.len());
            seg.inverse.insert(pieces.clone(), word.clone());
            seg.pieces.insert(word, pieces);
        }
        Ok(seg)
    }

    /// Parses `word<TAB>piece piece ...`.
    pub fn parse_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (line_no, line) in content_lines(text) {
            let (word, pieces) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, line_no, "expected word<TAB>pieces"))?;
            entries.push((
                word.to_string(),
                pieces.split_whitespace().map(str::to_string).collect(),
            ));
        }
        TableSegmenter::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_normalized(path)?;
        Self::parse_tsv(&text, &path.display().to_string())
    }
}

impl Segmenter for TableSegmenter {
    fn segment(&self, word: &str) -> Vec<String> {
        self.pieces
            .get(word)
            .cloned()
            .unwrap_or_else(|| vec![word.to_string()])
    }

    fn detokenize(&self, tokens: &[String]) -> Vec<String> {
        let mut words = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let max = self.longest.min(tokens.len() - i);
            let hit = (2..=max)
                .rev()
                .find_map(|k| self.inverse.get(&tokens[i..i + k]).map(|w| (k, w)));
            match hit {
                Some((k, word)) => {
                    words.push(word.clone());
                    i += k;
                }
                None => {
                    words.push(tokens[i].clone());
                    i += 1;
                }
            }
        }
        words
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let seg = TableSegmenter::parse_tsv("médica\tmédic a\n", "s").unwrap();
        assert_eq!(seg.segment("médica"), vec!["médic", "a"]);
        assert_eq!(seg.segment("el"), vec!["el"]);
        let toks: Vec<String> = ["la", "médic", "a"].iter().map(|s| s.to_string()).collect();
        assert_eq!(seg.detokenize(&toks), vec!["la", "médica"]);
    }
}
