use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::morpho::GenderLabel;
use crate::text::{content_lines, read_normalized};

/// Source-language pronoun -> gender table, matched case-insensitively.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PronounTable {
    map: BTreeMap<String, GenderLabel>,
}

impl PronounTable {
    pub fn new(entries: impl IntoIterator<Item = (String, GenderLabel)>) -> Self {
        PronounTable {
            map: entries
                .into_iter()
                .map(|(p, g)| (p.to_lowercase(), g))
                .collect(),
        }
    }

    /// English `he`/`him`/`his`, `she`/`her`/`hers`.
    pub fn english_binary() -> Self {
        let m = GenderLabel::Masculine;
        let f = GenderLabel::Feminine;
        PronounTable::new(
            [
                ("he", &m),
                ("him", &m),
                ("his", &m),
                ("she", &f),
                ("her", &f),
                ("hers", &f),
            ]
            .into_iter()
            .map(|(p, g)| (p.to_string(), g.clone())),
        )
    }

    pub fn get(&self, token: &str) -> Option<&GenderLabel> {
        self.map.get(&token.to_lowercase())
    }

    pub fn parse_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (line_no, line) in content_lines(text) {
            let (pronoun, tag) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, line_no, "expected pronoun<TAB>gender"))?;
            let gender = GenderLabel::parse_open(tag.trim())
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            entries.push((pronoun.trim().to_string(), gender));
        }
        Ok(PronounTable::new(entries))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_normalized(path)?;
        Self::parse_tsv(&text, &path.display().to_string())
    }
}

/// Every pronoun in the source, in position order, with its gender.
pub fn pronoun_and_gender(source: &[String], table: &PronounTable) -> Vec<(usize, GenderLabel)> {
    source
        .iter()
        .enumerate()
        .filter_map(|(i, tok)| table.get(tok).map(|g| (i, g.clone())))
        .collect()
}

/// Finds source tokens coreferent with the pronoun at `pronoun_index`.
pub trait CorefResolver: Sync {
    fn resolve(&self, source: &[String], pronoun_index: usize) -> BTreeSet<usize>;
}

/// Picks the nearest token before the pronoun that appears in a list of
/// human-entity nouns.
#[derive(Debug, Clone, Default)]
pub struct NearestNounResolver {
    nouns: BTreeSet<String>,
}

impl NearestNounResolver {
    pub fn new(nouns: impl IntoIterator<Item = String>) -> Self {
        NearestNounResolver {
            nouns: nouns.into_iter().map(|n| n.to_lowercase()).collect(),
        }
    }

    pub fn parse_list(text: &str) -> Self {
        Self::new(
            content_lines(text)
                .flat_map(|(_, l)| l.split_whitespace())
                .map(str::to_string)
                .collect::<Vec<_>>(),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::parse_list(&read_normalized(path)?))
    }
}

impl CorefResolver for NearestNounResolver {
    fn resolve(&self, source: &[String], pronoun_index: usize) -> BTreeSet<usize> {
        source[..pronoun_index.min(source.len())]
            .iter()
            .rposition(|t| self.nouns.contains(&t.to_lowercase()))
            .into_iter()
            .collect()
    }
}

/// Coreferent entity indices for a pronoun; empty when the index is out of
/// range or nothing resolves.
pub fn get_entity(
    source: &[String],
    pronoun_index: usize,
    resolver: &dyn CorefResolver,
) -> BTreeSet<usize> {
    if pronoun_index >= source.len() {
        return BTreeSet::new();
    }
    resolver
        .resolve(source, pronoun_index)
        .into_iter()
        .filter(|&i| i < source.len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    #[test]
    fn finds_she() {
        let src = tokenize("The broker called the client because she had new stocks");
        assert_eq!(
            pronoun_and_gender(&src, &PronounTable::english_binary()),
            vec![(6, GenderLabel::Feminine)]
        );
    }

    #[test]
    fn no_pronouns() {
        let src = tokenize("The broker called the client");
        assert!(pronoun_and_gender(&src, &PronounTable::english_binary()).is_empty());
    }

    #[test]
    fn case_insensitive_and_custom_labels() {
        let table = PronounTable::parse_tsv("they\tneutral-new\nthem\tneutral-new\n", "p").unwrap();
        let src = tokenize("They thanked them");
        let nn = GenderLabel::Custom("neutral-new".into());
        assert_eq!(
            pronoun_and_gender(&src, &table),
            vec![(0, nn.clone()), (2, nn)]
        );
    }

    #[test]
    fn nearest_preceding_noun() {
        let resolver = NearestNounResolver::new(["doctor".to_string(), "nurse".to_string()]);
        let src = tokenize("The doctor asked a question because she was curious");
        assert_eq!(get_entity(&src, 6, &resolver), BTreeSet::from([1]));

        let two = tokenize("The doctor called the nurse because she was late");
        assert_eq!(get_entity(&two, 6, &resolver), BTreeSet::from([4]));
    }

    #[test]
    fn no_candidate_before_pronoun() {
        let resolver = NearestNounResolver::new(["doctor".to_string()]);
        let src = tokenize("She thanked the doctor");
        assert!(get_entity(&src, 0, &resolver).is_empty());
        assert!(get_entity(&src, 99, &resolver).is_empty());
    }
}
