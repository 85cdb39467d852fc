use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, is_plain_token, read_normalized};

use super::gender::GenderLabel;
use super::lexicon::{GenderLexicon, LexiconEntry};

/// One directed word substitution of the gender inflection transducer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReinflectionPair {
    pub source: String,
    pub target: String,
    pub target_gender: GenderLabel,
}

impl ReinflectionPair {
    pub fn new(source: &str, target: &str, target_gender: GenderLabel) -> Self {
        ReinflectionPair {
            source: source.to_string(),
            target: target.to_string(),
            target_gender,
        }
    }
}

/// The word-level gender inflection transducer: a set of directed
/// substitutions closed under reversal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReinflectionPairSet {
    pairs: BTreeSet<ReinflectionPair>,
    target_genders: BTreeMap<String, BTreeSet<GenderLabel>>,
}

impl ReinflectionPairSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set, checking that no pair is reflexive and that every
    /// `a -> b` has a matching `b -> a`.
    pub fn new(pairs: impl IntoIterator<Item = ReinflectionPair>) -> Result<Self> {
        let pairs: BTreeSet<ReinflectionPair> = pairs.into_iter().collect();
        for p in &pairs {
            if p.source == p.target {
                return Err(Error::InvalidPairSet(format!(
                    "reflexive pair `{}`",
                    p.source
                )));
            }
            if !is_plain_token(&p.source) || !is_plain_token(&p.target) {
                return Err(Error::InvalidPairSet(format!(
                    "malformed pair `{}` -> `{}`",
                    p.source, p.target
                )));
            }
        }
        let set = Self::from_checked(pairs);
        for p in &set.pairs {
            if !set.targets(&p.target).any(|q| q.target == p.source) {
                return Err(Error::InvalidPairSet(format!(
                    "`{}` -> `{}` has no reverse pair",
                    p.source, p.target
                )));
            }
        }
        Ok(set)
    }

    fn from_checked(pairs: BTreeSet<ReinflectionPair>) -> Self {
        let mut target_genders: BTreeMap<String, BTreeSet<GenderLabel>> = BTreeMap::new();
        for p in &pairs {
            target_genders
                .entry(p.target.clone())
                .or_default()
                .insert(p.target_gender.clone());
        }
        ReinflectionPairSet {
            pairs,
            target_genders,
        }
    }

    /// For every two entries sharing lemma and features but differing in
    /// gender, emits both directed substitutions.
    pub fn from_lexicon(lexicon: &GenderLexicon) -> Self {
        let mut groups: BTreeMap<(&str, &str), Vec<&LexiconEntry>> = BTreeMap::new();
        for e in lexicon.entries() {
            groups
                .entry((e.lemma.as_str(), e.features.as_str()))
                .or_default()
                .push(e);
        }
        let mut pairs = BTreeSet::new();
        for group in groups.values() {
            for a in group {
                for b in group {
                    if a.gender != b.gender && a.surface != b.surface {
                        pairs.insert(ReinflectionPair::new(
                            &a.surface,
                            &b.surface,
                            b.gender.clone(),
                        ));
                    }
                }
            }
        }
        Self::from_checked(pairs)
    }

    /// Adds `a -> b` and `b -> a` together, keeping the set closed.
    pub fn insert_bidirectional(
        &mut self,
        a: &str,
        gender_a: GenderLabel,
        b: &str,
        gender_b: GenderLabel,
    ) -> Result<()> {
        let forward = ReinflectionPair::new(a, b, gender_b);
        let backward = ReinflectionPair::new(b, a, gender_a);
        let mut pairs = self.pairs.clone();
        pairs.insert(forward);
        pairs.insert(backward);
        *self = ReinflectionPairSet::new(pairs)?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReinflectionPair> {
        self.pairs.iter()
    }

    /// Pairs whose source is `word`, in set order.
    pub fn targets<'a>(&'a self, word: &'a str) -> impl Iterator<Item = &'a ReinflectionPair> + 'a {
        let lower = ReinflectionPair::new(word, "", GenderLabel::Masculine);
        self.pairs
            .range(lower..)
            .take_while(move |p| p.source == word)
    }

    /// Gender(s) the transducer assigns to `word` when it appears as a target.
    pub fn genders_of(&self, word: &str) -> Option<&BTreeSet<GenderLabel>> {
        self.target_genders.get(word)
    }

    pub fn parse_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        for (line_no, line) in content_lines(text) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let gender = GenderLabel::parse_open(cols[2].trim())
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            pairs.insert(ReinflectionPair::new(cols[0], cols[1], gender));
        }
        ReinflectionPairSet::new(pairs).map_err(|e| Error::parse(origin, 0, e.to_string()))
    }

    pub fn to_tsv(&self) -> String {
        self.pairs
            .iter()
            .map(|p| format!("{}\t{}\t{}\n", p.source, p.target, p.target_gender))
            .collect()
    }
}

pub fn build_reinflection_pairs(lexicon: &GenderLexicon) -> ReinflectionPairSet {
    ReinflectionPairSet::from_lexicon(lexicon)
}

pub fn load_pairs(path: &Path) -> Result<ReinflectionPairSet> {
    let text = read_normalized(path)?;
    ReinflectionPairSet::parse_tsv(&text, &path.display().to_string())
}
