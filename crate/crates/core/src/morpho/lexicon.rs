use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, is_plain_token, read_normalized};

use super::gender::{GenderLabel, LabelSet};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexiconEntry {
    pub surface: String,
    pub lemma: String,
    /// Opaque case/number/POS string; only compared for equality.
    pub features: String,
    pub gender: GenderLabel,
}

impl LexiconEntry {
    pub fn new(surface: &str, lemma: &str, features: &str, gender: GenderLabel) -> Self {
        LexiconEntry {
            surface: surface.to_string(),
            lemma: lemma.to_string(),
            features: features.to_string(),
            gender,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    ExactToken,
    Prefix,
    Suffix,
}

impl PatternKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::ExactToken => "exact-token",
            PatternKind::Prefix => "prefix",
            PatternKind::Suffix => "suffix",
        }
    }

    pub fn parse(s: &str) -> Option<PatternKind> {
        match s {
            "exact-token" => Some(PatternKind::ExactToken),
            "prefix" => Some(PatternKind::Prefix),
            "suffix" => Some(PatternKind::Suffix),
            _ => None,
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fallback rule assigning a gender to tokens the lexicon does not list,
/// e.g. the suffix `NEND` in `MitarbeiterNEND`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceholderPattern {
    pub kind: PatternKind,
    pub text: String,
    pub gender: GenderLabel,
}

impl PlaceholderPattern {
    pub fn new(kind: PatternKind, text: &str, gender: GenderLabel) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::Invalid("placeholder pattern text is empty".into()));
        }
        Ok(PlaceholderPattern {
            kind,
            text: text.to_string(),
            gender,
        })
    }

    pub fn matches(&self, token: &str) -> bool {
        match self.kind {
            PatternKind::ExactToken => token == self.text,
            PatternKind::Prefix => token.starts_with(&self.text),
            PatternKind::Suffix => token.ends_with(&self.text),
        }
    }
}

/// Surface-form gender lexicon with an ordered placeholder-pattern fallback.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenderLexicon {
    entries: BTreeMap<String, BTreeSet<LexiconEntry>>,
    patterns: Vec<PlaceholderPattern>,
}

impl GenderLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = LexiconEntry>) -> Result<Self> {
        let mut lexicon = GenderLexicon::new();
        for entry in entries {
            lexicon.insert(entry)?;
        }
        Ok(lexicon)
    }

    /// Adds an entry. Returns `false` if the identical entry was already present.
    ///
    /// Two entries with the same surface, features and gender must agree on
    /// the lemma.
    pub fn insert(&mut self, entry: LexiconEntry) -> Result<bool> {
        if entry.surface.is_empty() {
            return Err(Error::Invalid("lexicon surface form is empty".into()));
        }
        let bucket = self.entries.entry(entry.surface.clone()).or_default();
        if bucket.contains(&entry) {
            return Ok(false);
        }
        if let Some(clash) = bucket
            .iter()
            .find(|e| e.features == entry.features && e.gender == entry.gender)
        {
            return Err(Error::Invalid(format!(
                "`{}` {} {} listed with lemmas `{}` and `{}`",
                entry.surface, entry.features, entry.gender, clash.lemma, entry.lemma
            )));
        }
        bucket.insert(entry);
        Ok(true)
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values().flatten()
    }

    pub fn lookup(&self, surface: &str) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.get(surface).into_iter().flatten()
    }

    pub fn patterns(&self) -> &[PlaceholderPattern] {
        &self.patterns
    }

    /// Genders of every entry for `token`; falls back to the first matching
    /// placeholder pattern only when the token has no entries at all.
    pub fn analyze_gender(&self, token: &str) -> BTreeSet<GenderLabel> {
        if let Some(bucket) = self.entries.get(token) {
            if !bucket.is_empty() {
                return bucket.iter().map(|e| e.gender.clone()).collect();
            }
        }
        self.patterns
            .iter()
            .find(|p| p.matches(token))
            .map(|p| BTreeSet::from([p.gender.clone()]))
            .unwrap_or_default()
    }

    /// Appends placeholder patterns after any already registered.
    pub fn register_placeholder_patterns(
        mut self,
        patterns: impl IntoIterator<Item = PlaceholderPattern>,
    ) -> Result<Self> {
        for pattern in patterns {
            if self
                .patterns
                .iter()
                .any(|p| p.kind == pattern.kind && p.text == pattern.text)
            {
                return Err(Error::DuplicatePattern {
                    kind: pattern.kind.to_string(),
                    text: pattern.text,
                });
            }
            self.patterns.push(pattern);
        }
        Ok(self)
    }

    /// Parses the four-column lexicon TSV.
    pub fn parse_tsv(text: &str, labels: &LabelSet, origin: &str) -> Result<Self> {
        let mut lexicon = GenderLexicon::new();
        for (line_no, line) in content_lines(text) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected 4 tab-separated columns, found {}", cols.len()),
                ));
            }
            let [surface, lemma, features, tag] = [cols[0], cols[1], cols[2], cols[3]];
            if !is_plain_token(surface) {
                return Err(Error::parse(origin, line_no, "empty or malformed surface"));
            }
            let gender = GenderLabel::parse(tag.trim(), labels)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            lexicon
                .insert(LexiconEntry::new(surface, lemma, features, gender))
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        }
        Ok(lexicon)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in self.entries() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.surface, e.lemma, e.features, e.gender
            ));
        }
        out
    }
}

pub fn load_lexicon(path: &Path, labels: &LabelSet) -> Result<GenderLexicon> {
    let text = read_normalized(path)?;
    GenderLexicon::parse_tsv(&text, labels, &path.display().to_string())
}

/// Parses `kind<TAB>text<TAB>gender`. Pattern genders may be any built-in
/// tag or a new label: the patterns file is where new labels are introduced.
pub fn parse_patterns(text: &str, origin: &str) -> Result<Vec<PlaceholderPattern>> {
    let mut patterns = Vec::new();
    for (line_no, line) in content_lines(text) {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::parse(
                origin,
                line_no,
                format!("expected 3 tab-separated columns, found {}", cols.len()),
            ));
        }
        let kind = PatternKind::parse(cols[0]).ok_or_else(|| {
            Error::parse(origin, line_no, format!("unknown pattern kind `{}`", cols[0]))
        })?;
        let gender = GenderLabel::parse_open(cols[2].trim())
            .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        let pattern = PlaceholderPattern::new(kind, cols[1], gender)
            .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        patterns.push(pattern);
    }
    Ok(patterns)
}

pub fn load_patterns(path: &Path) -> Result<Vec<PlaceholderPattern>> {
    let text = read_normalized(path)?;
    parse_patterns(&text, &path.display().to_string())
}

pub fn patterns_to_tsv(patterns: &[PlaceholderPattern]) -> String {
    patterns
        .iter()
        .map(|p| format!("{}\t{}\t{}\n", p.kind, p.text, p.gender))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neutral() -> GenderLabel {
        GenderLabel::Custom("neutral-new".into())
    }

    #[test]
    fn loads_masculine_row() {
        let lex =
            GenderLexicon::parse_tsv("médico\tmédico\tNOUN.sg\tmasculine\n", &LabelSet::new(), "t")
                .unwrap();
        let entry = lex.lookup("médico").next().unwrap();
        assert_eq!(entry.gender, GenderLabel::Masculine);
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn empty_file_gives_empty_lexicon() {
        let lex = GenderLexicon::parse_tsv("", &LabelSet::new(), "t").unwrap();
        assert!(lex.is_empty());
        assert!(lex.analyze_gender("anything").is_empty());
    }

    #[test]
    fn duplicate_rows_collapse() {
        let row = "el\tel\tDET.sg\tmasculine\n";
        let lex =
            GenderLexicon::parse_tsv(&format!("{row}{row}"), &LabelSet::new(), "t").unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn malformed_rows_name_their_line() {
        let err = GenderLexicon::parse_tsv("# c\nel\tel\tDET\n", &LabelSet::new(), "lex.tsv")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = GenderLexicon::parse_tsv("el\tel\tDET\tmasc\n", &LabelSet::new(), "lex.tsv")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(err.to_string().contains("masc"));
    }

    #[test]
    fn conflicting_lemma_is_rejected() {
        let text = "el\tel\tDET\tmasculine\nel\tlo\tDET\tmasculine\n";
        assert!(GenderLexicon::parse_tsv(text, &LabelSet::new(), "t").is_err());
    }

    #[test]
    fn analyze_known_and_unknown() {
        let lex = GenderLexicon::from_entries([LexiconEntry::new(
            "el",
            "el",
            "DET.sg",
            GenderLabel::Masculine,
        )])
        .unwrap();
        assert_eq!(lex.analyze_gender("el"), BTreeSet::from([GenderLabel::Masculine]));
        assert!(lex.analyze_gender("zzzz").is_empty());
    }

    #[test]
    fn ambiguous_form_returns_union() {
        let lex = GenderLexicon::from_entries([
            LexiconEntry::new("estudiante", "estudiante", "NOUN.sg", GenderLabel::Masculine),
            LexiconEntry::new("estudiante", "estudiante", "NOUN.sg", GenderLabel::Feminine),
        ])
        .unwrap();
        assert_eq!(
            lex.analyze_gender("estudiante"),
            BTreeSet::from([GenderLabel::Masculine, GenderLabel::Feminine])
        );
    }

    #[test]
    fn suffix_and_exact_patterns() {
        let lex = GenderLexicon::new()
            .register_placeholder_patterns([
                PlaceholderPattern::new(PatternKind::ExactToken, "DEFNOM", neutral()).unwrap(),
                PlaceholderPattern::new(PatternKind::Suffix, "NEND", neutral()).unwrap(),
            ])
            .unwrap();
        assert_eq!(lex.analyze_gender("MitarbeiterNEND"), BTreeSet::from([neutral()]));
        assert_eq!(lex.analyze_gender("DEFNOM"), BTreeSet::from([neutral()]));
        assert!(lex.analyze_gender("Mitarbeiter").is_empty());
    }

    #[test]
    fn first_matching_pattern_wins() {
        let lex = GenderLexicon::new()
            .register_placeholder_patterns([
                PlaceholderPattern::new(PatternKind::Prefix, "Mit", GenderLabel::Neuter).unwrap(),
                PlaceholderPattern::new(PatternKind::Suffix, "NEND", neutral()).unwrap(),
            ])
            .unwrap();
        assert_eq!(
            lex.analyze_gender("MitarbeiterNEND"),
            BTreeSet::from([GenderLabel::Neuter])
        );
    }

    #[test]
    fn entry_beats_pattern() {
        let lex = GenderLexicon::from_entries([LexiconEntry::new(
            "DEFNOM",
            "DEFNOM",
            "DET",
            GenderLabel::Masculine,
        )])
        .unwrap()
        .register_placeholder_patterns([PlaceholderPattern::new(
            PatternKind::ExactToken,
            "DEFNOM",
            neutral(),
        )
        .unwrap()])
        .unwrap();
        assert_eq!(lex.analyze_gender("DEFNOM"), BTreeSet::from([GenderLabel::Masculine]));
    }

    #[test]
    fn empty_pattern_list_is_identity() {
        let lex = GenderLexicon::from_entries([LexiconEntry::new(
            "la",
            "el",
            "DET.sg",
            GenderLabel::Feminine,
        )])
        .unwrap();
        let same = lex.clone().register_placeholder_patterns([]).unwrap();
        assert_eq!(lex, same);
    }

    #[test]
    fn duplicate_pattern_is_rejected() {
        let p = PlaceholderPattern::new(PatternKind::Suffix, "NEND", neutral()).unwrap();
        let err = GenderLexicon::new()
            .register_placeholder_patterns([p.clone(), p])
            .unwrap_err();
        assert!(matches!(err, Error::DuplicatePattern { .. }));
    }

    #[test]
    fn patterns_file_introduces_labels() {
        let patterns = parse_patterns("suffix\tNEND\tneutral-new\n", "p").unwrap();
        assert_eq!(patterns[0].gender, neutral());
        assert!(parse_patterns("infix\tX\tfeminine\n", "p").is_err());
        assert!(parse_patterns("suffix\t\tfeminine\n", "p").is_err());
    }
}
