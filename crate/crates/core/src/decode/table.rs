use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, read_normalized};

use super::model::{validate_logprob, ScoringModel, TokenScores, BOS, DEFAULT_FLOOR, EOS};

/// Lookup-table scorer keyed on exact (source, prefix) strings.
///
/// File lines are `source_key ||| prefix_key ||| token ||| logprob`, where
/// keys are space-joined tokens and `<s>` denotes the empty prefix.
#[derive(Debug, Clone)]
pub struct TableModel {
    entries: HashMap<(String, String), Vec<(String, f64)>>,
    vocabulary: Vec<String>,
    floor: f64,
}

fn key(tokens: &[String]) -> String {
    if tokens.is_empty() {
        BOS.to_string()
    } else {
        tokens.join(" ")
    }
}

fn normalize_key(k: &str) -> String {
    let joined = k.split_whitespace().collect::<Vec<_>>().join(" ");
    if joined.is_empty() {
        BOS.to_string()
    } else {
        joined
    }
}

impl Default for TableModel {
    fn default() -> Self {
        Self::new(DEFAULT_FLOOR)
    }
}

impl TableModel {
    pub fn new(floor: f64) -> Self {
        TableModel {
            entries: HashMap::new(),
            vocabulary: Vec::new(),
            floor,
        }
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Adds one row. `prefix` is a space-joined key; empty or `<s>` means
    /// the start of the sentence.
    pub fn insert(&mut self, source: &str, prefix: &str, token: &str, logprob: f64) -> Result<()> {
        let logprob = validate_logprob(logprob).map_err(Error::Invalid)?;
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(token.to_string()));
        }
        let row = self
            .entries
            .entry((normalize_key(source), normalize_key(prefix)))
            .or_default();
        if row.iter().any(|(t, _)| t == token) {
            return Err(Error::Invalid(format!(
                "token `{token}` listed twice for `{source}` / `{prefix}`"
            )));
        }
        row.push((token.to_string(), logprob));
        if token != EOS {
            if let Err(pos) = self.vocabulary.binary_search_by(|v| v.as_str().cmp(token)) {
                self.vocabulary.insert(pos, token.to_string());
            }
        }
        Ok(())
    }

    pub fn with(mut self, source: &str, prefix: &str, token: &str, logprob: f64) -> Result<Self> {
        self.insert(source, prefix, token, logprob)?;
        Ok(self)
    }

    pub fn parse(text: &str, floor: f64, origin: &str) -> Result<Self> {
        validate_logprob(floor).map_err(Error::Invalid)?;
        let mut model = TableModel::new(floor);
        for (line_no, line) in content_lines(text) {
            let fields: Vec<&str> = line.split("|||").map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    origin,
                    line_no,
                    "expected `source ||| prefix ||| token ||| logprob`",
                ));
            }
            let logprob: f64 = fields[3].parse().map_err(|_| {
                Error::parse(origin, line_no, format!("bad log probability `{}`", fields[3]))
            })?;
            model
                .insert(fields[0], fields[1], fields[2], logprob)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        }
        Ok(model)
    }

    pub fn load(path: &Path, floor: f64) -> Result<Self> {
        let text = read_normalized(path)?;
        Self::parse(&text, floor, &path.display().to_string())
    }

    /// Distinct source keys, for callers that want to decode every sentence
    /// the table knows about.
    pub fn sources(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(s, _)| s.as_str()).collect()
    }
}

impl ScoringModel for TableModel {
    type Encoded = String;

    fn encode(&self, source: &[String]) -> String {
        key(source)
    }

    fn next_scores(&self, source: &String, prefix: &[String]) -> TokenScores {
        let mut scores = TokenScores::new(self.floor);
        if let Some(row) = self.entries.get(&(source.clone(), key(prefix))) {
            for (token, lp) in row {
                scores.insert(token, *lp);
            }
        }
        scores
    }

    fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }
}
