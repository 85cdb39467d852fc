use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{content_lines, read_normalized};

use super::model::{validate_logprob, ScoringModel, TokenScores, BOS, DEFAULT_FLOOR, EOS};

/// Add-one smoothed target bigram model.
#[derive(Debug, Clone, Default)]
struct Bigram {
    pairs: HashMap<(String, String), u64>,
    history: HashMap<String, u64>,
    vocab_size: u64,
}

impl Bigram {
    fn from_corpus(corpus: &str) -> Self {
        let mut bigram = Bigram::default();
        let mut vocab = BTreeSet::new();
        vocab.insert(EOS.to_string());
        for line in corpus.lines() {
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            let mut prev = BOS;
            for w in words.iter().copied().chain(std::iter::once(EOS)) {
                vocab.insert(w.to_string());
                *bigram
                    .pairs
                    .entry((prev.to_string(), w.to_string()))
                    .or_default() += 1;
                *bigram.history.entry(prev.to_string()).or_default() += 1;
                prev = w;
            }
        }
        bigram.vocab_size = vocab.len() as u64;
        bigram
    }

    fn logprob(&self, prev: &str, word: &str) -> f64 {
        let pair = self
            .pairs
            .get(&(prev.to_string(), word.to_string()))
            .copied()
            .unwrap_or(0);
        let hist = self.history.get(prev).copied().unwrap_or(0);
        ((pair + 1) as f64 / (hist + self.vocab_size) as f64).ln()
    }
}

/// Synthetic noisy-channel scorer: the best lexical translation score any
/// source word gives a target token, plus a target bigram score.
///
/// Tokens no source word licenses get the floor. End-of-sequence is scored
/// by the bigram alone.
#[derive(Debug, Clone)]
pub struct NoisyChannelToy {
    lexical: BTreeMap<String, Vec<(String, f64)>>,
    bigram: Bigram,
    vocabulary: Vec<String>,
    floor: f64,
}

impl NoisyChannelToy {
    pub fn new(
        lexical: impl IntoIterator<Item = (String, String, f64)>,
        corpus: &str,
    ) -> Result<Self> {
        let mut table: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
        let mut vocab = BTreeSet::new();
        for (src, tgt, lp) in lexical {
            let lp = validate_logprob(lp).map_err(Error::Invalid)?;
            if tgt == EOS || tgt.is_empty() || tgt.chars().any(char::is_whitespace) {
                return Err(Error::InvalidToken(tgt));
            }
            let row = table.entry(src.clone()).or_default();
            if row.iter().any(|(t, _)| *t == tgt) {
                return Err(Error::Invalid(format!("`{src}` -> `{tgt}` listed twice")));
            }
            vocab.insert(tgt.clone());
            row.push((tgt, lp));
        }
        Ok(NoisyChannelToy {
            lexical: table,
            bigram: Bigram::from_corpus(corpus),
            vocabulary: vocab.into_iter().collect(),
            floor: DEFAULT_FLOOR,
        })
    }

    pub fn with_floor(mut self, floor: f64) -> Result<Self> {
        self.floor = validate_logprob(floor).map_err(Error::Invalid)?;
        Ok(self)
    }

    /// Parses the lexical TSV `src<TAB>tgt<TAB>logprob`.
    pub fn parse_lexical(text: &str, origin: &str) -> Result<Vec<(String, String, f64)>> {
        let mut rows = Vec::new();
        for (line_no, line) in content_lines(text) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let lp: f64 = cols[2].trim().parse().map_err(|_| {
                Error::parse(origin, line_no, format!("bad log probability `{}`", cols[2]))
            })?;
            validate_logprob(lp).map_err(|e| Error::parse(origin, line_no, e))?;
            rows.push((cols[0].to_string(), cols[1].to_string(), lp));
        }
        Ok(rows)
    }

    pub fn load(lexical: &Path, corpus: &Path) -> Result<Self> {
        let lex_text = read_normalized(lexical)?;
        let rows = Self::parse_lexical(&lex_text, &lexical.display().to_string())?;
        let corpus_text = read_normalized(corpus)?;
        Self::new(rows, &corpus_text)
    }

    pub fn bigram_logprob(&self, prev: &str, word: &str) -> f64 {
        self.bigram.logprob(prev, word)
    }
}

impl ScoringModel for NoisyChannelToy {
    /// Best lexical score per licensed target token.
    type Encoded = Vec<(String, f64)>;

    fn encode(&self, source: &[String]) -> Self::Encoded {
        let mut best: BTreeMap<&str, f64> = BTreeMap::new();
        for s in source {
            for (t, lp) in self.lexical.get(s).into_iter().flatten() {
                let slot = best.entry(t.as_str()).or_insert(f64::NEG_INFINITY);
                *slot = slot.max(*lp);
            }
        }
        best.into_iter().map(|(t, lp)| (t.to_string(), lp)).collect()
    }

    fn next_scores(&self, source: &Self::Encoded, prefix: &[String]) -> TokenScores {
        let prev = prefix.last().map_or(BOS, String::as_str);
        let mut scores = TokenScores::new(self.floor);
        for (t, lex) in source {
            scores.insert(t, lex + self.bigram.logprob(prev, t));
        }
        scores.set_eos(self.bigram.logprob(prev, EOS));
        scores
    }

    fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }
}
