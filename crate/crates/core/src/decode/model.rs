use std::collections::HashMap;

/// Start-of-sentence marker used as the empty-prefix key.
pub const BOS: &str = "<s>";
/// End-of-sequence token.
pub const EOS: &str = "</s>";

/// Default log probability for tokens a model does not list.
pub const DEFAULT_FLOOR: f64 = -20.0;

/// Next-token log probabilities for one (source, prefix) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenScores {
    listed: HashMap<String, f64>,
    eos: f64,
    floor: f64,
}

impl TokenScores {
    pub fn new(floor: f64) -> Self {
        TokenScores {
            listed: HashMap::new(),
            eos: floor,
            floor,
        }
    }

    pub fn insert(&mut self, token: &str, logprob: f64) {
        if token == EOS {
            self.eos = logprob;
        } else {
            self.listed.insert(token.to_string(), logprob);
        }
    }

    pub fn set_eos(&mut self, logprob: f64) {
        self.eos = logprob;
    }

    /// Log probability of `token`, or the floor when unlisted.
    pub fn get(&self, token: &str) -> f64 {
        if token == EOS {
            return self.eos;
        }
        self.listed.get(token).copied().unwrap_or(self.floor)
    }

    pub fn eos(&self) -> f64 {
        self.eos
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn listed(&self) -> impl Iterator<Item = (&str, f64)> {
        self.listed.iter().map(|(t, &s)| (t.as_str(), s))
    }
}

/// A target-side scorer: given the source and a target prefix, log
/// probabilities for every next token and for end-of-sequence.
///
/// Implementations must be deterministic and return log probabilities
/// `<= 0`. `encode` runs once per source sentence and its result may be
/// reused across decoding passes.
pub trait ScoringModel: Sync {
    type Encoded: Send + Sync;

    fn encode(&self, source: &[String]) -> Self::Encoded;

    fn next_scores(&self, source: &Self::Encoded, prefix: &[String]) -> TokenScores;

    /// Tokens an unconstrained search may emit, in a fixed order.
    fn vocabulary(&self) -> &[String];
}

/// Total log likelihood of `tokens` followed by end-of-sequence.
pub fn score_sequence<M: ScoringModel>(model: &M, source: &[String], tokens: &[String]) -> f64 {
    let encoded = model.encode(source);
    let mut total = 0.0;
    for i in 0..tokens.len() {
        total += model.next_scores(&encoded, &tokens[..i]).get(&tokens[i]);
    }
    total + model.next_scores(&encoded, tokens).eos()
}

pub(crate) fn validate_logprob(lp: f64) -> Result<f64, String> {
    if !lp.is_finite() {
        return Err(format!("log probability {lp} is not finite"));
    }
    if lp > 0.0 {
        return Err(format!("log probability {lp} is positive"));
    }
    Ok(lp)
}
