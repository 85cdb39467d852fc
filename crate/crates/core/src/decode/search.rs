//! Length-unnormalized beam search, unconstrained and lattice-constrained.
//!
//! Finished hypotheses keep their beam slot and compete with open ones on
//! total log likelihood. Ties break on the token sequence, then finished
//! before open, then search state.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lattice::HypothesisLattice;

use super::model::ScoringModel;
use super::nbest::{Hypothesis, NBestList};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamConfig {
    pub beam_width: usize,
    pub nbest: usize,
    /// Maximum number of search steps, end-of-sequence included.
    pub max_len: usize,
}

impl BeamConfig {
    pub const DEFAULT_MAX_LEN: usize = 128;

    pub fn new(beam_width: usize, nbest: usize) -> Result<Self> {
        Self::with_max_len(beam_width, nbest, Self::DEFAULT_MAX_LEN)
    }

    pub fn with_max_len(beam_width: usize, nbest: usize, max_len: usize) -> Result<Self> {
        if beam_width == 0 {
            return Err(Error::InvalidBeamConfig("beam width must be at least 1".into()));
        }
        if nbest == 0 || nbest > beam_width {
            return Err(Error::InvalidBeamConfig(format!(
                "nbest {nbest} must be between 1 and the beam width {beam_width}"
            )));
        }
        if max_len == 0 {
            return Err(Error::InvalidBeamConfig("max_len must be positive".into()));
        }
        Ok(BeamConfig {
            beam_width,
            nbest,
            max_len,
        })
    }

    /// Beam of `width` returning all `width` hypotheses.
    pub fn width(width: usize) -> Result<Self> {
        Self::new(width, width)
    }
}

#[derive(Debug, Clone)]
struct Item<S> {
    tokens: Vec<String>,
    score: f64,
    state: S,
    closed: bool,
}

fn rank<S: Ord>(a: &Item<S>, b: &Item<S>) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.tokens.cmp(&b.tokens))
        .then_with(|| b.closed.cmp(&a.closed))
        .then_with(|| a.state.cmp(&b.state))
}

impl<S: Clone> Item<S> {
    fn extend(&self, token: &str, logprob: f64, state: S) -> Self {
        let mut tokens = Vec::with_capacity(self.tokens.len() + 1);
        tokens.extend_from_slice(&self.tokens);
        tokens.push(token.to_string());
        Item {
            tokens,
            score: self.score + logprob,
            state,
            closed: false,
        }
    }

    fn close(&self, logprob: f64) -> Self {
        Item {
            tokens: self.tokens.clone(),
            score: self.score + logprob,
            state: self.state.clone(),
            closed: true,
        }
    }
}

enum Outcome<S> {
    Finished(Vec<Item<S>>),
    Exhausted,
}

/// Runs at most `max_steps` expansion rounds. Items still open afterwards
/// are dropped.
fn run_beam<S, F>(width: usize, max_steps: usize, init: S, mut expand: F) -> Outcome<S>
where
    S: Ord + Clone,
    F: FnMut(&Item<S>, &mut Vec<Item<S>>),
{
    let mut beam = vec![Item {
        tokens: Vec::new(),
        score: 0.0,
        state: init,
        closed: false,
    }];
    let mut steps = 0;
    while steps < max_steps && beam.iter().any(|it| !it.closed) {
        let mut next = Vec::new();
        for item in &beam {
            if item.closed {
                next.push(item.clone());
            } else {
                expand(item, &mut next);
            }
        }
        if next.is_empty() {
            return Outcome::Exhausted;
        }
        next.sort_by(rank);
        next.truncate(width);
        beam = next;
        steps += 1;
    }
    Outcome::Finished(beam.into_iter().filter(|it| it.closed).collect())
}

fn to_nbest<S>(source_id: usize, finished: Vec<Item<S>>, n: usize) -> NBestList {
    // `finished` is already in rank order
    NBestList {
        source_id,
        hypotheses: finished
            .into_iter()
            .take(n)
            .map(|it| Hypothesis::new(it.tokens, it.score))
            .collect(),
    }
}

/// Standard beam search over the model's whole vocabulary.
pub fn beam_search<M: ScoringModel>(
    model: &M,
    source_id: usize,
    source: &[String],
    cfg: &BeamConfig,
) -> Result<NBestList> {
    if source.is_empty() {
        return Err(Error::EmptySource);
    }
    beam_search_encoded(model, source_id, &model.encode(source), cfg)
}

pub fn beam_search_encoded<M: ScoringModel>(
    model: &M,
    source_id: usize,
    encoded: &M::Encoded,
    cfg: &BeamConfig,
) -> Result<NBestList> {
    let vocab = model.vocabulary();
    let outcome = run_beam(cfg.beam_width, cfg.max_len, (), |item, out| {
        let scores = model.next_scores(encoded, &item.tokens);
        out.push(item.close(scores.eos()));
        for tok in vocab {
            out.push(item.extend(tok, scores.get(tok), ()));
        }
    });
    match outcome {
        Outcome::Finished(done) if !done.is_empty() => Ok(to_nbest(source_id, done, cfg.nbest)),
        _ => Err(Error::NoCompletedHypothesis {
            source_id,
            max_len: cfg.max_len,
        }),
    }
}

/// Beam search that emits exactly `length` tokens before end-of-sequence.
/// `cfg.max_len` is ignored.
pub fn beam_search_fixed_length<M: ScoringModel>(
    model: &M,
    source_id: usize,
    source: &[String],
    length: usize,
    cfg: &BeamConfig,
) -> Result<NBestList> {
    if source.is_empty() {
        return Err(Error::EmptySource);
    }
    let encoded = model.encode(source);
    let vocab = model.vocabulary();
    let outcome = run_beam(cfg.beam_width, length + 1, (), |item, out| {
        let scores = model.next_scores(&encoded, &item.tokens);
        if item.tokens.len() == length {
            out.push(item.close(scores.eos()));
        } else {
            for tok in vocab {
                out.push(item.extend(tok, scores.get(tok), ()));
            }
        }
    });
    match outcome {
        Outcome::Finished(done) if !done.is_empty() => Ok(to_nbest(source_id, done, cfg.nbest)),
        _ => Err(Error::NoCompletedHypothesis {
            source_id,
            max_len: length + 1,
        }),
    }
}

/// Position in a lattice during constrained search: at a state boundary
/// when `offset == 0`, otherwise `offset` tokens into arc `arc` leaving
/// `state`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct LatticeCursor {
    state: usize,
    arc: usize,
    offset: usize,
}

/// Beam search restricted to paths of `lattice`. Tokens inside a multi-token
/// arc are forced but still scored by the model. `cfg.max_len` is ignored;
/// the lattice bounds the length.
pub fn constrained_beam_search<M: ScoringModel>(
    model: &M,
    source_id: usize,
    source: &[String],
    lattice: &HypothesisLattice,
    cfg: &BeamConfig,
) -> Result<NBestList> {
    if source.is_empty() {
        return Err(Error::EmptySource);
    }
    constrained_beam_search_encoded(model, source_id, &model.encode(source), lattice, cfg)
}

pub fn constrained_beam_search_encoded<M: ScoringModel>(
    model: &M,
    source_id: usize,
    encoded: &M::Encoded,
    lattice: &HypothesisLattice,
    cfg: &BeamConfig,
) -> Result<NBestList> {
    let final_state = lattice.final_state();
    let max_steps = (0..final_state)
        .map(|s| {
            lattice
                .arcs_at(s)
                .iter()
                .map(|a| a.model_tokens.len())
                .max()
                .unwrap_or(0)
        })
        .sum::<usize>()
        + 1;
    let start = LatticeCursor {
        state: 0,
        arc: 0,
        offset: 0,
    };
    let outcome = run_beam(cfg.beam_width, max_steps, start, |item, out| {
        let cur = item.state;
        let scores = model.next_scores(encoded, &item.tokens);
        let advance = |arc: usize, len: usize, offset: usize| {
            if offset == len {
                LatticeCursor {
                    state: cur.state + 1,
                    arc: 0,
                    offset: 0,
                }
            } else {
                LatticeCursor {
                    state: cur.state,
                    arc,
                    offset,
                }
            }
        };
        if cur.offset > 0 {
            let arc = &lattice.arcs_at(cur.state)[cur.arc];
            let tok = &arc.model_tokens[cur.offset];
            let next = advance(cur.arc, arc.model_tokens.len(), cur.offset + 1);
            out.push(item.extend(tok, scores.get(tok), next));
        } else if cur.state == final_state {
            out.push(item.close(scores.eos()));
        } else {
            for (k, arc) in lattice.arcs_at(cur.state).iter().enumerate() {
                let tok = &arc.model_tokens[0];
                let next = advance(k, arc.model_tokens.len(), 1);
                out.push(item.extend(tok, scores.get(tok), next));
            }
        }
    });
    match outcome {
        Outcome::Finished(done) if !done.is_empty() => Ok(to_nbest(source_id, done, cfg.nbest)),
        _ => Err(Error::BeamExhausted { source_id }),
    }
}
