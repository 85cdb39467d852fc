//! Scoring models, beam search and the two-pass gender-constrained workflow.

mod model;
mod nbest;
mod noisy;
mod search;
mod table;

use crate::error::{Error, Result};
use crate::lattice::{compose_lattice, HypothesisLattice, Segmenter};
use crate::morpho::ReinflectionPairSet;

pub use model::{score_sequence, ScoringModel, TokenScores, BOS, DEFAULT_FLOOR, EOS};
pub use nbest::{
    nbest_to_string, parse_nbest, parse_nbest_str, write_nbest, Hypothesis, NBestList,
};
pub use noisy::NoisyChannelToy;
pub use search::{
    beam_search, beam_search_encoded, beam_search_fixed_length, constrained_beam_search,
    constrained_beam_search_encoded, BeamConfig,
};
pub use table::TableModel;

/// Everything the two passes produced for one sentence.
#[derive(Debug, Clone)]
pub struct TwoPassOutput {
    pub first_pass: NBestList,
    /// Word-level 1-best of the first pass.
    pub initial_words: Vec<String>,
    pub lattice: HypothesisLattice,
    pub second_pass: NBestList,
}

/// Standard beam search, then a gender-constrained pass over the lattice of
/// reinflections of the first-pass 1-best. The source is encoded once and
/// shared by both passes.
pub fn two_pass_decode<M: ScoringModel>(
    model: &M,
    source_id: usize,
    source: &[String],
    pairs: &ReinflectionPairSet,
    segmenter: &dyn Segmenter,
    cfg_first: &BeamConfig,
    cfg_second: &BeamConfig,
) -> Result<NBestList> {
    two_pass_decode_detailed(model, source_id, source, pairs, segmenter, cfg_first, cfg_second)
        .map(|out| out.second_pass)
}

pub fn two_pass_decode_detailed<M: ScoringModel>(
    model: &M,
    source_id: usize,
    source: &[String],
    pairs: &ReinflectionPairSet,
    segmenter: &dyn Segmenter,
    cfg_first: &BeamConfig,
    cfg_second: &BeamConfig,
) -> Result<TwoPassOutput> {
    if source.is_empty() {
        return Err(Error::EmptySource);
    }
    let encoded = model.encode(source);
    let first_pass = beam_search_encoded(model, source_id, &encoded, cfg_first)?;
    let best = first_pass.best().ok_or(Error::NoCompletedHypothesis {
        source_id,
        max_len: cfg_first.max_len,
    })?;
    let initial_words = segmenter.detokenize(&best.tokens);
    let lattice = compose_lattice(pairs, &initial_words, segmenter)?;
    let second_pass =
        constrained_beam_search_encoded(model, source_id, &encoded, &lattice, cfg_second)?;
    Ok(TwoPassOutput {
        first_pass,
        initial_words,
        lattice,
        second_pass,
    })
}
