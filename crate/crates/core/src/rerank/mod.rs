//! Gender-agreement reranking of n-best lists.
//!
//! Each hypothesis scores one point per aligned target token of a source
//! entity whose grammatical gender matches the gender the source requires.
//! Selection maximizes that score, then log likelihood, then prefers the
//! earlier rank.

mod align;
mod coref;
pub(crate) mod entities;

use std::collections::BTreeSet;

use crate::decode::{Hypothesis, NBestList};
use crate::error::{Error, Result};
use crate::morpho::{GenderLabel, GenderLexicon};

pub use align::{
    alignments_to_string, parse_alignments, parse_alignments_str, write_alignments, Aligner,
    AlignmentMap, AlignmentTable, DiagonalAligner,
};
pub use coref::{get_entity, pronoun_and_gender, CorefResolver, NearestNounResolver, PronounTable};
pub use entities::{entities_to_string, load_entities, parse_entities_str, EntityTable};

/// A gendered source entity: which source tokens refer to it and which
/// gender their translations must carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySpec {
    /// Source index of the pronoun (or mention) that fixes the gender;
    /// absent for named entities with a known gender.
    pub trigger_index: Option<usize>,
    pub required_gender: GenderLabel,
    pub entity_indices: BTreeSet<usize>,
}

impl EntitySpec {
    pub fn new(
        trigger_index: Option<usize>,
        required_gender: GenderLabel,
        entity_indices: BTreeSet<usize>,
    ) -> Result<Self> {
        if required_gender.is_none() {
            return Err(Error::InvalidEntity("required gender cannot be `none`".into()));
        }
        if entity_indices.is_empty() {
            return Err(Error::InvalidEntity("entity has no source indices".into()));
        }
        Ok(EntitySpec {
            trigger_index,
            required_gender,
            entity_indices,
        })
    }

    /// Checks every index against a source sentence length.
    pub fn check_source_len(&self, len: usize) -> Result<()> {
        let out_of_range = self
            .trigger_index
            .into_iter()
            .chain(self.entity_indices.iter().copied())
            .find(|&i| i >= len);
        match out_of_range {
            Some(i) => Err(Error::InvalidEntity(format!(
                "index {i} outside a {len}-token source"
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RerankResult {
    pub selected_index: usize,
    pub agreement_scores: Vec<usize>,
    pub selected_hypothesis: Vec<String>,
}

/// Counts aligned entity tokens whose analyzed genders include the
/// required gender, summed over entities. Links pointing past the end of
/// the hypothesis are ignored.
pub fn agreement_score(
    hypothesis: &[String],
    alignment: &AlignmentMap,
    entities: &[EntitySpec],
    lexicon: &GenderLexicon,
) -> usize {
    entities
        .iter()
        .map(|entity| {
            alignment
                .targets_of(&entity.entity_indices)
                .into_iter()
                .filter_map(|t| hypothesis.get(t))
                .filter(|tok| lexicon.analyze_gender(tok).contains(&entity.required_gender))
                .count()
        })
        .sum()
}

/// Selects the hypothesis with the highest agreement, breaking ties by log
/// likelihood and then by lower original rank.
pub fn rerank(
    nbest: &NBestList,
    alignments: &[AlignmentMap],
    entities: &[EntitySpec],
    lexicon: &GenderLexicon,
) -> Result<RerankResult> {
    if nbest.is_empty() {
        return Err(Error::EmptyNBest);
    }
    if alignments.len() != nbest.len() {
        return Err(Error::AlignmentCount {
            hypotheses: nbest.len(),
            alignments: alignments.len(),
        });
    }
    for (rank, (hyp, alignment)) in nbest.hypotheses.iter().zip(alignments).enumerate() {
        if let Some(&(s, t)) = alignment.links.iter().find(|&&(_, t)| t >= hyp.tokens.len()) {
            return Err(Error::AlignmentOutOfRange {
                rank,
                source_index: s,
                target_index: t,
            });
        }
    }
    let agreement_scores: Vec<usize> = nbest
        .hypotheses
        .iter()
        .zip(alignments)
        .map(|(h, a)| agreement_score(&h.tokens, a, entities, lexicon))
        .collect();

    let mut selected = 0;
    for i in 1..nbest.len() {
        let (a, b) = (agreement_scores[i], agreement_scores[selected]);
        let better = a > b
            || (a == b && nbest.hypotheses[i].loglik > nbest.hypotheses[selected].loglik);
        if better {
            selected = i;
        }
    }
    Ok(RerankResult {
        selected_index: selected,
        selected_hypothesis: nbest.hypotheses[selected].tokens.clone(),
        agreement_scores,
    })
}

/// Reranks with a gender known in advance for a named entity. The mention
/// itself is not scored (names carry no grammatical gender); the words
/// coreferent with it are. An empty coreferent set selects by likelihood.
pub fn rerank_named_entity(
    nbest: &NBestList,
    alignments: &[AlignmentMap],
    mention_indices: &BTreeSet<usize>,
    coref_indices: &BTreeSet<usize>,
    known_gender: GenderLabel,
    lexicon: &GenderLexicon,
) -> Result<RerankResult> {
    if mention_indices.is_empty() {
        return Err(Error::InvalidEntity("named entity has no mention".into()));
    }
    let entities = if coref_indices.is_empty() {
        Vec::new()
    } else {
        vec![EntitySpec::new(None, known_gender, coref_indices.clone())?]
    };
    rerank(nbest, alignments, &entities, lexicon)
}

/// Adds a placeholder hypothesis scored with the mean log likelihood of the
/// list. It goes after every existing hypothesis scoring at least the mean.
/// Returns the new list and the placeholder's index in it.
pub fn inject_placeholder(nbest: &NBestList, placeholder: Vec<String>) -> Result<(NBestList, usize)> {
    if nbest.is_empty() {
        return Err(Error::EmptyNBest);
    }
    let mean =
        nbest.hypotheses.iter().map(|h| h.loglik).sum::<f64>() / nbest.len() as f64;
    let mut hypotheses = nbest.hypotheses.clone();
    let at = hypotheses.partition_point(|h| h.loglik >= mean);
    hypotheses.insert(at, Hypothesis::new(placeholder, mean));
    Ok((
        NBestList {
            source_id: nbest.source_id,
            hypotheses,
        },
        at,
    ))
}
