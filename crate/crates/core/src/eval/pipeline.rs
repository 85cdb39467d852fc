use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::decode::{beam_search, two_pass_decode, BeamConfig, Hypothesis, NBestList, ScoringModel};
use crate::error::{Error, Result};
use crate::lattice::Segmenter;
use crate::morpho::{GenderLabel, GenderLexicon, ReinflectionPairSet};
use crate::rerank::{
    get_entity, pronoun_and_gender, rerank, Aligner, AlignmentMap, CorefResolver, EntitySpec,
    PronounTable,
};

use super::metrics::{score_records, EvalRecord, MetricReport};
use super::testset::TestItem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RerankMode {
    /// Keep the highest-likelihood hypothesis.
    Off,
    /// Rerank with the annotated entity and gold gender.
    Oracle,
    /// Rerank with pronouns and coreference found automatically.
    Inferred,
}

impl RerankMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RerankMode::Off => "off",
            RerankMode::Oracle => "oracle",
            RerankMode::Inferred => "inferred",
        }
    }
}

impl fmt::Display for RerankMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RerankMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(RerankMode::Off),
            "oracle" => Ok(RerankMode::Oracle),
            "inferred" => Ok(RerankMode::Inferred),
            other => Err(Error::Invalid(format!("unknown rerank mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modes {
    pub constrain: bool,
    pub rerank: RerankMode,
}

impl Modes {
    pub fn new(constrain: bool, rerank: RerankMode) -> Self {
        Modes { constrain, rerank }
    }
}

/// What the pipeline did with one test sentence.
#[derive(Debug, Clone)]
pub struct SentenceOutcome {
    /// Candidate list in target words.
    pub candidates: NBestList,
    pub alignments: Vec<AlignmentMap>,
    pub selected_index: usize,
    pub record: EvalRecord,
}

impl SentenceOutcome {
    pub fn selected(&self) -> &Hypothesis {
        &self.candidates.hypotheses[self.selected_index]
    }
}

/// The components one evaluation run is wired from.
pub struct Pipeline<'a, M: ScoringModel> {
    pub model: &'a M,
    pub segmenter: &'a dyn Segmenter,
    pub pairs: &'a ReinflectionPairSet,
    pub lexicon: &'a GenderLexicon,
    pub aligner: &'a dyn Aligner,
    pub pronouns: &'a PronounTable,
    pub resolver: &'a dyn CorefResolver,
    /// Standard search, and the first pass when constraining.
    pub first: BeamConfig,
    /// Constrained second pass.
    pub second: BeamConfig,
}

/// Majority gender over the translated entity tokens. Tokens with no
/// gender are skipped; a tie or nothing gendered gives `None`.
pub fn predicted_gender(
    hypothesis: &[String],
    alignment: &AlignmentMap,
    entity: &std::collections::BTreeSet<usize>,
    lexicon: &GenderLexicon,
) -> Option<GenderLabel> {
    let mut votes: BTreeMap<GenderLabel, usize> = BTreeMap::new();
    for t in alignment.targets_of(entity) {
        let Some(tok) = hypothesis.get(t) else { continue };
        for g in lexicon.analyze_gender(tok) {
            if !g.is_none() {
                *votes.entry(g).or_default() += 1;
            }
        }
    }
    let top = votes.values().copied().max()?;
    let mut winners = votes.into_iter().filter(|&(_, n)| n == top);
    let (label, _) = winners.next()?;
    match winners.next() {
        Some(_) => None,
        None => Some(label),
    }
}

impl<'a, M: ScoringModel> Pipeline<'a, M> {
    /// Decodes one sentence and converts the list to target words.
    pub fn candidates(&self, item: &TestItem, constrain: bool) -> Result<NBestList> {
        let list = if constrain {
            two_pass_decode(
                self.model,
                item.sent_id,
                &item.source,
                self.pairs,
                self.segmenter,
                &self.first,
                &self.second,
            )?
        } else {
            beam_search(self.model, item.sent_id, &item.source, &self.first)?
        };
        Ok(self.to_words(&list))
    }

    pub fn to_words(&self, list: &NBestList) -> NBestList {
        NBestList {
            source_id: list.source_id,
            hypotheses: list
                .hypotheses
                .iter()
                .map(|h| Hypothesis::new(self.segmenter.detokenize(&h.tokens), h.loglik))
                .collect(),
        }
    }

    /// Entities found from source pronouns and the coreference resolver.
    pub fn inferred_entities(&self, source: &[String]) -> Vec<EntitySpec> {
        pronoun_and_gender(source, self.pronouns)
            .into_iter()
            .filter(|(_, g)| !g.is_none())
            .filter_map(|(idx, g)| {
                let indices = get_entity(source, idx, self.resolver);
                EntitySpec::new(Some(idx), g, indices).ok()
            })
            .collect()
    }

    /// Selects from an already decoded word-level list and scores it.
    pub fn judge(&self, item: &TestItem, candidates: NBestList, mode: RerankMode) -> Result<SentenceOutcome> {
        if candidates.is_empty() {
            return Err(Error::EmptyNBest);
        }
        let alignments: Vec<AlignmentMap> = candidates
            .hypotheses
            .iter()
            .map(|h| self.aligner.align(&item.source, &h.tokens))
            .collect();
        let entities = match mode {
            RerankMode::Off => None,
            RerankMode::Oracle => Some(vec![item.oracle_entity()?]),
            RerankMode::Inferred => Some(self.inferred_entities(&item.source)),
        };
        let selected_index = match entities {
            None => 0,
            Some(entities) => rerank(&candidates, &alignments, &entities, self.lexicon)?.selected_index,
        };
        let predicted = predicted_gender(
            &candidates.hypotheses[selected_index].tokens,
            &alignments[selected_index],
            &item.entity_indices,
            self.lexicon,
        );
        Ok(SentenceOutcome {
            record: EvalRecord::new(item.sent_id, item.gold_gender.clone(), predicted),
            candidates,
            alignments,
            selected_index,
        })
    }

    pub fn run_item(&self, item: &TestItem, modes: Modes) -> Result<SentenceOutcome> {
        let candidates = self.candidates(item, modes.constrain)?;
        self.judge(item, candidates, modes.rerank)
    }

    /// Runs every sentence (in parallel) and returns outcomes in input order.
    pub fn run(&self, items: &[TestItem], modes: Modes) -> Result<Vec<SentenceOutcome>>
    where
        M: Sync,
    {
        items.par_iter().map(|it| self.run_item(it, modes)).collect()
    }
}

pub fn evaluate_pipeline<M: ScoringModel + Sync>(
    pipeline: &Pipeline<'_, M>,
    items: &[TestItem],
    modes: Modes,
) -> Result<MetricReport> {
    let outcomes = pipeline.run(items, modes)?;
    let records: Vec<EvalRecord> = outcomes.into_iter().map(|o| o.record).collect();
    score_records(&records)
}
