#![allow(dead_code)]

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::path::PathBuf;

use genderbeam::decode::{BeamConfig, Hypothesis, NBestList, ScoringModel, TableModel, TokenScores};
use genderbeam::eval::synthetic::SyntheticBenchmark;
use genderbeam::eval::Pipeline;
use genderbeam::lattice::{HypothesisLattice, IdentitySegmenter, LatticeArc};
use genderbeam::morpho::{GenderLabel, LexiconEntry, ReinflectionPair, ReinflectionPairSet};
use genderbeam::rerank::{AlignmentMap, AlignmentTable, DiagonalAligner, NearestNounResolver, PronounTable};
use proptest::prelude::*;

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

// ---- Fig. 1 toy -------------------------------------------------------

pub fn doctor_pairs() -> ReinflectionPairSet {
    ReinflectionPairSet::new([
        ReinflectionPair::new("el", "la", GenderLabel::Feminine),
        ReinflectionPair::new("la", "el", GenderLabel::Masculine),
        ReinflectionPair::new("médico", "médica", GenderLabel::Feminine),
        ReinflectionPair::new("médica", "médico", GenderLabel::Masculine),
    ])
    .unwrap()
}

pub fn doctor_model() -> TableModel {
    let text = std::fs::read_to_string(data_dir().join("doctor/model.tsv")).unwrap();
    TableModel::parse(&text, genderbeam::decode::DEFAULT_FLOOR, "doctor").unwrap()
}

// ---- a deterministic pseudo-random scorer ----------------------------

/// Scores every (source, prefix, token) with a hash-derived log probability
/// in [-5, 0). Vocabulary is fixed up front.
pub struct HashModel {
    pub salt: u64,
    pub vocabulary: Vec<String>,
}

impl HashModel {
    fn score(&self, source: &str, prefix: &[String], token: &str) -> f64 {
        let mut h = DefaultHasher::new();
        (self.salt, source, prefix, token).hash(&mut h);
        -((h.finish() % 5000) as f64 + 1.0) / 1000.0
    }
}

impl ScoringModel for HashModel {
    type Encoded = String;

    fn encode(&self, source: &[String]) -> String {
        source.join(" ")
    }

    fn next_scores(&self, source: &String, prefix: &[String]) -> TokenScores {
        let mut s = TokenScores::new(-20.0);
        for t in &self.vocabulary {
            s.insert(t, self.score(source, prefix, t));
        }
        s.set_eos(self.score(source, prefix, "</s>"));
        s
    }

    fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }
}

/// Random lattice: `shape[i]` arcs at position i, arc j at position i has
/// `lens[i][j]` model tokens, all unique to that arc.
pub fn lattice_from_shape(shape: &[Vec<usize>]) -> HypothesisLattice {
    let positions = shape
        .iter()
        .enumerate()
        .map(|(i, arcs)| {
            arcs.iter()
                .enumerate()
                .map(|(j, &len)| LatticeArc {
                    from: i,
                    to: i + 1,
                    word: format!("w{i}x{j}"),
                    model_tokens: (0..len).map(|k| format!("t{i}x{j}p{k}")).collect(),
                    gender: if j == 0 { None } else { Some(GenderLabel::Feminine) },
                })
                .collect()
        })
        .collect();
    HypothesisLattice::new(positions).unwrap()
}

// ---- exhaustive oracle for the reranker ------------------------------

/// Index maximizing (agreement, loglik, -rank) by pairwise comparison.
pub fn exhaustive_argmax(agreements: &[usize], logliks: &[f64]) -> usize {
    let beats = |a: usize, b: usize| {
        agreements[a] > agreements[b]
            || (agreements[a] == agreements[b] && logliks[a] > logliks[b])
            || (agreements[a] == agreements[b] && logliks[a] == logliks[b] && a < b)
    };
    (0..agreements.len())
        .find(|&i| (0..agreements.len()).all(|j| j == i || beats(i, j)))
        .expect("a strict total order has a maximum")
}

// ---- synthetic benchmark ---------------------------------------------

pub struct Bench {
    pub data: SyntheticBenchmark,
    pub model: genderbeam::decode::NoisyChannelToy,
    pub resolver: NearestNounResolver,
    pub pronouns: PronounTable,
}

impl Bench {
    pub fn bundled() -> Bench {
        let data = SyntheticBenchmark::load_dir(&data_dir().join("synthetic")).unwrap();
        Bench {
            model: data.model().unwrap(),
            resolver: data.resolver(),
            pronouns: data.pronouns(),
            data,
        }
    }

    pub fn pipeline(&self, first: usize, second: usize) -> Pipeline<'_, genderbeam::decode::NoisyChannelToy> {
        Pipeline {
            model: &self.model,
            segmenter: &IdentitySegmenter,
            pairs: &self.data.pairs,
            lexicon: &self.data.lexicon,
            aligner: &DiagonalAligner,
            pronouns: &self.pronouns,
            resolver: &self.resolver,
            first: BeamConfig::width(first).unwrap(),
            second: BeamConfig::width(second).unwrap(),
        }
    }
}

// ---- proptest strategies for file round-trips -----------------------

pub fn word() -> impl Strategy<Value = String> {
    "[a-zA-Zñáéíóú][a-zA-Z0-9ñáéíóú.'-]{0,7}"
}

fn loglik() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-1e6f64..=0.0),
        Just(0.0),
        (-100i32..=0).prop_map(|i| i as f64 * 0.1),
    ]
}

pub fn nbest_lists() -> impl Strategy<Value = Vec<NBestList>> {
    prop::collection::btree_map(
        0usize..500,
        prop::collection::vec(
            (prop::collection::vec(word(), 1..8), loglik()).prop_map(|(t, l)| Hypothesis::new(t, l)),
            1..6,
        ),
        1..6,
    )
    .prop_map(|m| m.into_iter().map(|(id, hyps)| NBestList::new(id, hyps)).collect())
}

pub fn alignment_tables() -> impl Strategy<Value = AlignmentTable> {
    prop::collection::btree_map(
        (0usize..50, 0usize..10),
        prop::collection::btree_set((0usize..40, 0usize..40), 0..12)
            .prop_map(|links| AlignmentMap { links }),
        1..10,
    )
}

fn gender() -> impl Strategy<Value = GenderLabel> {
    prop_oneof![
        Just(GenderLabel::Masculine),
        Just(GenderLabel::Feminine),
        Just(GenderLabel::Neuter),
        Just(GenderLabel::None),
        Just(GenderLabel::Custom("neutral-new".into())),
    ]
}

pub fn lattices() -> impl Strategy<Value = HypothesisLattice> {
    let arc = (word(), prop::collection::vec("[a-z@áé]{1,4}", 1..4), prop::option::of(gender()));
    prop::collection::vec(prop::collection::vec(arc, 1..4), 1..6).prop_map(|positions| {
        let positions = positions
            .into_iter()
            .enumerate()
            .map(|(i, arcs)| {
                let mut seen = BTreeSet::new();
                arcs.into_iter()
                    .filter(|(w, ..)| seen.insert(w.clone()))
                    .map(|(word, model_tokens, gender)| LatticeArc {
                        from: i,
                        to: i + 1,
                        word,
                        model_tokens,
                        gender,
                    })
                    .collect()
            })
            .collect();
        HypothesisLattice::new(positions).unwrap()
    })
}

pub fn lexicon_entries() -> impl Strategy<Value = Vec<LexiconEntry>> {
    prop::collection::vec((word(), word(), "[A-Z][A-Za-z.=|]{0,8}", gender()), 0..25).prop_map(|rows| {
        let mut seen = BTreeMap::new();
        for (s, l, f, g) in rows {
            seen.entry((s.clone(), f.clone(), g.clone()))
                .or_insert_with(|| LexiconEntry::new(&s, &l, &f, g));
        }
        seen.into_values().collect()
    })
}
