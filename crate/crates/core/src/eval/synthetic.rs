//! Seeded template benchmark: English sources with one pronoun referring
//! to one of two professions, and a toy target language that marks gender
//! on articles, nouns, pronouns and adjectives. Word order is one-to-one,
//! so the diagonal aligner is exact.
//!
//! Source:  `the S verb the O because he|she was ADJ`
//! Target:  `el|la S' verb' al|ala O' porque él|ella estaba ADJ'`
//!
//! The lexical table and the target corpus both lean masculine, with a
//! per-profession stereotype, so plain decoding gets many feminine
//! references wrong.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decode::NoisyChannelToy;
use crate::error::Result;
use crate::morpho::{
    build_reinflection_pairs, load_lexicon, load_pairs, GenderLabel, GenderLexicon, LabelSet,
    LexiconEntry, ReinflectionPairSet,
};
use crate::rerank::{NearestNounResolver, PronounTable};
use crate::text::{read_normalized, write_text};

use super::testset::{load_testset, write_testset, TestItem};

// (english, masculine form, feminine form, stereotype: > 0 leans masculine)
const SUBJECTS: [(&str, &str, &str, f64); 5] = [
    ("doctor", "médico", "médica", 2.0),
    ("engineer", "ingeniero", "ingeniera", 2.5),
    ("cook", "cocinero", "cocinera", 0.3),
    ("nurse", "enfermero", "enfermera", -1.5),
    ("baker", "panadero", "panadera", 0.8),
];

const OBJECTS: [(&str, &str, &str, f64); 5] = [
    ("teacher", "maestro", "maestra", -0.3),
    ("cashier", "cajero", "cajera", -0.8),
    ("carpenter", "carpintero", "carpintera", 2.2),
    ("driver", "conductor", "conductora", 1.6),
    ("writer", "escritor", "escritora", 0.6),
];

const VERBS: [(&str, &str); 2] = [("called", "llamó"), ("helped", "ayudó")];

const ADJECTIVES: [(&str, &str, &str); 3] = [
    ("tired", "cansado", "cansada"),
    ("busy", "ocupado", "ocupada"),
    ("sick", "enfermo", "enferma"),
];

pub const TRIGGER_INDEX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticConfig {
    pub sentences: usize,
    pub corpus_sentences: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            sentences: 200,
            corpus_sentences: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticBenchmark {
    pub lexical: Vec<(String, String, f64)>,
    pub corpus: String,
    pub lexicon: GenderLexicon,
    pub pairs: ReinflectionPairSet,
    pub testset: Vec<TestItem>,
    /// Source nouns that can be coreference antecedents.
    pub nouns: Vec<String>,
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

fn form<'a>(masc: &'a str, fem: &'a str, feminine: bool) -> &'a str {
    if feminine {
        fem
    } else {
        masc
    }
}

/// Probability that the corpus uses the masculine form of a profession.
fn corpus_masculine_rate(stereotype: f64) -> f64 {
    (0.6 + 0.12 * stereotype).clamp(0.15, 0.9)
}

fn lexical_table() -> Vec<(String, String, f64)> {
    let mut rows: Vec<(&str, &str, f64)> = vec![
        ("the", "el", 0.0),
        ("the", "la", -0.4),
        ("the", "al", 0.0),
        ("the", "ala", -0.4),
        ("because", "porque", 0.0),
        ("he", "él", 0.0),
        ("he", "ella", -4.0),
        ("she", "ella", 0.0),
        ("she", "él", -4.0),
        ("was", "estaba", 0.0),
    ];
    for (en, m, f, s) in SUBJECTS.iter().chain(OBJECTS.iter()) {
        rows.push((en, m, -(-s).max(0.0)));
        rows.push((en, f, -s.max(0.0)));
    }
    for (en, t) in VERBS {
        rows.push((en, t, 0.0));
    }
    for (en, m, f) in ADJECTIVES {
        rows.push((en, m, 0.0));
        rows.push((en, f, -0.3));
    }
    rows.into_iter()
        .map(|(s, t, lp)| (s.to_string(), t.to_string(), lp))
        .collect()
}

fn target_lexicon() -> Result<GenderLexicon> {
    use GenderLabel::{Feminine as F, Masculine as M};
    let mut entries = vec![
        LexiconEntry::new("el", "el", "ART", M),
        LexiconEntry::new("la", "el", "ART", F),
        LexiconEntry::new("al", "al", "ART.obj", M),
        LexiconEntry::new("ala", "al", "ART.obj", F),
        LexiconEntry::new("él", "él", "PRON", M),
        LexiconEntry::new("ella", "él", "PRON", F),
        LexiconEntry::new("porque", "porque", "CONJ", GenderLabel::None),
        LexiconEntry::new("estaba", "estar", "VERB", GenderLabel::None),
    ];
    for (_, m, f, _) in SUBJECTS.iter().chain(OBJECTS.iter()) {
        entries.push(LexiconEntry::new(m, m, "NOUN", M));
        entries.push(LexiconEntry::new(f, m, "NOUN", F));
    }
    for (_, t) in VERBS {
        entries.push(LexiconEntry::new(t, t, "VERB", GenderLabel::None));
    }
    for (_, m, f) in ADJECTIVES {
        entries.push(LexiconEntry::new(m, m, "ADJ", M));
        entries.push(LexiconEntry::new(f, m, "ADJ", F));
    }
    GenderLexicon::from_entries(entries)
}

fn corpus(rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut out = String::new();
    for _ in 0..n {
        let (_, sm, sf, ss) = *pick(rng, &SUBJECTS);
        let (_, om, of, os) = *pick(rng, &OBJECTS);
        let (_, verb) = *pick(rng, &VERBS);
        let (_, am, af) = *pick(rng, &ADJECTIVES);
        let subj_f = !rng.random_bool(corpus_masculine_rate(ss));
        let obj_f = !rng.random_bool(corpus_masculine_rate(os));
        let pron_f = if rng.random_bool(0.5) { subj_f } else { obj_f };
        let words = [
            form("el", "la", subj_f),
            form(sm, sf, subj_f),
            verb,
            form("al", "ala", obj_f),
            form(om, of, obj_f),
            "porque",
            form("él", "ella", pron_f),
            "estaba",
            form(am, af, pron_f),
        ];
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

fn testset(rng: &mut ChaCha8Rng, n: usize) -> Vec<TestItem> {
    (0..n)
        .map(|sent_id| {
            let (subj, ..) = *pick(rng, &SUBJECTS);
            let (obj, ..) = *pick(rng, &OBJECTS);
            let (verb, _) = *pick(rng, &VERBS);
            let (adj, ..) = *pick(rng, &ADJECTIVES);
            let feminine = rng.random_bool(0.5);
            let refers_to_subject = rng.random_bool(0.5);
            let pronoun = if feminine { "she" } else { "he" };
            let source = ["the", subj, verb, "the", obj, "because", pronoun, "was", adj]
                .map(str::to_string)
                .to_vec();
            TestItem {
                sent_id,
                gold_gender: if feminine {
                    GenderLabel::Feminine
                } else {
                    GenderLabel::Masculine
                },
                source,
                trigger_index: Some(TRIGGER_INDEX),
                entity_indices: if refers_to_subject {
                    BTreeSet::from([0, 1])
                } else {
                    BTreeSet::from([3, 4])
                },
            }
        })
        .collect()
}

pub fn generate(cfg: &SyntheticConfig) -> Result<SyntheticBenchmark> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let corpus = corpus(&mut rng, cfg.corpus_sentences);
    let testset = testset(&mut rng, cfg.sentences);
    let lexicon = target_lexicon()?;
    let pairs = build_reinflection_pairs(&lexicon);
    Ok(SyntheticBenchmark {
        lexical: lexical_table(),
        corpus,
        lexicon,
        pairs,
        testset,
        nouns: SUBJECTS
            .iter()
            .chain(OBJECTS.iter())
            .map(|(en, ..)| en.to_string())
            .collect(),
    })
}

pub const LEXICAL_FILE: &str = "lexical.tsv";
pub const CORPUS_FILE: &str = "corpus.txt";
pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const PAIRS_FILE: &str = "pairs.tsv";
pub const TESTSET_FILE: &str = "testset.tsv";
pub const NOUNS_FILE: &str = "nouns.txt";
pub const PRONOUNS_FILE: &str = "pronouns.tsv";

impl SyntheticBenchmark {
    pub fn model(&self) -> Result<NoisyChannelToy> {
        NoisyChannelToy::new(self.lexical.iter().cloned(), &self.corpus)
    }

    pub fn resolver(&self) -> NearestNounResolver {
        NearestNounResolver::new(self.nouns.iter().cloned())
    }

    pub fn pronouns(&self) -> PronounTable {
        PronounTable::english_binary()
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        let lexical: String = self
            .lexical
            .iter()
            .map(|(s, t, lp)| format!("{s}\t{t}\t{lp}\n"))
            .collect();
        write_text(&dir.join(LEXICAL_FILE), &lexical)?;
        write_text(&dir.join(CORPUS_FILE), &self.corpus)?;
        write_text(&dir.join(LEXICON_FILE), &self.lexicon.to_tsv())?;
        write_text(&dir.join(PAIRS_FILE), &self.pairs.to_tsv())?;
        write_testset(&self.testset, &dir.join(TESTSET_FILE))?;
        write_text(&dir.join(NOUNS_FILE), &(self.nouns.join("\n") + "\n"))?;
        write_text(
            &dir.join(PRONOUNS_FILE),
            "he\tmasculine\nhim\tmasculine\nhis\tmasculine\nshe\tfeminine\nher\tfeminine\nhers\tfeminine\n",
        )
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let lex_path = dir.join(LEXICAL_FILE);
        let lexical = NoisyChannelToy::parse_lexical(
            &read_normalized(&lex_path)?,
            &lex_path.display().to_string(),
        )?;
        let nouns = read_normalized(&dir.join(NOUNS_FILE))?
            .split_whitespace()
            .map(str::to_string)
            .collect();
        Ok(SyntheticBenchmark {
            lexical,
            corpus: read_normalized(&dir.join(CORPUS_FILE))?,
            lexicon: load_lexicon(&dir.join(LEXICON_FILE), &LabelSet::new())?,
            pairs: load_pairs(&dir.join(PAIRS_FILE))?,
            testset: load_testset(&dir.join(TESTSET_FILE))?,
            nouns,
        })
    }
}
