//! Gender lexicon, grammatical-gender analysis and the reinflection
//! transducer built from it.

mod gender;
mod lexicon;
mod pairs;

pub use gender::{GenderLabel, LabelSet};
pub use lexicon::{
    load_lexicon, load_patterns, parse_patterns, patterns_to_tsv, GenderLexicon, LexiconEntry,
    PatternKind, PlaceholderPattern,
};
pub use pairs::{build_reinflection_pairs, load_pairs, ReinflectionPair, ReinflectionPairSet};
