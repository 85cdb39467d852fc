use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown gender tag `{0}`")]
    UnknownGender(String),

    #[error("invalid gender label `{0}`: {1}")]
    InvalidLabel(String, &'static str),

    #[error("duplicate placeholder pattern {kind} `{text}`")]
    DuplicatePattern { kind: String, text: String },

    #[error("invalid reinflection pair set: {0}")]
    InvalidPairSet(String),

    #[error("hypothesis is empty")]
    EmptyHypothesis,

    #[error("invalid token `{0}`: tokens must be nonempty and free of whitespace and `+`")]
    InvalidToken(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("lattice has {count} paths, more than the enumeration bound {bound}; pass a limit")]
    PathOverflow { count: u128, bound: u128 },

    #[error("invalid beam configuration: {0}")]
    InvalidBeamConfig(String),

    #[error("sentence {source_id}: no hypothesis reached end-of-sequence within {max_len} steps")]
    NoCompletedHypothesis { source_id: usize, max_len: usize },

    #[error("sentence {source_id}: constrained beam emptied before the final lattice state")]
    BeamExhausted { source_id: usize },

    #[error("source sentence is empty")]
    EmptySource,

    #[error("n-best list is empty")]
    EmptyNBest,

    #[error("{hypotheses} hypotheses but {alignments} alignments")]
    AlignmentCount {
        hypotheses: usize,
        alignments: usize,
    },

    #[error("alignment link {source_index}-{target_index} out of range for hypothesis {rank}")]
    AlignmentOutOfRange {
        rank: usize,
        source_index: usize,
        target_index: usize,
    },

    #[error("invalid entity: {0}")]
    InvalidEntity(String),

    #[error("no evaluation records")]
    EmptyRecords,

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }
}
