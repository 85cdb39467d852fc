//! Inference-time tools for grammatical-gender consistency in machine
//! translation n-best lists.
//!
//! The crate is organised as the pipeline runs:
//!
//! * [`morpho`]: gender lexicon, analysis and the reinflection transducer.
//! * [`lattice`]: composing reinflections with a hypothesis into a lattice.
//! * [`decode`]: scoring models, beam search, constrained search, two passes.
//! * [`rerank`]: agreement-based selection from an n-best list.
//! * [`eval`]: accuracy / ΔG metrics, pipeline runs and beam-width sweeps.
//! * [`cli`]: file-based command-line front end.

pub mod cli;
pub mod decode;
pub mod error;
pub mod eval;
pub mod lattice;
pub mod morpho;
pub mod rerank;
pub mod text;

pub use error::{Error, Result};
