//! Constrained hypothesis lattices.
//!
//! Composing the reinflection transducer with one hypothesis gives a linear
//! chain: position `i` carries an identity arc for the original word followed
//! by one arc per distinct reinflection of it. Every path is one gendered
//! variant of the hypothesis.

mod io;
mod segment;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::morpho::{GenderLabel, ReinflectionPairSet};
use crate::text::is_plain_token;

pub use io::{deserialize_lattice, serialize_lattice};
pub use segment::{IdentitySegmenter, Segmenter, TableSegmenter};

/// Default cap on the number of paths `enumerate_paths` will materialize.
pub const DEFAULT_PATH_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeArc {
    pub from: usize,
    pub to: usize,
    pub word: String,
    pub model_tokens: Vec<String>,
    pub gender: Option<GenderLabel>,
}

fn is_model_token(t: &str) -> bool {
    is_plain_token(t) && !t.contains('+')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisLattice {
    positions: Vec<Vec<LatticeArc>>,
}

/// One complete path through a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    /// Arc index chosen at each position.
    pub arcs: Vec<usize>,
    pub words: Vec<String>,
    pub genders: Vec<Option<GenderLabel>>,
    pub tokens: Vec<String>,
}

impl HypothesisLattice {
    /// Validates and wraps per-position arc lists.
    pub fn new(positions: Vec<Vec<LatticeArc>>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidLattice("lattice has no positions".into()));
        }
        for (i, arcs) in positions.iter().enumerate() {
            if arcs.is_empty() {
                return Err(Error::InvalidLattice(format!("state {i} has no outgoing arc")));
            }
            let mut words = BTreeSet::new();
            for arc in arcs {
                if arc.from != i || arc.to != i + 1 {
                    return Err(Error::InvalidLattice(format!(
                        "arc {}->{} listed at position {i}",
                        arc.from, arc.to
                    )));
                }
                if !is_plain_token(&arc.word) {
                    return Err(Error::InvalidToken(arc.word.clone()));
                }
                if arc.model_tokens.is_empty() {
                    return Err(Error::InvalidLattice(format!(
                        "arc `{}` has no model tokens",
                        arc.word
                    )));
                }
                if let Some(bad) = arc.model_tokens.iter().find(|t| !is_model_token(t)) {
                    return Err(Error::InvalidToken(bad.clone()));
                }
                if !words.insert(arc.word.as_str()) {
                    return Err(Error::InvalidLattice(format!(
                        "duplicate word `{}` at position {i}",
                        arc.word
                    )));
                }
            }
        }
        Ok(HypothesisLattice { positions })
    }

    pub fn num_positions(&self) -> usize {
        self.positions.len()
    }

    pub fn start_state(&self) -> usize {
        0
    }

    pub fn final_state(&self) -> usize {
        self.positions.len()
    }

    pub fn arcs_at(&self, state: usize) -> &[LatticeArc] {
        self.positions.get(state).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn arcs(&self) -> impl Iterator<Item = &LatticeArc> {
        self.positions.iter().flatten()
    }

    /// Product of per-position arc counts, saturating at `u128::MAX`.
    pub fn path_count(&self) -> u128 {
        self.positions
            .iter()
            .fold(1u128, |acc, arcs| acc.saturating_mul(arcs.len() as u128))
    }

    /// The path made of the first (identity) arc at every position.
    pub fn identity_path(&self) -> LatticePath {
        self.path(&vec![0; self.positions.len()])
    }

    fn path(&self, choice: &[usize]) -> LatticePath {
        let mut path = LatticePath {
            arcs: choice.to_vec(),
            words: Vec::with_capacity(choice.len()),
            genders: Vec::with_capacity(choice.len()),
            tokens: Vec::new(),
        };
        for (arcs, &k) in self.positions.iter().zip(choice) {
            let arc = &arcs[k];
            path.words.push(arc.word.clone());
            path.genders.push(arc.gender.clone());
            path.tokens.extend(arc.model_tokens.iter().cloned());
        }
        path
    }

    /// Enumerates paths in odometer order: the last position varies fastest
    /// and arcs at each position are taken in stored order (identity first).
    pub fn enumerate_paths(&self, limit: Option<usize>) -> Result<Vec<LatticePath>> {
        self.enumerate_paths_bounded(limit, DEFAULT_PATH_BOUND)
    }

    /// As `enumerate_paths`, failing when no limit is given and the lattice
    /// has more than `bound` paths.
    pub fn enumerate_paths_bounded(
        &self,
        limit: Option<usize>,
        bound: u128,
    ) -> Result<Vec<LatticePath>> {
        let count = self.path_count();
        let take = match limit {
            Some(l) => (l as u128).min(count) as usize,
            None if count > bound => return Err(Error::PathOverflow { count, bound }),
            None => count as usize,
        };
        let mut out = Vec::with_capacity(take);
        let mut choice = vec![0usize; self.positions.len()];
        while out.len() < take {
            out.push(self.path(&choice));
            // advance the odometer
            for i in (0..choice.len()).rev() {
                choice[i] += 1;
                if choice[i] < self.positions[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
        Ok(out)
    }
}

/// Composes the reinflection pairs with a word-level hypothesis.
///
/// Each position gets the identity arc, then one arc per pair `w -> v` in
/// pair-set order, deduplicated by target word. Arc genders come from the
/// transducer itself; words it never produces get no gender.
pub fn compose_lattice(
    pairs: &ReinflectionPairSet,
    hypothesis: &[String],
    segmenter: &dyn Segmenter,
) -> Result<HypothesisLattice> {
    if hypothesis.is_empty() {
        return Err(Error::EmptyHypothesis);
    }
    let mut positions = Vec::with_capacity(hypothesis.len());
    for (i, word) in hypothesis.iter().enumerate() {
        if !is_plain_token(word) {
            return Err(Error::InvalidToken(word.clone()));
        }
        let identity_gender = pairs
            .genders_of(word)
            .and_then(|g| g.iter().next().cloned());
        let mut arcs = vec![LatticeArc {
            from: i,
            to: i + 1,
            word: word.clone(),
            model_tokens: segmenter.segment(word),
            gender: identity_gender,
        }];
        for pair in pairs.targets(word) {
            if arcs.iter().any(|a| a.word == pair.target) {
                continue;
            }
            arcs.push(LatticeArc {
                from: i,
                to: i + 1,
                word: pair.target.clone(),
                model_tokens: segmenter.segment(&pair.target),
                gender: Some(pair.target_gender.clone()),
            });
        }
        positions.push(arcs);
    }
    HypothesisLattice::new(positions)
}
