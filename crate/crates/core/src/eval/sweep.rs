use std::fmt::Write as _;

use rayon::prelude::*;

use crate::decode::{BeamConfig, ScoringModel};
use crate::error::{Error, Result};

use super::metrics::{score_records, EvalRecord};
use super::pipeline::{Pipeline, RerankMode};
use super::testset::TestItem;

/// Oracle-rerank accuracy of constrained decoding per beam width.
///
/// Each sentence is decoded once with the widest second-pass beam; width
/// `w` then reranks the first `w` candidates of that list, so candidate
/// sets are nested across widths. The first pass keeps the pipeline's
/// configuration.
pub fn beam_sweep<M: ScoringModel + Sync>(
    pipeline: &Pipeline<'_, M>,
    items: &[TestItem],
    widths: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let Some(&widest) = widths.last() else {
        return Err(Error::Invalid("no beam widths given".into()));
    };
    if widths[0] == 0 || widths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "beam widths must be positive and strictly ascending".into(),
        ));
    }
    let wide = Pipeline {
        second: BeamConfig::with_max_len(widest, widest, pipeline.second.max_len)?,
        ..*pipeline
    };
    let lists = items
        .par_iter()
        .map(|it| wide.candidates(it, true))
        .collect::<Result<Vec<_>>>()?;

    widths
        .iter()
        .map(|&w| {
            let records = items
                .iter()
                .zip(&lists)
                .map(|(it, list)| {
                    wide.judge(it, list.truncated(w), RerankMode::Oracle)
                        .map(|o| o.record)
                })
                .collect::<Result<Vec<EvalRecord>>>()?;
            Ok((w, score_records(&records)?.accuracy))
        })
        .collect()
}

pub fn sweep_to_csv(rows: &[(usize, f64)]) -> String {
    let mut out = String::from("beam_width,accuracy\n");
    for (w, acc) in rows {
        let _ = writeln!(out, "{w},{acc}");
    }
    out
}

/// Parses `4,8,12` into widths.
pub fn parse_widths(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Invalid(format!("bad beam width `{p}`")))
        })
        .collect()
}
