//! Gender-translation metrics, end-to-end pipeline runs, beam-width sweeps
//! and the synthetic benchmark.

mod metrics;
mod pipeline;
mod sweep;
pub mod synthetic;
mod testset;

pub use metrics::{score_records, EvalRecord, MetricReport};
pub use pipeline::{evaluate_pipeline, predicted_gender, Modes, Pipeline, RerankMode, SentenceOutcome};
pub use sweep::{beam_sweep, parse_widths, sweep_to_csv};
pub use testset::{load_testset, parse_testset_str, testset_to_string, write_testset, TestItem};
