//! File-based command-line front end.
//!
//! Every stage reads and writes plain-text interchange files so that any
//! built-in component (model, aligner, coreference) can be swapped for an
//! external tool between stages.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::decode::{
    beam_search, parse_nbest, two_pass_decode, write_nbest, BeamConfig, Hypothesis, NBestList,
    NoisyChannelToy, ScoringModel, TableModel, DEFAULT_FLOOR,
};
use crate::eval::synthetic::{self, SyntheticConfig};
use crate::eval::{
    beam_sweep, load_testset, parse_widths, score_records, sweep_to_csv, Modes, Pipeline,
    RerankMode,
};
use crate::lattice::{
    compose_lattice, serialize_lattice, IdentitySegmenter, Segmenter, TableSegmenter,
};
use crate::morpho::{
    build_reinflection_pairs, load_lexicon, load_pairs, load_patterns, GenderLexicon, LabelSet,
    ReinflectionPairSet,
};
use crate::rerank::{
    load_entities, parse_alignments, rerank, write_alignments, Aligner, AlignmentTable,
    DiagonalAligner, NearestNounResolver, PronounTable,
};
use crate::text::{content_lines, read_normalized, tokenize, write_text};

#[derive(Debug, Parser)]
#[command(
    name = "genderbeam",
    version,
    about = "Gender-constrained beam search and agreement reranking for MT n-best lists"
)]
pub struct Cli {
    /// Seed for synthetic data generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the reinflection pair set from a gender lexicon.
    Pairs {
        #[arg(long)]
        lexicon: PathBuf,
        /// Extra gender labels allowed in the lexicon, one per line.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compose the pair set with one hypothesis and write the lattice.
    Lattice {
        #[arg(long)]
        pairs: PathBuf,
        /// Hypothesis as space-separated words.
        #[arg(long)]
        hyp: String,
        #[arg(long)]
        segments: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Standard beam search over a source file (one sentence per line).
    Decode {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        src: PathBuf,
        #[command(flatten)]
        beam: BeamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Beam search, then gender-constrained search over the reinflection
    /// lattice of each 1-best.
    TwoPass {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        src: PathBuf,
        #[command(flatten)]
        beam: BeamArgs,
        /// Beam width of the constrained pass (defaults to --beam).
        #[arg(long)]
        beam2: Option<usize>,
        #[arg(long)]
        segments: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select one hypothesis per sentence by gender agreement.
    Rerank {
        #[arg(long)]
        nbest: PathBuf,
        #[arg(long)]
        align: PathBuf,
        #[arg(long)]
        entities: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write diagonal alignments between sources and n-best hypotheses.
    Align {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        nbest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode, optionally constrain and rerank a test set, and report metrics.
    Eval {
        #[command(flatten)]
        setup: EvalArgs,
        #[arg(long, value_enum, default_value_t = Switch::Off)]
        constrain: Switch,
        #[arg(long, value_enum, default_value_t = RerankArg::Off)]
        rerank: RerankArg,
        /// CSV `metric,value` report.
        #[arg(long)]
        report: PathBuf,
        /// Selected translations, one n-best line per sentence.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Oracle-rerank accuracy of constrained decoding across beam widths.
    Sweep {
        #[command(flatten)]
        setup: EvalArgs,
        #[arg(long, default_value = "4,8,12,16,20")]
        widths: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the seeded synthetic benchmark to a directory.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        sentences: usize,
        #[arg(long, default_value_t = 10_000)]
        corpus_sentences: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RerankArg {
    Off,
    Oracle,
    Inferred,
}

impl From<RerankArg> for RerankMode {
    fn from(r: RerankArg) -> Self {
        match r {
            RerankArg::Off => RerankMode::Off,
            RerankArg::Oracle => RerankMode::Oracle,
            RerankArg::Inferred => RerankMode::Inferred,
        }
    }
}

/// Either `--model` (lookup table) or `--lexical` + `--corpus` (noisy channel).
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, conflicts_with_all = ["lexical", "corpus"])]
    pub model: Option<PathBuf>,
    #[arg(long, requires = "corpus")]
    pub lexical: Option<PathBuf>,
    #[arg(long, requires = "lexical")]
    pub corpus: Option<PathBuf>,
    /// Log probability of tokens the model does not list.
    #[arg(long, default_value_t = DEFAULT_FLOOR, allow_hyphen_values = true)]
    pub floor: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BeamArgs {
    #[arg(long, default_value_t = 4)]
    pub beam: usize,
    /// Hypotheses kept per sentence (defaults to the beam width).
    #[arg(long)]
    pub nbest: Option<usize>,
    #[arg(long, default_value_t = BeamConfig::DEFAULT_MAX_LEN)]
    pub max_len: usize,
}

impl BeamArgs {
    fn config(&self, width: usize) -> anyhow::Result<BeamConfig> {
        let nbest = self.nbest.unwrap_or(width).min(width);
        Ok(BeamConfig::with_max_len(width, nbest, self.max_len)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct LexiconArgs {
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Extra gender labels allowed in the lexicon, one per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Placeholder gender patterns, `kind<TAB>text<TAB>gender`.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
}

/// Inputs shared by `eval` and `sweep`. With `--data DIR` every file not
/// given explicitly is taken from the synthetic benchmark layout in DIR.
#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub testset: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Source pronoun table, `pronoun<TAB>gender` (defaults to English he/she).
    #[arg(long)]
    pub pronouns: Option<PathBuf>,
    /// Source nouns the coreference heuristic may resolve to.
    #[arg(long)]
    pub nouns: Option<PathBuf>,
    #[arg(long)]
    pub segments: Option<PathBuf>,
    #[command(flatten)]
    pub beam: BeamArgs,
    #[arg(long)]
    pub beam2: Option<usize>,
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Pairs { lexicon, labels, out } => {
            let labels = load_labels(labels.as_deref())?;
            let lexicon = load_lexicon(&lexicon, &labels)?;
            let pairs = build_reinflection_pairs(&lexicon);
            write_text(&out, &pairs.to_tsv())?;
            println!("{} lexicon entries, {} pairs", lexicon.len(), pairs.len());
        }
        Command::Lattice {
            pairs,
            hyp,
            segments,
            out,
        } => {
            let pairs = load_pairs(&pairs)?;
            let segmenter = load_segmenter(segments.as_deref())?;
            let lattice = compose_lattice(&pairs, &tokenize(&hyp), segmenter.as_ref())?;
            write_text(&out, &serialize_lattice(&lattice))?;
            println!(
                "{} positions, {} paths",
                lattice.num_positions(),
                lattice.path_count()
            );
        }
        Command::Decode {
            model,
            src,
            beam,
            out,
        } => {
            let sources = load_sources(&src)?;
            let cfg = beam.config(beam.beam)?;
            let lists = decode_all(&model.load()?, &sources, &cfg)?;
            write_nbest(&lists, &out)?;
        }
        Command::TwoPass {
            model,
            pairs,
            src,
            beam,
            beam2,
            segments,
            out,
        } => {
            let sources = load_sources(&src)?;
            let pairs = load_pairs(&pairs)?;
            let segmenter = load_segmenter(segments.as_deref())?;
            let first = beam.config(beam.beam)?;
            let second = beam.config(beam2.unwrap_or(beam.beam))?;
            let lists = two_pass_all(
                &model.load()?,
                &sources,
                &pairs,
                segmenter.as_ref(),
                &first,
                &second,
            )?;
            write_nbest(&lists, &out)?;
        }
        Command::Rerank {
            nbest,
            align,
            entities,
            lexicon,
            out,
        } => {
            let lists = parse_nbest(&nbest)?;
            let alignments = parse_alignments(&align)?;
            let entities = load_entities(&entities)?;
            let lexicon = load_lexicon_args(&lexicon)?;
            let selected = rerank_all(&lists, &alignments, &entities, &lexicon)?;
            write_nbest(&selected, &out)?;
        }
        Command::Align { src, nbest, out } => {
            let sources = load_sources(&src)?;
            let lists = parse_nbest(&nbest)?;
            let mut table = AlignmentTable::new();
            for (id, list) in &lists {
                let source = sources
                    .get(*id)
                    .ok_or_else(|| anyhow!("n-best id {id} has no source line"))?;
                for (rank, h) in list.hypotheses.iter().enumerate() {
                    table.insert((*id, rank), DiagonalAligner.align(source, &h.tokens));
                }
            }
            write_alignments(&table, &out)?;
        }
        Command::Eval {
            setup,
            constrain,
            rerank,
            report,
            out,
        } => {
            let inputs = EvalInputs::load(&setup)?;
            let model = setup.model_args().load()?;
            let (first, second) = setup.configs()?;
            let pipeline = inputs.pipeline(&model, first, second);
            let modes = Modes::new(constrain == Switch::On, rerank.into());
            let outcomes = pipeline.run(&inputs.items, modes)?;
            let selected: Vec<NBestList> = outcomes
                .iter()
                .map(|o| NBestList {
                    source_id: o.record.sent_id,
                    hypotheses: vec![o.selected().clone()],
                })
                .collect();
            let records: Vec<_> = outcomes.into_iter().map(|o| o.record).collect();
            let metrics = score_records(&records)?;
            write_text(&report, &metrics.to_csv())?;
            if let Some(out) = out {
                write_nbest(&selected, &out)?;
            }
            println!(
                "constrain={} rerank={}: {}",
                if modes.constrain { "on" } else { "off" },
                modes.rerank,
                metrics.summary()
            );
        }
        Command::Sweep { setup, widths, out } => {
            let widths = parse_widths(&widths)?;
            let inputs = EvalInputs::load(&setup)?;
            let model = setup.model_args().load()?;
            let (first, second) = setup.configs()?;
            let rows = beam_sweep(&inputs.pipeline(&model, first, second), &inputs.items, &widths)?;
            let csv = sweep_to_csv(&rows);
            write_text(&out, &csv)?;
            print!("{csv}");
        }
        Command::Synth {
            out,
            sentences,
            corpus_sentences,
        } => {
            let bench = synthetic::generate(&SyntheticConfig {
                sentences,
                corpus_sentences,
                seed: cli.seed,
            })?;
            bench.write_dir(&out)?;
            println!(
                "{} test sentences, {} corpus lines -> {}",
                bench.testset.len(),
                corpus_sentences,
                out.display()
            );
        }
    }
    Ok(())
}

/// A model loaded from the command line: either kind behind one type.
pub enum LoadedModel {
    Table(TableModel),
    Noisy(NoisyChannelToy),
}

pub enum LoadedEncoding {
    Table(<TableModel as ScoringModel>::Encoded),
    Noisy(<NoisyChannelToy as ScoringModel>::Encoded),
}

impl ScoringModel for LoadedModel {
    type Encoded = LoadedEncoding;

    fn encode(&self, source: &[String]) -> LoadedEncoding {
        match self {
            LoadedModel::Table(m) => LoadedEncoding::Table(m.encode(source)),
            LoadedModel::Noisy(m) => LoadedEncoding::Noisy(m.encode(source)),
        }
    }

    fn next_scores(&self, source: &LoadedEncoding, prefix: &[String]) -> crate::decode::TokenScores {
        match (self, source) {
            (LoadedModel::Table(m), LoadedEncoding::Table(e)) => m.next_scores(e, prefix),
            (LoadedModel::Noisy(m), LoadedEncoding::Noisy(e)) => m.next_scores(e, prefix),
            _ => unreachable!("source encoded by a different model"),
        }
    }

    fn vocabulary(&self) -> &[String] {
        match self {
            LoadedModel::Table(m) => m.vocabulary(),
            LoadedModel::Noisy(m) => m.vocabulary(),
        }
    }
}

impl ModelArgs {
    pub fn load(&self) -> anyhow::Result<LoadedModel> {
        match (&self.model, &self.lexical, &self.corpus) {
            (Some(path), None, None) => Ok(LoadedModel::Table(TableModel::load(path, self.floor)?)),
            (None, Some(lexical), Some(corpus)) => Ok(LoadedModel::Noisy(
                NoisyChannelToy::load(lexical, corpus)?.with_floor(self.floor)?,
            )),
            _ => bail!("give either --model or both --lexical and --corpus"),
        }
    }
}

fn load_labels(path: Option<&Path>) -> anyhow::Result<LabelSet> {
    let mut labels = LabelSet::new();
    if let Some(path) = path {
        let text = read_normalized(path)?;
        for (line_no, line) in content_lines(&text) {
            labels
                .register(line.trim())
                .with_context(|| format!("{}:{line_no}", path.display()))?;
        }
    }
    Ok(labels)
}

fn load_lexicon_with(
    lexicon: &Path,
    labels: Option<&Path>,
    patterns: Option<&Path>,
) -> anyhow::Result<GenderLexicon> {
    let labels = load_labels(labels)?;
    let mut lexicon = load_lexicon(lexicon, &labels)?;
    if let Some(path) = patterns {
        lexicon = lexicon.register_placeholder_patterns(load_patterns(path)?)?;
    }
    Ok(lexicon)
}

fn load_lexicon_args(args: &LexiconArgs) -> anyhow::Result<GenderLexicon> {
    load_lexicon_with(&args.lexicon, args.labels.as_deref(), args.patterns.as_deref())
}

fn load_segmenter(path: Option<&Path>) -> anyhow::Result<Box<dyn Segmenter>> {
    Ok(match path {
        Some(path) => Box::new(TableSegmenter::load(path)?),
        None => Box::new(IdentitySegmenter),
    })
}

/// One tokenized sentence per line; the sentence id is the 0-based line
/// number. Trailing blank lines are ignored.
fn load_sources(path: &Path) -> anyhow::Result<Vec<Vec<String>>> {
    let text = read_normalized(path)?;
    let lines: Vec<&str> = text.trim_end().lines().collect();
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let toks = tokenize(l);
            if toks.is_empty() {
                bail!("{}:{}: empty source sentence", path.display(), i + 1);
            }
            Ok(toks)
        })
        .collect()
}

fn decode_all<M: ScoringModel>(
    model: &M,
    sources: &[Vec<String>],
    cfg: &BeamConfig,
) -> anyhow::Result<Vec<NBestList>> {
    Ok(sources
        .par_iter()
        .enumerate()
        .map(|(id, src)| beam_search(model, id, src, cfg))
        .collect::<crate::Result<Vec<_>>>()?)
}

fn two_pass_all<M: ScoringModel>(
    model: &M,
    sources: &[Vec<String>],
    pairs: &ReinflectionPairSet,
    segmenter: &dyn Segmenter,
    first: &BeamConfig,
    second: &BeamConfig,
) -> anyhow::Result<Vec<NBestList>> {
    Ok(sources
        .par_iter()
        .enumerate()
        .map(|(id, src)| two_pass_decode(model, id, src, pairs, segmenter, first, second))
        .collect::<crate::Result<Vec<_>>>()?)
}

/// Reranks every list; sentences without entities keep their 1-best.
/// Missing alignment rows count as empty alignments.
pub fn rerank_all(
    lists: &BTreeMap<usize, NBestList>,
    alignments: &AlignmentTable,
    entities: &crate::rerank::EntityTable,
    lexicon: &GenderLexicon,
) -> anyhow::Result<Vec<NBestList>> {
    lists
        .iter()
        .map(|(id, list)| {
            let aligns: Vec<_> = (0..list.len())
                .map(|rank| alignments.get(&(*id, rank)).cloned().unwrap_or_default())
                .collect();
            let specs = entities.get(id).map(Vec::as_slice).unwrap_or(&[]);
            let result = rerank(list, &aligns, specs, lexicon)
                .with_context(|| format!("sentence {id}"))?;
            let chosen: Hypothesis = list.hypotheses[result.selected_index].clone();
            Ok(NBestList {
                source_id: *id,
                hypotheses: vec![chosen],
            })
        })
        .collect()
}

/// Files behind `eval` / `sweep`, resolved against `--data` when given.
struct EvalInputs {
    items: Vec<crate::eval::TestItem>,
    pairs: ReinflectionPairSet,
    lexicon: GenderLexicon,
    pronouns: PronounTable,
    resolver: NearestNounResolver,
    segmenter: Box<dyn Segmenter>,
}

impl EvalArgs {
    fn resolve(&self, given: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
        given
            .clone()
            .or_else(|| self.data.as_ref().map(|d| d.join(default_name)))
    }

    fn require(&self, given: &Option<PathBuf>, default_name: &str, flag: &str) -> anyhow::Result<PathBuf> {
        self.resolve(given, default_name)
            .ok_or_else(|| anyhow!("missing {flag} (or --data DIR)"))
    }

    fn model_args(&self) -> ModelArgs {
        let mut args = self.model.clone();
        if args.model.is_none() && args.lexical.is_none() {
            if let Some(dir) = &self.data {
                args.lexical = Some(dir.join(synthetic::LEXICAL_FILE));
                args.corpus = Some(dir.join(synthetic::CORPUS_FILE));
            }
        }
        args
    }

    fn configs(&self) -> anyhow::Result<(BeamConfig, BeamConfig)> {
        Ok((
            self.beam.config(self.beam.beam)?,
            self.beam.config(self.beam2.unwrap_or(self.beam.beam))?,
        ))
    }
}

impl EvalInputs {
    fn load(args: &EvalArgs) -> anyhow::Result<Self> {
        let testset = args.require(&args.testset, synthetic::TESTSET_FILE, "--testset")?;
        let pairs = args.require(&args.pairs, synthetic::PAIRS_FILE, "--pairs")?;
        let lexicon = args.require(&args.lexicon, synthetic::LEXICON_FILE, "--lexicon")?;
        let pronouns = match args.resolve(&args.pronouns, synthetic::PRONOUNS_FILE) {
            Some(p) => PronounTable::load(&p)?,
            None => PronounTable::english_binary(),
        };
        let resolver = match args.resolve(&args.nouns, synthetic::NOUNS_FILE) {
            Some(p) => NearestNounResolver::load(&p)?,
            None => NearestNounResolver::default(),
        };
        Ok(EvalInputs {
            items: load_testset(&testset)?,
            pairs: load_pairs(&pairs)?,
            lexicon: load_lexicon_with(&lexicon, args.labels.as_deref(), args.patterns.as_deref())?,
            pronouns,
            resolver,
            segmenter: load_segmenter(args.segments.as_deref())?,
        })
    }

    fn pipeline<'a, M: ScoringModel>(
        &'a self,
        model: &'a M,
        first: BeamConfig,
        second: BeamConfig,
    ) -> Pipeline<'a, M> {
        Pipeline {
            model,
            segmenter: self.segmenter.as_ref(),
            pairs: &self.pairs,
            lexicon: &self.lexicon,
            aligner: &DiagonalAligner,
            pronouns: &self.pronouns,
            resolver: &self.resolver,
            first,
            second,
        }
    }
}
