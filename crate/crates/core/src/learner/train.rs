use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ccg::{ChartConfig, RuleSet};
use crate::inverse::InverseOptions;
use crate::lambda::Signature;
use crate::lexicon::{generalize_all, Lexicon, LexiconError, DEFAULT_WEIGHT};

use super::generation::{lexical_generation_pass, GenerationConfig};
use super::gradient::{update_theta, Schedule};
use super::model::Model;
use super::TrainingExample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Lexical generation passes per epoch; a pass that adds nothing ends the loop.
    pub passes: usize,
    pub alpha0: f64,
    pub c: f64,
    pub seed: u64,
    /// Weight of entries found by inversion or on-demand generalization.
    pub initial_weight: f64,
    pub beam: usize,
    pub cell_limit: Option<usize>,
    pub composition: bool,
    /// Visit examples in a seeded random order during parameter estimation.
    pub shuffle: bool,
    pub max_trees: usize,
    pub entry_budget: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let chart = ChartConfig::default();
        let generation = GenerationConfig::default();
        TrainConfig {
            epochs: 50,
            passes: 3,
            alpha0: 0.1,
            c: 0.001,
            seed: 0,
            initial_weight: DEFAULT_WEIGHT,
            beam: chart.beam,
            cell_limit: chart.cell_limit,
            composition: false,
            shuffle: false,
            max_trees: generation.max_trees,
            entry_budget: generation.entry_budget,
        }
    }
}

impl TrainConfig {
    pub fn chart_config(&self) -> ChartConfig {
        ChartConfig {
            rules: if self.composition {
                RuleSet::with_composition()
            } else {
                RuleSet::default()
            },
            beam: self.beam,
            cell_limit: self.cell_limit,
        }
    }

    pub fn generation_config(&self) -> GenerationConfig {
        GenerationConfig {
            max_trees: self.max_trees,
            entry_budget: self.entry_budget,
            initial_weight: self.initial_weight,
            inverse: InverseOptions::default(),
            ..GenerationConfig::default()
        }
    }

    pub fn schedule(&self) -> Schedule {
        Schedule {
            alpha0: self.alpha0,
            c: self.c,
        }
    }
}

/// Statistics for one epoch, written as one JSON object per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub passes: usize,
    pub entries_added: usize,
    pub generalized: usize,
    pub trivial: usize,
    pub lexicon_size: usize,
    pub examples: usize,
    /// Examples whose chart contained the gold semantics.
    pub parsed: usize,
    pub skipped: usize,
    pub log_likelihood: f64,
}

pub struct TrainOutcome {
    /// Final model; its lexicon is the generalized learned lexicon.
    pub model: Model,
    pub metrics: Vec<EpochMetrics>,
}

pub fn train(examples: &[TrainingExample], l0: &Lexicon, cfg: &TrainConfig) -> TrainOutcome {
    train_with(examples, l0, cfg, &mut |_| {})
}

/// Alternates lexical generation and parameter estimation for
/// `cfg.epochs` epochs, reporting each epoch to `on_epoch`.
pub fn train_with(
    examples: &[TrainingExample],
    l0: &Lexicon,
    cfg: &TrainConfig,
    on_epoch: &mut dyn FnMut(&EpochMetrics),
) -> TrainOutcome {
    let mut model = Model::new(l0.clone(), cfg.chart_config());
    let generation = cfg.generation_config();
    let schedule = cfg.schedule();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<TrainingExample> = examples.to_vec();
    let mut step = 0usize;
    let mut metrics = Vec::with_capacity(cfg.epochs);
    for epoch in 1..=cfg.epochs {
        let mut gen_total = Default::default();
        let mut passes = 0;
        for _ in 0..cfg.passes.max(1) {
            passes += 1;
            let stats = lexical_generation_pass(&mut model, examples, &generation);
            let done = stats.total() == 0;
            accumulate(&mut gen_total, stats);
            if done {
                break;
            }
        }
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        let upd = update_theta(&mut model, &order, &schedule, &mut step);
        let m = EpochMetrics {
            epoch,
            passes,
            entries_added: gen_total.added,
            generalized: gen_total.generalized,
            trivial: gen_total.trivial,
            lexicon_size: model.lexicon.len(),
            examples: examples.len(),
            parsed: upd.updated,
            skipped: upd.skipped,
            log_likelihood: upd.log_likelihood,
        };
        log::info!(
            "epoch {epoch}: +{} entries, {} / {} gold parses, loglik {:.4}",
            m.entries_added + m.generalized + m.trivial,
            m.parsed,
            m.examples,
            m.log_likelihood
        );
        on_epoch(&m);
        metrics.push(m);
    }
    model.lexicon = generalize_all(&model.lexicon);
    TrainOutcome { model, metrics }
}

fn accumulate(
    total: &mut super::generation::GenerationStats,
    s: super::generation::GenerationStats,
) {
    total.added += s.added;
    total.generalized += s.generalized;
    total.trivial += s.trivial;
    total.skipped += s.skipped;
}

const CONFIG_PREFIX: &str = "# config: ";

/// A lexicon file whose first line records the training configuration.
pub fn checkpoint_text(lexicon: &Lexicon, cfg: &TrainConfig) -> String {
    let json = serde_json::to_string(cfg).expect("config serializes");
    format!("{CONFIG_PREFIX}{json}\n{}", lexicon.to_text())
}

/// Reads a checkpoint or a plain lexicon file.
pub fn parse_checkpoint(
    text: &str,
    sig: &Signature,
) -> Result<(Lexicon, Option<TrainConfig>), LexiconError> {
    let cfg = match text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix(CONFIG_PREFIX))
    {
        Some(json) => Some(serde_json::from_str(json).map_err(|e| LexiconError::Parse {
            line: 1,
            message: format!("bad config header: {e}"),
        })?),
        None => None,
    };
    Ok((Lexicon::parse(text, sig)?, cfg))
}
