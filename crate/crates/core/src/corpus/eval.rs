use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lambda::Term;
use crate::learner::{train, Model, TrainConfig, TrainingExample};
use crate::lexicon::Lexicon;

use super::CorpusExample;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchOptions {
    /// Heads whose arguments compare as multisets.
    pub commutative: BTreeSet<String>,
    /// Treat `definer` as `definec`.
    pub unify_define: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            commutative: ["and", "or"].iter().map(|s| s.to_string()).collect(),
            unify_define: false,
        }
    }
}

impl MatchOptions {
    /// One head name per line; blank lines and `#` comments are ignored.
    pub fn parse_commutative(text: &str) -> BTreeSet<String> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    }

    /// A string equal for two terms exactly when `match_sr` holds.
    pub fn canonical(&self, t: &Term) -> String {
        let mut bound = Vec::new();
        self.canon(t, &mut bound)
    }

    fn canon<'a>(&self, t: &'a Term, bound: &mut Vec<&'a str>) -> String {
        match t {
            Term::Var(x) => match bound.iter().rev().position(|b| *b == x) {
                Some(i) => format!("#{i}"),
                None => format!("${x}"),
            },
            Term::Const(c) => format!("'{c}"),
            Term::Lam(x, b) => {
                bound.push(x);
                let s = format!("\\.{}", self.canon(b, bound));
                bound.pop();
                s
            }
            Term::App(f, a) => format!("@({},{})", self.canon(f, bound), self.canon(a, bound)),
            Term::Atom(h, args) => {
                let head = if self.unify_define && h == "definer" {
                    "definec"
                } else {
                    h.as_str()
                };
                let mut parts: Vec<String> = args.iter().map(|a| self.canon(a, bound)).collect();
                if self.commutative.contains(head) {
                    parts.sort();
                }
                format!("{head}({})", parts.join(","))
            }
        }
    }
}

/// Exact match up to α-equivalence, the argument order of commutative heads
/// and, optionally, `definec`/`definer`.
pub fn match_sr(predicted: &Term, gold: &Term, opts: &MatchOptions) -> bool {
    opts.canonical(predicted) == opts.canonical(gold)
}

/// Harmonic mean; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub returned: usize,
    pub correct: usize,
    pub total: usize,
}

impl EvalReport {
    pub fn from_counts(returned: usize, correct: usize, total: usize) -> Self {
        let pct = |n: usize, d: usize| {
            if d == 0 {
                0.0
            } else {
                100.0 * n as f64 / d as f64
            }
        };
        let precision = pct(correct, returned);
        let recall = pct(correct, total);
        EvalReport {
            precision,
            recall,
            f_measure: f_measure(precision, recall),
            returned,
            correct,
            total,
        }
    }

    /// Averages precision and recall over `reports`, sums the counts and
    /// recomputes F from the averages.
    pub fn macro_average(reports: &[EvalReport]) -> Self {
        if reports.is_empty() {
            return EvalReport::from_counts(0, 0, 0);
        }
        let n = reports.len() as f64;
        let precision = reports.iter().map(|r| r.precision).sum::<f64>() / n;
        let recall = reports.iter().map(|r| r.recall).sum::<f64>() / n;
        EvalReport {
            precision,
            recall,
            f_measure: f_measure(precision, recall),
            returned: reports.iter().map(|r| r.returned).sum(),
            correct: reports.iter().map(|r| r.correct).sum(),
            total: reports.iter().map(|r| r.total).sum(),
        }
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P {:.2}  R {:.2}  F {:.2}  ({}/{}/{})",
            self.precision, self.recall, self.f_measure, self.correct, self.returned, self.total
        )
    }
}

/// Parses every test sentence with `model` and scores its best semantics.
pub fn evaluate(model: &Model, test: &[CorpusExample], opts: &MatchOptions) -> EvalReport {
    let mut returned = 0;
    let mut correct = 0;
    for ex in test {
        let tokens = if ex.derivation.is_some() {
            ex.tokens.clone()
        } else {
            model.tokens(&ex.sentence)
        };
        match model.best_parse(&tokens) {
            Ok((sr, _)) => {
                returned += 1;
                if match_sr(&sr, &ex.gold, opts) {
                    correct += 1;
                }
            }
            Err(e) => log::debug!("example {}: {e}", ex.id),
        }
    }
    EvalReport::from_counts(returned, correct, test.len())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// Disjoint contiguous folds after one shuffle.
    #[default]
    KFold,
    /// Independent shuffles, each split into equal train and test halves.
    HalfSplit,
}

impl FromStr for SplitMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kfold" | "k-fold" => Ok(SplitMode::KFold),
            "half" | "half-split" => Ok(SplitMode::HalfSplit),
            other => Err(format!(
                "unknown split mode `{other}` (expected kfold or half)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CvConfig {
    /// Folds, or repetitions in half-split mode.
    pub folds: usize,
    pub mode: SplitMode,
    pub seed: u64,
    /// Worker threads; 0 means one per available core.
    pub jobs: usize,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            mode: SplitMode::KFold,
            seed: 0,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CvError {
    #[error("corpus of {size} examples is smaller than {folds} folds")]
    TooSmall { size: usize, folds: usize },
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CvReport {
    pub folds: Vec<EvalReport>,
    pub aggregate: EvalReport,
}

/// Training and test indices of one fold.
pub type Split = (Vec<usize>, Vec<usize>);

/// `(train, test)` index sets for each fold.
pub fn split_indices(n: usize, cfg: &CvConfig) -> Result<Vec<Split>, CvError> {
    match cfg.mode {
        SplitMode::KFold => {
            if cfg.folds < 2 {
                return Err(CvError::TooFewFolds(cfg.folds));
            }
            if n < cfg.folds {
                return Err(CvError::TooSmall {
                    size: n,
                    folds: cfg.folds,
                });
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
            Ok((0..cfg.folds)
                .map(|k| {
                    let (lo, hi) = (k * n / cfg.folds, (k + 1) * n / cfg.folds);
                    let test = order[lo..hi].to_vec();
                    let train = order[..lo].iter().chain(&order[hi..]).copied().collect();
                    (train, test)
                })
                .collect())
        }
        SplitMode::HalfSplit => {
            if n < 2 {
                return Err(CvError::TooSmall { size: n, folds: 2 });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok((0..cfg.folds.max(1))
                .map(|_| {
                    let mut order: Vec<usize> = (0..n).collect();
                    order.shuffle(&mut rng);
                    let test = order.split_off(n / 2);
                    (order, test)
                })
                .collect())
        }
    }
}

fn run_fold(
    corpus: &[CorpusExample],
    (train_idx, test_idx): &(Vec<usize>, Vec<usize>),
    cfg: &TrainConfig,
    l0: &Lexicon,
    opts: &MatchOptions,
) -> EvalReport {
    let examples: Vec<TrainingExample> = train_idx
        .iter()
        .map(|&i| corpus[i].to_training(l0))
        .collect();
    let test: Vec<CorpusExample> = test_idx.iter().map(|&i| corpus[i].clone()).collect();
    let outcome = train(&examples, l0, cfg);
    evaluate(&outcome.model, &test, opts)
}

/// Trains and evaluates one model per fold, running folds on up to
/// `cv.jobs` threads. Reports come back in fold order.
pub fn cross_validate(
    corpus: &[CorpusExample],
    cv: &CvConfig,
    cfg: &TrainConfig,
    l0: &Lexicon,
    opts: &MatchOptions,
) -> Result<CvReport, CvError> {
    let splits = split_indices(corpus.len(), cv)?;
    let jobs = match cv.jobs {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        j => j,
    }
    .min(splits.len())
    .max(1);
    let mut folds: Vec<Option<EvalReport>> = vec![None; splits.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let splits = &splits;
                s.spawn(move || {
                    (w..splits.len())
                        .step_by(jobs)
                        .map(|k| (k, run_fold(corpus, &splits[k], cfg, l0, opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("fold worker panicked") {
                folds[k] = Some(r);
            }
        }
    });
    let folds: Vec<EvalReport> = folds
        .into_iter()
        .map(|r| r.expect("every fold ran"))
        .collect();
    for (k, r) in folds.iter().enumerate() {
        log::info!("fold {}: {r}", k + 1);
    }
    Ok(CvReport {
        aggregate: EvalReport::macro_average(&folds),
        folds,
    })
}
