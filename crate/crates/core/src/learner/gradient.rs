use std::collections::BTreeMap;

use crate::lambda::alpha_eq;
use crate::lexicon::EntryId;

use super::model::{feature_vector, log_sum_exp, Model};
use super::TrainingExample;

/// Learning-rate schedule `η_k = α₀ / (1 + c·k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub alpha0: f64,
    pub c: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            alpha0: 0.1,
            c: 0.001,
        }
    }
}

impl Schedule {
    pub fn rate(&self, k: usize) -> f64 {
        self.alpha0 / (1.0 + self.c * k as f64)
    }
}

/// Conditional log-likelihood of the gold semantics of one example and its
/// gradient, sparse over entry ids. `None` when the sentence has no parse or
/// no parse yields the gold semantics.
pub fn example_gradient(
    model: &Model,
    ex: &TrainingExample,
) -> Option<(f64, BTreeMap<EntryId, f64>)> {
    let parses = model.parses(&ex.tokens).ok()?;
    let gold: Vec<bool> = parses
        .iter()
        .map(|p| alpha_eq(&p.semantics, &ex.gold))
        .collect();
    if !gold.iter().any(|&g| g) {
        return None;
    }
    let z_all = log_sum_exp(parses.iter().map(|p| p.score));
    let z_gold = log_sum_exp(
        parses
            .iter()
            .zip(&gold)
            .filter(|(_, &g)| g)
            .map(|(p, _)| p.score),
    );
    let mut grad: BTreeMap<EntryId, f64> = BTreeMap::new();
    for (p, &is_gold) in parses.iter().zip(&gold) {
        let p_all = (p.score - z_all).exp();
        let p_gold = if is_gold {
            (p.score - z_gold).exp()
        } else {
            0.0
        };
        for (id, n) in feature_vector(&p.node) {
            *grad.entry(id).or_insert(0.0) += f64::from(n) * (p_gold - p_all);
        }
    }
    Some((z_gold - z_all, grad))
}

/// Summed log-likelihood and dense gradient over `examples`, skipping those
/// without a gold parse.
pub fn gradient(model: &Model, examples: &[TrainingExample]) -> (f64, Vec<f64>) {
    let mut total = 0.0;
    let mut dense = vec![0.0; model.lexicon.len()];
    for ex in examples {
        if let Some((ll, g)) = example_gradient(model, ex) {
            total += ll;
            for (id, v) in g {
                dense[id.0] += v;
            }
        }
    }
    (total, dense)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UpdateStats {
    pub updated: usize,
    pub skipped: usize,
    /// Log-likelihood of the gold parses, measured before each update.
    pub log_likelihood: f64,
}

/// One stochastic gradient ascent sweep over `examples` in order. `step`
/// is the global update counter and advances with every applied update.
pub fn update_theta(
    model: &mut Model,
    examples: &[TrainingExample],
    schedule: &Schedule,
    step: &mut usize,
) -> UpdateStats {
    let mut stats = UpdateStats::default();
    for ex in examples {
        match example_gradient(model, ex) {
            Some((ll, grad)) => {
                let eta = schedule.rate(*step);
                for (id, g) in grad {
                    let w = model.lexicon.get(id).weight;
                    model.lexicon.set_weight(id, w + eta * g);
                }
                *step += 1;
                stats.updated += 1;
                stats.log_likelihood += ll;
            }
            None => {
                log::debug!("no gold parse for `{}`", ex.tokens.join(" "));
                stats.skipped += 1;
            }
        }
    }
    stats
}
