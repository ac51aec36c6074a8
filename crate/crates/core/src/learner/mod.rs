//! The log-linear parsing model and the two-step training loop: lexical
//! generation with the inverse operators, then stochastic gradient ascent
//! on the conditional log-likelihood of the gold semantics.

mod generation;
mod gradient;
mod model;
mod train;

use thiserror::Error;

use crate::ccg::DerivationNode;
use crate::lambda::Term;

pub use generation::{
    generate_for_example, lexical_generation_pass, syntactic_trees, GenerationConfig,
    GenerationStats,
};
pub use gradient::{example_gradient, gradient, update_theta, Schedule, UpdateStats};
pub use model::{feature_vector, Model, Parse};
pub use train::{
    checkpoint_text, parse_checkpoint, train, train_with, EpochMetrics, TrainConfig, TrainOutcome,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LearnerError {
    #[error("no semantics known for `{0}`")]
    UnknownWord(String),
    #[error("no parse for `{0}`")]
    NoParse(String),
}

/// A sentence with its gold semantics and, optionally, a syntactic tree
/// supplied by an external parser.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingExample {
    pub tokens: Vec<String>,
    pub gold: Term,
    pub derivation: Option<DerivationNode>,
}

impl TrainingExample {
    pub fn new(tokens: Vec<String>, gold: Term) -> Self {
        TrainingExample {
            tokens,
            gold,
            derivation: None,
        }
    }

    /// Tokens are taken from the leaves of the derivation.
    pub fn with_derivation(derivation: DerivationNode, gold: Term) -> Self {
        let tokens = derivation
            .words()
            .iter()
            .map(|w| crate::lexicon::normalize_word(w))
            .collect();
        TrainingExample {
            tokens,
            gold,
            derivation: Some(derivation),
        }
    }
}
