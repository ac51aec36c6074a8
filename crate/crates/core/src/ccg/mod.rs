//! CCG categories, combinatory rules, derivation trees and a packed chart
//! parser that composes semantics as it goes.

mod category;
mod chart;
mod derivation;

use thiserror::Error;

pub use category::{parse_category, Category, CategoryMap, Dir, ATOMIC_NAMES};
pub use chart::{cky_parse, Chart, ChartConfig, ChartItem, LeafItem};
pub use derivation::{
    combine, combine_categories, compose, load_derivation, load_derivation_for,
    load_derivation_with, DerivationNode, Rule, RuleSet,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CcgError {
    #[error("category syntax error at {pos}: {message}")]
    Category { pos: usize, message: String },
    #[error("malformed derivation at {pos}: {message}")]
    Malformed { pos: usize, message: String },
    #[error("rule `{rule}` does not yield {expected} here ({found})")]
    CategoryMismatch {
        rule: String,
        expected: String,
        found: String,
    },
    #[error("derivation leaves `{found}` do not match tokens `{expected}`")]
    SpanMismatch { expected: String, found: String },
    #[error("no lexicon entry for `{0}`")]
    UnknownWord(String),
    #[error("no parse for `{0}`")]
    NoParse(String),
}
