//! Typed λ-calculus terms: syntax, α-equivalence, β-normalization and the
//! subterm replacement operator.

mod reduce;
mod replace;
mod syntax;
mod term;
mod types;

use thiserror::Error;

pub use reduce::{
    apply, apply_typed, normalize, normalize_with, stuck_application, substitute, Strategy,
    DEFAULT_STEP_LIMIT,
};
pub use replace::{
    matches_pattern, name_sites, rename_sites, replace, replace_at, subterms, NameSite, Subterm,
};
pub(crate) use syntax::is_number;
pub use syntax::parse_term;
pub use term::{alpha_eq, fresh_name, Path, Term};
pub use types::{infer_type, Signature, TypeError, TypeExpr};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LambdaError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unbound name `{name}` at {pos}")]
    Unbound { name: String, pos: usize },
    #[error("reduction exceeded {limit} steps")]
    StepLimit { limit: usize },
    #[error("`{term}` applies a constant")]
    NotApplicable { term: String },
    #[error(transparent)]
    Type(#[from] TypeError),
}
