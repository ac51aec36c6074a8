//! Learning semantic parsers from sentence/meaning pairs.
//!
//! Word meanings are λ-terms composed along CCG derivations. Unknown meanings
//! are recovered with the inverse application operators in [`inverse`],
//! extended to unseen words by [`lexicon`] generalization, and ranked by the
//! log-linear model in [`learner`].

pub mod ccg;
pub mod corpus;
pub mod inverse;
pub mod lambda;
pub mod learner;
pub mod lexicon;
