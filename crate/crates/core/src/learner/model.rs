use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ccg::{parse_category, Category, Chart, ChartConfig, DerivationNode, LeafItem};
use crate::lambda::{alpha_eq, Term};
use crate::lexicon::{EntryId, Lexicon};

use super::LearnerError;

/// The log-linear parsing model: the lexicon's entry weights are the
/// parameter vector, one lexical feature per entry.
#[derive(Clone, Debug)]
pub struct Model {
    pub lexicon: Lexicon,
    pub chart: ChartConfig,
    /// Category a complete parse must have.
    pub root: Category,
}

/// A complete derivation with its score and probability.
#[derive(Clone, Debug)]
pub struct Parse {
    pub node: Arc<DerivationNode>,
    pub semantics: Term,
    pub score: f64,
    pub log_prob: f64,
}

impl Parse {
    pub fn probability(&self) -> f64 {
        self.log_prob.exp()
    }
}

pub(crate) fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// How often each lexicon entry is used by the leaves of `node`.
pub fn feature_vector(node: &DerivationNode) -> BTreeMap<EntryId, u32> {
    let mut out = BTreeMap::new();
    for leaf in node.leaves() {
        if let Some(id) = leaf.entry {
            *out.entry(id).or_insert(0) += 1;
        }
    }
    out
}

impl Model {
    pub fn new(lexicon: Lexicon, chart: ChartConfig) -> Self {
        Model {
            lexicon,
            chart,
            root: parse_category("S").expect("S is a category"),
        }
    }

    /// Score of a derivation: the dot product of its features with the weights.
    pub fn score(&self, node: &DerivationNode) -> f64 {
        feature_vector(node)
            .into_iter()
            .map(|(id, n)| f64::from(n) * self.lexicon.get(id).weight)
            .sum()
    }

    fn leaf_items(&self, tokens: &[String]) -> Result<Vec<Vec<LeafItem>>, LearnerError> {
        tokens
            .iter()
            .map(|t| {
                let items: Vec<LeafItem> = self
                    .lexicon
                    .ids_for_word(t)
                    .iter()
                    .filter_map(|&id| {
                        let e = self.lexicon.get(id);
                        e.semantics.as_ref().map(|s| LeafItem {
                            word: t.clone(),
                            category: e.category.clone(),
                            semantics: Some(s.clone()),
                            entry: Some(id),
                            weight: e.weight,
                        })
                    })
                    .collect();
                if items.is_empty() {
                    Err(LearnerError::UnknownWord(t.clone()))
                } else {
                    Ok(items)
                }
            })
            .collect()
    }

    pub fn chart(&self, tokens: &[String]) -> Result<Chart, LearnerError> {
        Ok(Chart::build(&self.leaf_items(tokens)?, &self.chart))
    }

    /// Every complete parse in the (beam-limited) chart with its probability.
    pub fn parses(&self, tokens: &[String]) -> Result<Vec<Parse>, LearnerError> {
        let chart = self.chart(tokens)?;
        let mut parses: Vec<Parse> = chart
            .roots()
            .into_iter()
            .filter(|i| i.node.category == self.root)
            .filter_map(|i| {
                i.node.semantics.clone().map(|s| Parse {
                    node: i.node.clone(),
                    semantics: s,
                    score: i.score,
                    log_prob: 0.0,
                })
            })
            .collect();
        if parses.is_empty() {
            return Err(LearnerError::NoParse(tokens.join(" ")));
        }
        let z = log_sum_exp(parses.iter().map(|p| p.score));
        for p in &mut parses {
            p.log_prob = p.score - z;
        }
        Ok(parses)
    }

    /// Probability of one derivation of `tokens` among all chart parses.
    pub fn parse_probability(
        &self,
        tokens: &[String],
        node: &DerivationNode,
    ) -> Result<f64, LearnerError> {
        let parses = self.parses(tokens)?;
        let z = log_sum_exp(parses.iter().map(|p| p.score));
        Ok((self.score(node) - z).exp())
    }

    /// The semantics with the highest total probability, summing over its
    /// derivations. Ties go to the lexicographically smallest printed term.
    pub fn best_parse(&self, tokens: &[String]) -> Result<(Term, f64), LearnerError> {
        let parses = self.parses(tokens)?;
        let mut groups: Vec<(Term, String, f64)> = Vec::new();
        for p in &parses {
            match groups
                .iter_mut()
                .find(|(t, _, _)| alpha_eq(t, &p.semantics))
            {
                Some(g) => g.2 += p.probability(),
                None => groups.push((
                    p.semantics.clone(),
                    p.semantics.to_string(),
                    p.probability(),
                )),
            }
        }
        let best = groups
            .into_iter()
            .reduce(|a, b| {
                const EPS: f64 = 1e-12;
                if b.2 > a.2 + EPS || ((b.2 - a.2).abs() <= EPS && b.1 < a.1) {
                    b
                } else {
                    a
                }
            })
            .expect("parses are non-empty");
        Ok((best.0, best.2))
    }

    /// Segments a raw sentence with this model's lexicon.
    pub fn tokens(&self, sentence: &str) -> Vec<String> {
        self.lexicon.segment(sentence)
    }
}
