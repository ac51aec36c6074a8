use std::sync::Arc;

use indexmap::IndexMap;

use super::category::Category;
use super::derivation::{combine, DerivationNode, RuleSet};
use super::CcgError;
use crate::lambda::Term;
use crate::lexicon::{EntryId, Lexicon};

/// One lexical option for a token.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafItem {
    pub word: String,
    pub category: Category,
    pub semantics: Option<Term>,
    pub entry: Option<EntryId>,
    pub weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartConfig {
    pub rules: RuleSet,
    /// Derivations kept per (category, semantics) key in a cell.
    pub beam: usize,
    /// Maximum number of distinct keys per cell; `None` keeps all.
    pub cell_limit: Option<usize>,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig {
            rules: RuleSet::default(),
            beam: 16,
            cell_limit: Some(128),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChartItem {
    pub node: Arc<DerivationNode>,
    /// Sum of the leaf weights.
    pub score: f64,
}

type Key = (Category, Option<String>);

#[derive(Default, Debug)]
struct Cell {
    items: IndexMap<Key, Vec<ChartItem>>,
}

impl Cell {
    fn insert(&mut self, item: ChartItem, beam: usize) {
        let key = (
            item.node.category.clone(),
            item.node.semantics.as_ref().map(Term::alpha_key),
        );
        let list = self.items.entry(key).or_default();
        list.push(item);
        if list.len() > beam {
            list.sort_by(|a, b| b.score.total_cmp(&a.score));
            list.truncate(beam);
        }
    }

    fn prune(&mut self, limit: Option<usize>) {
        let Some(limit) = limit else { return };
        if self.items.len() <= limit {
            return;
        }
        let best = |v: &Vec<ChartItem>| v.iter().map(|i| i.score).fold(f64::NEG_INFINITY, f64::max);
        self.items.sort_by(|_, a, _, b| best(b).total_cmp(&best(a)));
        self.items.truncate(limit);
    }
}

/// A packed CKY chart. Cells are filled in order of increasing span length.
#[derive(Debug)]
pub struct Chart {
    n: usize,
    cells: Vec<Cell>,
}

impl Chart {
    pub fn build(leaves: &[Vec<LeafItem>], cfg: &ChartConfig) -> Chart {
        let n = leaves.len();
        let mut chart = Chart {
            n,
            cells: (0..(n + 1) * (n + 1)).map(|_| Cell::default()).collect(),
        };
        let beam = cfg.beam.max(1);
        for (i, options) in leaves.iter().enumerate() {
            let cell = &mut chart.cells[i * (n + 1) + i + 1];
            for leaf in options {
                let node = DerivationNode::leaf(
                    i,
                    &leaf.word,
                    leaf.category.clone(),
                    leaf.semantics.clone(),
                    leaf.entry,
                );
                cell.insert(
                    ChartItem {
                        node: Arc::new(node),
                        score: leaf.weight,
                    },
                    beam,
                );
            }
            cell.prune(cfg.cell_limit);
        }
        for len in 2..=n {
            for start in 0..=n - len {
                let end = start + len;
                let mut cell = Cell::default();
                for mid in start + 1..end {
                    let left = &chart.cells[start * (n + 1) + mid];
                    let right = &chart.cells[mid * (n + 1) + end];
                    for l in left.items.values().flatten() {
                        for r in right.items.values().flatten() {
                            for parent in combine(&l.node, &r.node, &cfg.rules) {
                                cell.insert(
                                    ChartItem {
                                        node: Arc::new(parent),
                                        score: l.score + r.score,
                                    },
                                    beam,
                                );
                            }
                        }
                    }
                }
                cell.prune(cfg.cell_limit);
                chart.cells[start * (n + 1) + end] = cell;
            }
        }
        chart
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Items over the half-open span `start..end`.
    pub fn cell(&self, start: usize, end: usize) -> impl Iterator<Item = &ChartItem> {
        self.cells[start * (self.n + 1) + end]
            .items
            .values()
            .flatten()
    }

    /// Full-span items.
    pub fn roots(&self) -> Vec<&ChartItem> {
        if self.n == 0 {
            return Vec::new();
        }
        self.cell(0, self.n).collect()
    }

    /// Total number of items in all cells.
    pub fn item_count(&self) -> usize {
        self.cells
            .iter()
            .map(|c| c.items.values().map(Vec::len).sum::<usize>())
            .sum()
    }
}

/// Parses `tokens` with every lexicon entry of each word.
pub fn cky_parse(
    tokens: &[String],
    lexicon: &Lexicon,
    rules: &RuleSet,
    beam: usize,
) -> Result<Chart, CcgError> {
    let mut leaves = Vec::with_capacity(tokens.len());
    for t in tokens {
        let ids = lexicon.ids_for_word(t);
        if ids.is_empty() {
            return Err(CcgError::UnknownWord(t.clone()));
        }
        leaves.push(
            ids.iter()
                .map(|&id| {
                    let e = lexicon.get(id);
                    LeafItem {
                        word: t.clone(),
                        category: e.category.clone(),
                        semantics: e.semantics.clone(),
                        entry: Some(id),
                        weight: e.weight,
                    }
                })
                .collect(),
        );
    }
    let cfg = ChartConfig {
        rules: *rules,
        beam,
        cell_limit: None,
    };
    let chart = Chart::build(&leaves, &cfg);
    if chart.roots().is_empty() {
        return Err(CcgError::NoParse(tokens.join(" ")));
    }
    Ok(chart)
}
