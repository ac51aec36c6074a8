use std::collections::HashSet;

use crate::ccg::{compose, Category, Chart, ChartConfig, DerivationNode, LeafItem, RuleSet};
use crate::inverse::{inverse_l_with, inverse_r_with, InverseOptions};
use crate::lambda::{alpha_eq, Term};
use crate::lexicon::{assign_trivial, generalize_d, EntryId, Lexicon, LexiconEntry, Origin};

use super::model::Model;
use super::TrainingExample;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerationConfig {
    /// Syntactic trees tried per sentence that has no external derivation.
    pub max_trees: usize,
    /// Semantics tracked per subtree when computing known meanings.
    pub max_known: usize,
    /// Inverse candidates followed per operator call.
    pub max_candidates: usize,
    /// New entries allowed per sentence and pass.
    pub entry_budget: usize,
    pub initial_weight: f64,
    pub inverse: InverseOptions,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            max_trees: 8,
            max_known: 8,
            max_candidates: 8,
            entry_budget: 32,
            initial_weight: crate::lexicon::DEFAULT_WEIGHT,
            inverse: InverseOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenerationStats {
    pub added: usize,
    pub generalized: usize,
    pub trivial: usize,
    /// Sentences with no usable syntactic tree.
    pub skipped: usize,
}

impl GenerationStats {
    fn absorb(&mut self, o: GenerationStats) {
        self.added += o.added;
        self.generalized += o.generalized;
        self.trivial += o.trivial;
        self.skipped += o.skipped;
    }

    pub fn total(&self) -> usize {
        self.added + self.generalized + self.trivial
    }
}

/// Up to `k` derivations of `tokens` with root category `root`, built from
/// the categories the lexicon lists for each word; semantics are ignored.
pub fn syntactic_trees(
    lex: &Lexicon,
    tokens: &[String],
    rules: &RuleSet,
    root: &Category,
    k: usize,
) -> Vec<DerivationNode> {
    let mut leaves = Vec::with_capacity(tokens.len());
    for t in tokens {
        let cats = lex.categories_for(t);
        if cats.is_empty() {
            return Vec::new();
        }
        leaves.push(
            cats.into_iter()
                .map(|category| LeafItem {
                    word: t.clone(),
                    category,
                    semantics: None,
                    entry: None,
                    weight: 0.0,
                })
                .collect::<Vec<_>>(),
        );
    }
    let cfg = ChartConfig {
        rules: *rules,
        beam: k.max(1),
        cell_limit: None,
    };
    Chart::build(&leaves, &cfg)
        .roots()
        .into_iter()
        .filter(|i| i.node.category == *root)
        .take(k)
        .map(|i| (*i.node).clone())
        .collect()
}

struct Propagator<'a> {
    lex: &'a mut Lexicon,
    cfg: &'a GenerationConfig,
    added: Vec<EntryId>,
    visited: HashSet<((usize, usize), String)>,
    blocked: bool,
}

impl Propagator<'_> {
    fn known(&self, node: &DerivationNode) -> Vec<Term> {
        if node.is_leaf() {
            let word = node.word.as_deref().unwrap_or("");
            return self
                .lex
                .semantics_for(word, &node.category)
                .into_iter()
                .take(self.cfg.max_known)
                .cloned()
                .collect();
        }
        let left = self.known(&node.children[0]);
        if left.is_empty() {
            return Vec::new();
        }
        let right = self.known(&node.children[1]);
        let mut out: Vec<Term> = Vec::new();
        'outer: for l in &left {
            for r in &right {
                if let Some(t) = compose(node.rule, l, r) {
                    if !out.iter().any(|o| alpha_eq(o, &t)) {
                        out.push(t);
                        if out.len() >= self.cfg.max_known {
                            break 'outer;
                        }
                    }
                }
            }
        }
        out
    }

    fn propagate(&mut self, node: &DerivationNode, target: &Term) {
        if self.added.len() >= self.cfg.entry_budget || !target.is_closed() {
            return;
        }
        if !self.visited.insert((node.span, target.alpha_key())) {
            return;
        }
        if node.is_leaf() {
            let word = node.word.as_deref().unwrap_or("");
            let entry = LexiconEntry::new(
                word,
                node.category.clone(),
                Some(target.clone()),
                self.cfg.initial_weight,
                Origin::Inverse,
            );
            let (id, fresh) = self.lex.insert(entry);
            if fresh {
                self.added.push(id);
            }
            return;
        }
        let Some(fi) = node
            .rule
            .functor_index()
            .filter(|_| node.rule.is_application())
        else {
            self.blocked = true;
            return;
        };
        let functor = node.children[fi].clone();
        let argument = node.children[1 - fi].clone();
        let fk = self.known(&functor);
        let ak = self.known(&argument);
        if fk.is_empty() && ak.is_empty() {
            self.blocked = true;
            return;
        }
        let consistent = fk.iter().any(|f| {
            ak.iter().any(|a| {
                let (l, r) = if fi == 0 { (f, a) } else { (a, f) };
                compose(node.rule, l, r).is_some_and(|t| alpha_eq(&t, target))
            })
        });
        if consistent {
            return;
        }
        let mut pushed = false;
        for f in &fk {
            let Ok(r) = inverse_r_with(target, f, &self.cfg.inverse) else {
                continue;
            };
            for c in r.candidates.into_iter().take(self.cfg.max_candidates) {
                pushed = true;
                self.propagate(&argument, &c.term);
            }
        }
        for a in &ak {
            let Ok(r) = inverse_l_with(target, a, &self.cfg.inverse) else {
                continue;
            };
            for c in r.candidates.into_iter().take(self.cfg.max_candidates) {
                pushed = true;
                self.propagate(&functor, &c.term);
            }
        }
        if !pushed && (fk.is_empty() || ak.is_empty()) {
            self.blocked = true;
        }
    }
}

fn propagate_tree(
    lex: &mut Lexicon,
    tree: &DerivationNode,
    gold: &Term,
    cfg: &GenerationConfig,
) -> (Vec<EntryId>, bool) {
    let mut p = Propagator {
        lex,
        cfg,
        added: Vec::new(),
        visited: HashSet::new(),
        blocked: false,
    };
    p.propagate(tree, gold);
    (p.added, p.blocked)
}

/// Learns new entries from one example: generalizes unknown leaves, then
/// pushes the gold semantics down each candidate tree with the inverse
/// operators. If that gets stuck, words absent from the gold term receive
/// `λx.x` and the tree is tried again.
pub fn generate_for_example(
    lex: &mut Lexicon,
    ex: &TrainingExample,
    rules: &RuleSet,
    root: &Category,
    cfg: &GenerationConfig,
) -> GenerationStats {
    let mut stats = GenerationStats::default();
    let trees = match &ex.derivation {
        Some(d) => vec![d.syntax_only()],
        None => syntactic_trees(lex, &ex.tokens, rules, root, cfg.max_trees),
    };
    if trees.is_empty() {
        log::debug!("no syntactic tree for `{}`", ex.tokens.join(" "));
        stats.skipped = 1;
        return stats;
    }
    for tree in &trees {
        let leaves: Vec<(String, Category)> = tree
            .leaves()
            .iter()
            .map(|l| (l.word.clone().unwrap_or_default(), l.category.clone()))
            .collect();
        for (word, category) in &leaves {
            if !lex.has_semantics(word, category) {
                for id in generalize_d(lex, word, category) {
                    lex.set_weight(id, cfg.initial_weight);
                    stats.generalized += 1;
                }
            }
        }
        let (added, blocked) = propagate_tree(lex, tree, &ex.gold, cfg);
        stats.added += added.len();
        if blocked {
            let trivial = assign_trivial(&leaves, &ex.gold, lex);
            if !trivial.is_empty() {
                stats.trivial += trivial.len();
                let (again, _) = propagate_tree(lex, tree, &ex.gold, cfg);
                stats.added += again.len();
            }
        }
    }
    stats
}

/// Step 1 of training: one pass of lexical generation over all examples.
pub fn lexical_generation_pass(
    model: &mut Model,
    examples: &[TrainingExample],
    cfg: &GenerationConfig,
) -> GenerationStats {
    let mut stats = GenerationStats::default();
    let rules = model.chart.rules;
    let root = model.root.clone();
    for ex in examples {
        stats.absorb(generate_for_example(
            &mut model.lexicon,
            ex,
            &rules,
            &root,
            cfg,
        ));
    }
    stats
}
