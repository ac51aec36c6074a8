use crate::ccg::Category;
use crate::lambda::{name_sites, rename_sites, NameSite, Term};

use super::words::{involves, transfer_name};
use super::{EntryId, Lexicon, LexiconEntry, Origin, DEFAULT_WEIGHT, TRIVIAL_WEIGHT};

/// Sites of the constants and predicates of `semantics` that `word` is
/// involved in.
pub fn identify(word: &str, semantics: &Term) -> Vec<NameSite> {
    name_sites(semantics)
        .into_iter()
        .filter(|(_, name)| involves(word, name))
        .map(|(site, _)| site)
        .collect()
}

/// `source`'s semantics with the names `source_word` is involved in moved
/// to `target_word`, or `None` when nothing is involved.
pub fn transfer(source_word: &str, semantics: &Term, target_word: &str) -> Option<Term> {
    let sites = identify(source_word, semantics);
    if sites.is_empty() {
        return None;
    }
    Some(rename_sites(semantics, &sites, &|c| {
        transfer_name(c, source_word, target_word)
    }))
}

#[derive(Clone, Copy)]
enum WeightPolicy {
    Default,
    Inherit,
}

fn generalize_into(
    lex: &mut Lexicon,
    word: &str,
    category: &Category,
    policy: WeightPolicy,
) -> Vec<EntryId> {
    let word = super::normalize_word(word);
    let sources: Vec<EntryId> = lex.ids_for_category(category).to_vec();
    let mut added = Vec::new();
    for id in sources {
        let src = lex.get(id);
        if src.word == word {
            continue;
        }
        let Some(sem) = &src.semantics else { continue };
        let Some(new_sem) = transfer(&src.word, sem, &word) else {
            continue;
        };
        let weight = match policy {
            WeightPolicy::Default => DEFAULT_WEIGHT,
            WeightPolicy::Inherit => src.weight,
        };
        let (new_id, fresh) = lex.insert(LexiconEntry::new(
            &word,
            category.clone(),
            Some(new_sem),
            weight,
            Origin::Generalized,
        ));
        if fresh {
            added.push(new_id);
        } else if matches!(policy, WeightPolicy::Inherit)
            && lex.get(new_id).origin == Origin::Generalized
        {
            let w = lex.get(new_id).weight.max(weight);
            lex.set_weight(new_id, w);
        }
    }
    added
}

/// Adds, for every same-category entry whose word is involved in its
/// semantics, a copy renamed for `word`. New entries get the default weight.
/// Returns the ids of the added entries.
pub fn generalize_d(lex: &mut Lexicon, word: &str, category: &Category) -> Vec<EntryId> {
    generalize_into(lex, word, category, WeightPolicy::Default)
}

/// Generalizes every (word, category) pair of the lexicon that has no
/// semantics yet against every same-category entry. Generalized entries
/// take the weight of the entry they were copied from.
pub fn generalize_all(lex: &Lexicon) -> Lexicon {
    let mut out = lex.clone();
    for (word, category) in lex.word_categories() {
        if !lex.has_semantics(&word, &category) {
            generalize_into(&mut out, &word, &category, WeightPolicy::Inherit);
        }
    }
    out
}

/// Gives `λx.x` at the trivial weight to each (word, category) leaf that
/// is involved in no constant of `gold` and has no semantics for that
/// category yet.
pub fn assign_trivial(
    leaves: &[(String, Category)],
    gold: &Term,
    lex: &mut Lexicon,
) -> Vec<EntryId> {
    let constants = gold.constants();
    let mut added = Vec::new();
    for (word, category) in leaves {
        if constants.iter().any(|c| involves(word, c)) || lex.has_semantics(word, category) {
            continue;
        }
        let (id, fresh) = lex.insert(LexiconEntry::new(
            word,
            category.clone(),
            Some(Term::identity()),
            TRIVIAL_WEIGHT,
            Origin::Trivial,
        ));
        if fresh {
            added.push(id);
        }
    }
    added
}
