//! The learned dictionary of (word, category, semantics) triples with their
//! weights, plus generalization to unseen words.

mod generalize;
mod words;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::ccg::{parse_category, Category};
use crate::lambda::{parse_term, Signature, Term};

pub use generalize::{assign_trivial, generalize_all, generalize_d, identify, transfer};
pub use words::{involves, normalize_word, stem, tokenize, SUFFIXES};

/// Initial weight of entries found by inversion or generalization.
pub const DEFAULT_WEIGHT: f64 = 0.1;
/// Initial weight of `λx.x` entries assigned to words absent from the gold term.
pub const TRIVIAL_WEIGHT: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryId(pub usize);

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Initial,
    Inverse,
    Generalized,
    Trivial,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Initial => "initial",
            Origin::Inverse => "inverse",
            Origin::Generalized => "generalized",
            Origin::Trivial => "trivial",
        })
    }
}

impl FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "initial" => Origin::Initial,
            "inverse" => Origin::Inverse,
            "generalized" => Origin::Generalized,
            "trivial" => Origin::Trivial,
            other => return Err(format!("unknown origin `{other}`")),
        })
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A lexical entry. `semantics` is `None` for a syntax-only entry, which
/// only tells the parser which categories a word can take.
#[derive(Clone, Debug, PartialEq)]
pub struct LexiconEntry {
    pub word: String,
    pub category: Category,
    pub semantics: Option<Term>,
    pub weight: f64,
    pub origin: Origin,
}

impl LexiconEntry {
    pub fn new(
        word: &str,
        category: Category,
        semantics: Option<Term>,
        weight: f64,
        origin: Origin,
    ) -> Self {
        LexiconEntry {
            word: normalize_word(word),
            category,
            semantics,
            weight,
            origin,
        }
    }

    fn key(&self) -> (String, Category, String) {
        (
            self.word.clone(),
            self.category.clone(),
            self.semantics
                .as_ref()
                .map_or_else(|| "?".to_string(), Term::alpha_key),
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    by_key: HashMap<(String, Category, String), EntryId>,
    by_word: HashMap<String, Vec<EntryId>>,
    by_category: HashMap<Category, Vec<EntryId>>,
    max_parts: usize,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `entry` unless the same triple is present. Returns the id of the
    /// (new or existing) entry and whether it was added; an existing entry
    /// keeps its weight.
    pub fn insert(&mut self, entry: LexiconEntry) -> (EntryId, bool) {
        let key = entry.key();
        if let Some(&id) = self.by_key.get(&key) {
            return (id, false);
        }
        let id = EntryId(self.entries.len());
        self.by_word.entry(entry.word.clone()).or_default().push(id);
        self.by_category
            .entry(entry.category.clone())
            .or_default()
            .push(id);
        self.max_parts = self.max_parts.max(entry.word.split('_').count());
        self.by_key.insert(key, id);
        self.entries.push(entry);
        (id, true)
    }

    pub fn get(&self, id: EntryId) -> &LexiconEntry {
        &self.entries[id.0]
    }

    pub fn set_weight(&mut self, id: EntryId, weight: f64) {
        self.entries[id.0].weight = weight;
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    pub fn set_weights(&mut self, weights: &[f64]) {
        for (e, &w) in self.entries.iter_mut().zip(weights) {
            e.weight = w;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (EntryId, &LexiconEntry)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| (EntryId(i), e))
    }

    pub fn ids_for_word(&self, word: &str) -> &[EntryId] {
        self.by_word
            .get(&normalize_word(word))
            .map_or(&[], Vec::as_slice)
    }

    pub fn ids_for_category(&self, category: &Category) -> &[EntryId] {
        self.by_category.get(category).map_or(&[], Vec::as_slice)
    }

    pub fn find(&self, word: &str, category: &Category, semantics: &Term) -> Option<EntryId> {
        self.by_key
            .get(&(
                normalize_word(word),
                category.clone(),
                semantics.alpha_key(),
            ))
            .copied()
    }

    pub fn contains(&self, word: &str, category: &Category, semantics: &Term) -> bool {
        self.find(word, category, semantics).is_some()
    }

    /// Semantics known for `word` under `category`, in insertion order.
    pub fn semantics_for(&self, word: &str, category: &Category) -> Vec<&Term> {
        self.ids_for_word(word)
            .iter()
            .map(|&id| self.get(id))
            .filter(|e| e.category == *category)
            .filter_map(|e| e.semantics.as_ref())
            .collect()
    }

    pub fn has_semantics(&self, word: &str, category: &Category) -> bool {
        !self.semantics_for(word, category).is_empty()
    }

    /// Distinct categories of `word`, in insertion order.
    pub fn categories_for(&self, word: &str) -> Vec<Category> {
        let mut out: Vec<Category> = Vec::new();
        for &id in self.ids_for_word(word) {
            let c = &self.get(id).category;
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
        out
    }

    /// Distinct (word, category) pairs, in insertion order.
    pub fn word_categories(&self) -> Vec<(String, Category)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            if seen.insert((e.word.clone(), e.category.clone())) {
                out.push((e.word.clone(), e.category.clone()));
            }
        }
        out
    }

    /// The set of (word, category, semantics) triples, semantics as α-keys.
    pub fn triples(&self) -> BTreeSet<(String, String, String)> {
        self.entries
            .iter()
            .map(|e| {
                let (w, c, s) = e.key();
                (w, c.to_string(), s)
            })
            .collect()
    }

    /// Tokenizes `sentence`, joining runs of tokens into the longest
    /// multiword entry (`give_me`) the lexicon knows.
    pub fn segment(&self, sentence: &str) -> Vec<String> {
        let toks = tokenize(sentence);
        let mut out = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            let longest = (2..=self.max_parts.min(toks.len() - i))
                .rev()
                .map(|k| toks[i..i + k].join("_"))
                .position(|w| self.by_word.contains_key(&w));
            match longest {
                Some(pos) => {
                    let k = self.max_parts.min(toks.len() - i) - pos;
                    out.push(toks[i..i + k].join("_"));
                    i += k;
                }
                None => {
                    out.push(toks[i].clone());
                    i += 1;
                }
            }
        }
        out
    }

    /// Reads the tab-separated format `word category term weight origin`.
    /// The term `?` marks a syntax-only entry; weight and origin may be
    /// omitted (0.1, initial).
    pub fn parse(text: &str, sig: &Signature) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| LexiconError::Parse { line, message };
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if cols.len() < 3 || cols.len() > 5 {
                return Err(err(format!(
                    "expected 3 to 5 tab-separated fields, found {}",
                    cols.len()
                )));
            }
            let category = parse_category(cols[1]).map_err(|e| err(e.to_string()))?;
            let semantics = match cols[2] {
                "?" => None,
                t => Some(parse_term(t, sig).map_err(|e| err(e.to_string()))?),
            };
            let weight = match cols.get(3) {
                Some(w) => w
                    .parse::<f64>()
                    .map_err(|e| err(format!("bad weight `{w}`: {e}")))?,
                None => DEFAULT_WEIGHT,
            };
            if !weight.is_finite() {
                return Err(err(format!("weight must be finite, got {weight}")));
            }
            let origin = match cols.get(4) {
                Some(o) => o.parse::<Origin>().map_err(err)?,
                None => Origin::Initial,
            };
            lex.insert(LexiconEntry::new(
                cols[0], category, semantics, weight, origin,
            ));
        }
        Ok(lex)
    }

    pub fn load(path: &Path, sig: &Signature) -> Result<Lexicon, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Lexicon::parse(&text, sig)
    }

    /// One line per entry in insertion order; reloading gives the same entries.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let sem = e
                .semantics
                .as_ref()
                .map_or_else(|| "?".to_string(), Term::to_string);
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.word, e.category, sem, e.weight, e.origin
            ));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), LexiconError> {
        std::fs::write(path, self.to_text()).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(s: &str) -> Category {
        parse_category(s).unwrap()
    }

    #[test]
    fn triples_are_unique_up_to_alpha() {
        let mut lex = Lexicon::new();
        let (a, new_a) = lex.insert(LexiconEntry::new(
            "state",
            cat("N"),
            Some("\\x.state(x)".parse().unwrap()),
            0.1,
            Origin::Initial,
        ));
        let (b, new_b) = lex.insert(LexiconEntry::new(
            "State.",
            cat("N"),
            Some("\\y.state(y)".parse().unwrap()),
            0.7,
            Origin::Inverse,
        ));
        assert!(new_a && !new_b);
        assert_eq!(a, b);
        assert_eq!(lex.get(a).weight, 0.1);
        assert_eq!(lex.ids_for_word("state"), &[a]);
        assert_eq!(lex.ids_for_category(&cat("N")), &[a]);
    }

    #[test]
    fn save_load_round_trip() {
        let text = "# comment\ngive_me\tS/NP\t\\x.answer(A,x@A)\t0.1\tinitial\nthe\tNP/N\t?\nsmall\tN/N\t\\x.\\y.smallest(y,x@y)\t-0.30000000000000004\tinverse\ncity\tN\t\\x.city(x)\t1e-17\tgeneralized\n";
        let lex = Lexicon::parse(text, &Signature::dynamic()).unwrap();
        assert_eq!(lex.len(), 4);
        assert!(lex.get(EntryId(1)).semantics.is_none());
        let again = Lexicon::parse(&lex.to_text(), &Signature::dynamic()).unwrap();
        assert_eq!(again, lex);
        assert_eq!(again.to_text(), lex.to_text());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "state\tN\t\\x.state(x)\n\ncity\tQ\t\\x.city(x)\n";
        match Lexicon::parse(bad, &Signature::dynamic()) {
            Err(LexiconError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Lexicon::parse("a\tN\tx\tNaN\n", &Signature::dynamic()).is_err());
        assert!(Lexicon::parse("a\tN\n", &Signature::dynamic()).is_err());
    }

    #[test]
    fn multiword_segmentation() {
        let mut lex = Lexicon::new();
        lex.insert(LexiconEntry::new(
            "give_me",
            cat("S/NP"),
            None,
            0.1,
            Origin::Initial,
        ));
        lex.insert(LexiconEntry::new(
            "new_york_city",
            cat("NP"),
            None,
            0.1,
            Origin::Initial,
        ));
        assert_eq!(
            lex.segment("Give me the largest state."),
            ["give_me", "the", "largest", "state"]
        );
        assert_eq!(
            lex.segment("give me new york city"),
            ["give_me", "new_york_city"]
        );
        assert_eq!(lex.segment("new york"), ["new", "york"]);
        assert!(lex.segment("").is_empty());
    }
}
