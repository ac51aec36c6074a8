//! Corpus files, CLANG preprocessing, semantic-representation matching and
//! precision/recall evaluation with cross-validation.

mod eval;
mod readers;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::ccg::{load_derivation_with, CategoryMap, DerivationNode};
use crate::lambda::Term;
use crate::learner::TrainingExample;
use crate::lexicon::{tokenize, Lexicon};

pub use eval::{
    cross_validate, evaluate, f_measure, match_sr, split_indices, CvConfig, CvError, CvReport,
    EvalReport, MatchOptions, Split, SplitMode,
};
pub use readers::{parse_clang, parse_geo, ReadError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Geo,
    Clang,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Geo => "geo",
            Dialect::Clang => "clang",
        })
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "geo" => Ok(Dialect::Geo),
            "clang" => Ok(Dialect::Clang),
            other => Err(format!("unknown dialect `{other}` (expected geo or clang)")),
        }
    }
}

impl Dialect {
    pub fn read(self, text: &str) -> Result<Term, ReadError> {
        match self {
            Dialect::Geo => parse_geo(text),
            Dialect::Clang => parse_clang(text),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusExample {
    /// Line number of the sentence in the corpus file.
    pub id: usize,
    pub sentence: String,
    pub tokens: Vec<String>,
    pub gold: Term,
    pub dialect: Dialect,
    pub derivation: Option<DerivationNode>,
}

impl CorpusExample {
    /// A training example, segmenting the sentence against `lexicon` unless
    /// a derivation supplies the tokens.
    pub fn to_training(&self, lexicon: &Lexicon) -> TrainingExample {
        match &self.derivation {
            Some(d) => TrainingExample::with_derivation(d.clone(), self.gold.clone()),
            None => TrainingExample::new(lexicon.segment(&self.sentence), self.gold.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

/// Examples that loaded and the errors of blocks that did not.
#[derive(Debug, Clone, Default)]
pub struct CorpusLoad {
    pub examples: Vec<CorpusExample>,
    pub errors: Vec<CorpusError>,
}

/// Parses blocks of `sentence`, `SR`, optional `deriv: <tree>`, separated
/// by blank lines. Lines starting with `#` between blocks are comments.
pub fn parse_corpus(text: &str, dialect: Dialect, categories: &CategoryMap) -> CorpusLoad {
    let mut out = CorpusLoad::default();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .chain(std::iter::once((0, "")));
    for (no, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            if !block.is_empty() {
                match read_block(&block, dialect, categories) {
                    Ok(ex) => out.examples.push(ex),
                    Err(e) => out.errors.push(e),
                }
                block.clear();
            }
        } else if !(block.is_empty() && trimmed.starts_with('#')) {
            block.push((no, trimmed));
        }
    }
    out
}

fn read_block(
    block: &[(usize, &str)],
    dialect: Dialect,
    categories: &CategoryMap,
) -> Result<CorpusExample, CorpusError> {
    let (line, sentence) = block[0];
    if block.len() < 2 || block.len() > 3 {
        return Err(CorpusError {
            line,
            message: format!(
                "expected sentence, SR and optional derivation, found {} lines",
                block.len()
            ),
        });
    }
    let (sr_line, sr) = block[1];
    let gold = dialect.read(sr).map_err(|e| CorpusError {
        line: sr_line,
        message: format!("bad SR: {e}"),
    })?;
    let derivation = match block.get(2) {
        None => None,
        Some(&(dl, d)) => {
            let tree = d.strip_prefix("deriv:").ok_or_else(|| CorpusError {
                line: dl,
                message: "third line must start with `deriv:`".into(),
            })?;
            Some(
                load_derivation_with(tree.trim(), categories).map_err(|e| CorpusError {
                    line: dl,
                    message: e.to_string(),
                })?,
            )
        }
    };
    let tokens = match &derivation {
        Some(d) => d
            .words()
            .iter()
            .map(|w| crate::lexicon::normalize_word(w))
            .collect(),
        None => tokenize(sentence),
    };
    if tokens.is_empty() {
        return Err(CorpusError {
            line,
            message: "empty sentence".into(),
        });
    }
    Ok(CorpusExample {
        id: line,
        sentence: sentence.to_string(),
        tokens,
        gold,
        dialect,
        derivation,
    })
}

pub fn load_corpus(path: &Path, dialect: Dialect) -> std::io::Result<CorpusLoad> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_corpus(&text, dialect, &CategoryMap::default()))
}

/// Attaches one derivation per line of `text` to the examples in order; an
/// empty line or `-` leaves that example without one. The leaf words, split
/// at `_`, must be the sentence tokens.
pub fn attach_derivations(
    examples: &mut [CorpusExample],
    text: &str,
    categories: &CategoryMap,
) -> Result<(), CorpusError> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() > examples.len() {
        return Err(CorpusError {
            line: examples.len() + 1,
            message: format!(
                "{} derivations for {} examples",
                lines.len(),
                examples.len()
            ),
        });
    }
    for (i, (ex, raw)) in examples.iter_mut().zip(&lines).enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw == "-" {
            continue;
        }
        let d = load_derivation_with(raw, categories).map_err(|e| CorpusError {
            line,
            message: e.to_string(),
        })?;
        let tokens: Vec<String> = d
            .words()
            .iter()
            .map(|w| crate::lexicon::normalize_word(w))
            .collect();
        let split: Vec<String> = tokens
            .iter()
            .flat_map(|t| t.split('_'))
            .map(str::to_string)
            .collect();
        if split != tokenize(&ex.sentence) {
            return Err(CorpusError {
                line,
                message: format!(
                    "derivation words `{}` do not match `{}`",
                    tokens.join(" "),
                    ex.sentence
                ),
            });
        }
        ex.tokens = tokens;
        ex.derivation = Some(d);
    }
    Ok(())
}

fn coordinate_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\(\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*\)").expect("valid regex")
    })
}

fn compound_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b([A-Za-z]+)\s+(-?\d+)\b").expect("valid regex"))
}

/// Joins coordinate pairs `( x , y )` into `pt_x_y` and `word NUMBER` into
/// `word_NUMBER`, then re-tokenizes. The gold term is untouched.
pub fn preprocess_clang(ex: &CorpusExample) -> CorpusExample {
    let s = coordinate_re().replace_all(&ex.sentence, " pt_${1}_${2} ");
    let s = compound_re().replace_all(&s, "${1}_${2}");
    let sentence = s.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut out = ex.clone();
    if out.derivation.is_none() {
        out.tokens = tokenize(&sentence);
    }
    out.sentence = sentence;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GIVE_ME: &str = "Give me the largest state.\nanswer(A,largest(A,state(A)))\n";

    #[test]
    fn loads_geo_pair() {
        let load = parse_corpus(GIVE_ME, Dialect::Geo, &CategoryMap::default());
        assert!(load.errors.is_empty());
        assert_eq!(load.examples.len(), 1);
        let ex = &load.examples[0];
        assert_eq!(ex.tokens, ["give", "me", "the", "largest", "state"]);
        assert_eq!(ex.gold.to_string(), "answer(A,largest(A,state(A)))");
        assert_eq!(ex.id, 1);
    }

    #[test]
    fn loads_clang_pair() {
        let text = "If the ball is in our midfield, position player 3 at (-5,-23).\n((bpos (midfield our)) (do (player our {3}) (pos (pt -5 -23))))\n";
        let load = parse_corpus(text, Dialect::Clang, &CategoryMap::default());
        assert_eq!(load.examples.len(), 1);
        assert_eq!(load.examples[0].dialect, Dialect::Clang);
    }

    #[test]
    fn empty_file_and_errors_with_lines() {
        assert!(parse_corpus("", Dialect::Geo, &CategoryMap::default())
            .examples
            .is_empty());
        let text = "# header\n\nfirst\nanswer(A,\n\nsecond\nanswer(A,b)\n\nthird\nanswer(A,c)\nderiv: (fa S\n";
        let load = parse_corpus(text, Dialect::Geo, &CategoryMap::default());
        assert_eq!(load.examples.len(), 1);
        assert_eq!(load.examples[0].sentence, "second");
        let lines: Vec<usize> = load.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, [4, 11]);
    }

    #[test]
    fn derivation_supplies_tokens() {
        let text = "Give me the largest state.\nanswer(A,largest(A,state(A)))\nderiv: (fa S (leaf \"Give_me\" S/NP) (fa NP (leaf \"the\" NP/N) (fa N (leaf \"largest\" N/N) (leaf \"state.\" N))))\n";
        let load = parse_corpus(text, Dialect::Geo, &CategoryMap::default());
        assert_eq!(
            load.examples[0].tokens,
            ["give_me", "the", "largest", "state"]
        );
    }

    #[test]
    fn derivations_file() {
        let mut load = parse_corpus(
            &format!("{GIVE_ME}\nWhat is it?\nanswer(A,b)\n"),
            Dialect::Geo,
            &CategoryMap::default(),
        );
        let tree = r#"(fa S (leaf "give_me" S/NP) (fa NP (leaf "the" NP/N) (fa N (leaf "largest" N/N) (leaf "state" N))))"#;
        attach_derivations(
            &mut load.examples,
            &format!("{tree}\n-\n"),
            &CategoryMap::default(),
        )
        .unwrap();
        assert_eq!(load.examples[0].tokens[0], "give_me");
        assert!(load.examples[1].derivation.is_none());
        let bad = attach_derivations(
            &mut load.examples,
            "-\n(leaf \"what\" S)\n",
            &CategoryMap::default(),
        );
        assert_eq!(bad.unwrap_err().line, 2);
    }

    #[test]
    fn clang_preprocessing() {
        let text = "If the ball is in our midfield, position player 3 at (-5,-23).\n(x)\n\nstay at ( 0 , 0 ) now\n(x)\n\nno numbers here\n(x)\n";
        let load = parse_corpus(text, Dialect::Clang, &CategoryMap::default());
        let pre: Vec<CorpusExample> = load.examples.iter().map(preprocess_clang).collect();
        assert!(pre[0].tokens.contains(&"player_3".to_string()));
        assert!(pre[0].tokens.contains(&"pt_-5_-23".to_string()));
        assert_eq!(pre[0].gold, load.examples[0].gold);
        assert_eq!(pre[1].tokens, ["stay", "at", "pt_0_0", "now"]);
        assert_eq!(pre[2].tokens, load.examples[2].tokens);
    }
}
