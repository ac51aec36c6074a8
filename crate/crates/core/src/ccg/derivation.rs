use std::fmt;
use std::sync::Arc;

use super::category::{Category, CategoryMap, Dir};
use super::CcgError;
use crate::lambda::{apply, Term};
use crate::lexicon::EntryId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Lex,
    FwdApp,
    BwdApp,
    FwdComp,
    BwdComp,
}

impl Rule {
    /// Name used in the derivation file format.
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Lex => "leaf",
            Rule::FwdApp => "fa",
            Rule::BwdApp => "ba",
            Rule::FwdComp => "fc",
            Rule::BwdComp => "bc",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Rule> {
        Some(match tag {
            "leaf" => Rule::Lex,
            "fa" => Rule::FwdApp,
            "ba" => Rule::BwdApp,
            "fc" => Rule::FwdComp,
            "bc" => Rule::BwdComp,
            _ => return None,
        })
    }

    pub fn is_application(self) -> bool {
        matches!(self, Rule::FwdApp | Rule::BwdApp)
    }

    /// Index of the child whose category carries the slash being consumed.
    pub fn functor_index(self) -> Option<usize> {
        match self {
            Rule::FwdApp | Rule::FwdComp => Some(0),
            Rule::BwdApp | Rule::BwdComp => Some(1),
            Rule::Lex => None,
        }
    }
}

/// Which combinators the parser may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub application: bool,
    pub composition: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            application: true,
            composition: false,
        }
    }
}

impl RuleSet {
    pub fn with_composition() -> Self {
        RuleSet {
            application: true,
            composition: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationNode {
    /// Half-open token range.
    pub span: (usize, usize),
    pub category: Category,
    pub rule: Rule,
    pub children: Vec<Arc<DerivationNode>>,
    pub word: Option<String>,
    pub semantics: Option<Term>,
    /// Lexicon entry a leaf was built from, if any.
    pub entry: Option<EntryId>,
}

impl DerivationNode {
    pub fn leaf(
        index: usize,
        word: &str,
        category: Category,
        semantics: Option<Term>,
        entry: Option<EntryId>,
    ) -> Self {
        DerivationNode {
            span: (index, index + 1),
            category,
            rule: Rule::Lex,
            children: Vec::new(),
            word: Some(word.to_string()),
            semantics,
            entry,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.rule == Rule::Lex
    }

    pub fn leaves(&self) -> Vec<&DerivationNode> {
        fn go<'a>(n: &'a DerivationNode, out: &mut Vec<&'a DerivationNode>) {
            if n.is_leaf() {
                out.push(n);
            } else {
                n.children.iter().for_each(|c| go(c, out));
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn words(&self) -> Vec<&str> {
        self.leaves()
            .iter()
            .filter_map(|l| l.word.as_deref())
            .collect()
    }

    /// A copy without any semantics or entry references.
    pub fn syntax_only(&self) -> DerivationNode {
        DerivationNode {
            span: self.span,
            category: self.category.clone(),
            rule: self.rule,
            children: self
                .children
                .iter()
                .map(|c| Arc::new(c.syntax_only()))
                .collect(),
            word: self.word.clone(),
            semantics: None,
            entry: None,
        }
    }

    /// Recomputes internal semantics bottom-up from the leaves.
    pub fn recompute(&self) -> DerivationNode {
        if self.is_leaf() {
            return self.clone();
        }
        let kids: Vec<DerivationNode> = self.children.iter().map(|c| c.recompute()).collect();
        let semantics = match (kids[0].semantics.as_ref(), kids[1].semantics.as_ref()) {
            (Some(l), Some(r)) => compose(self.rule, l, r),
            _ => None,
        };
        DerivationNode {
            span: self.span,
            category: self.category.clone(),
            rule: self.rule,
            children: kids.into_iter().map(Arc::new).collect(),
            word: None,
            semantics,
            entry: None,
        }
    }

    /// Structure of the tree as an s-expression (categories and words only).
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out);
        out
    }

    fn write_sexpr(&self, out: &mut String) {
        if self.is_leaf() {
            let word = self.word.as_deref().unwrap_or("");
            out.push_str(&format!(
                "(leaf \"{}\" {})",
                word.replace('"', "\\\""),
                self.category
            ));
        } else {
            out.push_str(&format!("({} {}", self.rule.tag(), self.category));
            for c in &self.children {
                out.push(' ');
                c.write_sexpr(out);
            }
            out.push(')');
        }
    }
}

impl fmt::Display for DerivationNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

/// Semantics of a parent built by `rule` from left and right child terms.
/// The slash category is always the functor.
pub fn compose(rule: Rule, left: &Term, right: &Term) -> Option<Term> {
    let (f, g) = match rule.functor_index()? {
        0 => (left, right),
        _ => (right, left),
    };
    let result = match rule {
        Rule::FwdApp | Rule::BwdApp => apply(f, g),
        _ => {
            let mut avoid = f.names();
            avoid.extend(g.names());
            let z = crate::lambda::fresh_name("z", &avoid);
            let body = Term::app(f.clone(), Term::app(g.clone(), Term::var(z.clone())));
            crate::lambda::normalize(&Term::lam(z, body))
        }
    };
    match result {
        Ok(t) => Some(t),
        Err(e) => {
            log::debug!("dropping combination of {f} and {g}: {e}");
            None
        }
    }
}

/// Category produced by `rule` from the two child categories, if licensed.
pub fn combine_categories(rule: Rule, left: &Category, right: &Category) -> Option<Category> {
    match rule {
        Rule::FwdApp => match left {
            Category::Slash {
                result,
                dir: Dir::Forward,
                arg,
            } if **arg == *right => Some((**result).clone()),
            _ => None,
        },
        Rule::BwdApp => match right {
            Category::Slash {
                result,
                dir: Dir::Backward,
                arg,
            } if **arg == *left => Some((**result).clone()),
            _ => None,
        },
        Rule::FwdComp => match (left, right) {
            (
                Category::Slash {
                    result: x,
                    dir: Dir::Forward,
                    arg: y1,
                },
                Category::Slash {
                    result: y2,
                    dir: Dir::Forward,
                    arg: z,
                },
            ) if y1 == y2 => Some(Category::slash((**x).clone(), Dir::Forward, (**z).clone())),
            _ => None,
        },
        Rule::BwdComp => match (left, right) {
            (
                Category::Slash {
                    result: y1,
                    dir: Dir::Backward,
                    arg: z,
                },
                Category::Slash {
                    result: x,
                    dir: Dir::Backward,
                    arg: y2,
                },
            ) if y1 == y2 => Some(Category::slash((**x).clone(), Dir::Backward, (**z).clone())),
            _ => None,
        },
        Rule::Lex => None,
    }
}

pub(crate) fn enabled_rules(rules: &RuleSet) -> Vec<Rule> {
    let mut out = Vec::new();
    if rules.application {
        out.extend([Rule::FwdApp, Rule::BwdApp]);
    }
    if rules.composition {
        out.extend([Rule::FwdComp, Rule::BwdComp]);
    }
    out
}

/// Every parent licensed by `rules` over two adjacent nodes. Semantics are
/// composed when both children have them; a combination whose reduction
/// fails is dropped.
pub fn combine(
    left: &Arc<DerivationNode>,
    right: &Arc<DerivationNode>,
    rules: &RuleSet,
) -> Vec<DerivationNode> {
    if left.span.1 != right.span.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rule in enabled_rules(rules) {
        let Some(category) = combine_categories(rule, &left.category, &right.category) else {
            continue;
        };
        let semantics = match (&left.semantics, &right.semantics) {
            (Some(l), Some(r)) => match compose(rule, l, r) {
                Some(t) => Some(t),
                None => continue,
            },
            _ => None,
        };
        out.push(DerivationNode {
            span: (left.span.0, right.span.1),
            category,
            rule,
            children: vec![left.clone(), right.clone()],
            word: None,
            semantics,
            entry: None,
        });
    }
    out
}

/// Reads a derivation tree: `(fa CAT child child)`, `(leaf "WORD" CAT)`.
pub fn load_derivation(text: &str) -> Result<DerivationNode, CcgError> {
    load_derivation_with(text, &CategoryMap::default())
}

pub fn load_derivation_with(text: &str, map: &CategoryMap) -> Result<DerivationNode, CcgError> {
    let chars: Vec<char> = text.chars().collect();
    let mut r = DerivReader {
        chars: &chars,
        i: 0,
        next_leaf: 0,
        map,
    };
    let node = r.node()?;
    r.skip_ws();
    if r.i != chars.len() {
        return Err(r.err("trailing input after derivation"));
    }
    Ok(node)
}

/// Like [`load_derivation`], also checking that the leaves spell `tokens`.
pub fn load_derivation_for(
    text: &str,
    tokens: &[String],
    map: &CategoryMap,
) -> Result<DerivationNode, CcgError> {
    let node = load_derivation_with(text, map)?;
    let words: Vec<String> = node
        .words()
        .iter()
        .map(|w| crate::lexicon::normalize_word(w))
        .collect();
    let expected: Vec<String> = tokens
        .iter()
        .map(|w| crate::lexicon::normalize_word(w))
        .collect();
    if words != expected {
        return Err(CcgError::SpanMismatch {
            expected: expected.join(" "),
            found: words.join(" "),
        });
    }
    Ok(node)
}

struct DerivReader<'a> {
    chars: &'a [char],
    i: usize,
    next_leaf: usize,
    map: &'a CategoryMap,
}

impl DerivReader<'_> {
    fn err(&self, message: &str) -> CcgError {
        CcgError::Malformed {
            pos: self.i,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.i).is_some_and(|c| c.is_whitespace()) {
            self.i += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CcgError> {
        self.skip_ws();
        if self.chars.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn symbol(&mut self) -> String {
        self.skip_ws();
        let start = self.i;
        while self
            .chars
            .get(self.i)
            .is_some_and(|c| c.is_ascii_alphanumeric())
        {
            self.i += 1;
        }
        self.chars[start..self.i].iter().collect()
    }

    fn string(&mut self) -> Result<String, CcgError> {
        self.skip_ws();
        if self.chars.get(self.i) != Some(&'"') {
            return Err(self.err("expected quoted word"));
        }
        self.i += 1;
        let mut s = String::new();
        loop {
            match self.chars.get(self.i) {
                None => return Err(self.err("unterminated string")),
                Some('\\') => {
                    if let Some(c) = self.chars.get(self.i + 1) {
                        s.push(*c);
                    }
                    self.i += 2;
                }
                Some('"') => {
                    self.i += 1;
                    return Ok(s);
                }
                Some(c) => {
                    s.push(*c);
                    self.i += 1;
                }
            }
        }
    }

    /// A category token: non-space characters with balanced parentheses,
    /// stopping at an unmatched `)`.
    fn category(&mut self) -> Result<Category, CcgError> {
        self.skip_ws();
        let start = self.i;
        let mut depth = 0usize;
        while let Some(&c) = self.chars.get(self.i) {
            if c.is_whitespace() || (c == ')' && depth == 0) {
                break;
            }
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            self.i += 1;
        }
        let text: String = self.chars[start..self.i].iter().collect();
        self.map.parse(&text).map_err(|e| CcgError::Malformed {
            pos: start,
            message: format!("bad category `{text}`: {e}"),
        })
    }

    fn node(&mut self) -> Result<DerivationNode, CcgError> {
        self.expect('(')?;
        let at = self.i;
        let tag = self.symbol();
        let rule = Rule::from_tag(&tag).ok_or_else(|| CcgError::Malformed {
            pos: at,
            message: format!("unknown rule `{tag}`"),
        })?;
        if rule == Rule::Lex {
            let word = self.string()?;
            let category = self.category()?;
            self.expect(')')?;
            let idx = self.next_leaf;
            self.next_leaf += 1;
            return Ok(DerivationNode::leaf(
                idx,
                &word.replace(' ', "_"),
                category,
                None,
                None,
            ));
        }
        let category = self.category()?;
        let left = self.node()?;
        let right = self.node()?;
        self.expect(')')?;
        match combine_categories(rule, &left.category, &right.category) {
            Some(c) if c == category => {}
            other => {
                return Err(CcgError::CategoryMismatch {
                    rule: tag,
                    expected: category.to_string(),
                    found: other.map_or_else(|| "no result".to_string(), |c| c.to_string()),
                })
            }
        }
        Ok(DerivationNode {
            span: (left.span.0, right.span.1),
            category,
            rule,
            children: vec![Arc::new(left), Arc::new(right)],
            word: None,
            semantics: None,
            entry: None,
        })
    }
}
