use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::CcgError;

pub const ATOMIC_NAMES: [&str; 5] = ["S", "NP", "N", "PP", "CONJ"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    /// `/`: argument to the right.
    Forward,
    /// `\`: argument to the left.
    Backward,
}

impl Dir {
    pub fn symbol(self) -> char {
        match self {
            Dir::Forward => '/',
            Dir::Backward => '\\',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atomic {
        name: String,
        feature: Option<String>,
    },
    Slash {
        result: Box<Category>,
        dir: Dir,
        arg: Box<Category>,
    },
}

impl Category {
    pub fn atomic(name: &str) -> Category {
        Category::Atomic {
            name: name.to_string(),
            feature: None,
        }
    }

    pub fn slash(result: Category, dir: Dir, arg: Category) -> Category {
        Category::Slash {
            result: Box::new(result),
            dir,
            arg: Box::new(arg),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Category::Atomic { .. })
    }

    pub fn strip_features(&self) -> Category {
        match self {
            Category::Atomic { name, .. } => Category::atomic(name),
            Category::Slash { result, dir, arg } => {
                Category::slash(result.strip_features(), *dir, arg.strip_features())
            }
        }
    }

    /// Number of slashes.
    pub fn arity(&self) -> usize {
        match self {
            Category::Atomic { .. } => 0,
            Category::Slash { result, .. } => 1 + result.arity(),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Atomic { name, feature } => {
                f.write_str(name)?;
                if let Some(feat) = feature {
                    write!(f, "[{feat}]")?;
                }
                Ok(())
            }
            Category::Slash { result, dir, arg } => {
                let wrap = |c: &Category, f: &mut fmt::Formatter<'_>| {
                    if c.is_atomic() {
                        write!(f, "{c}")
                    } else {
                        write!(f, "({c})")
                    }
                };
                wrap(result, f)?;
                write!(f, "{}", dir.symbol())?;
                wrap(arg, f)
            }
        }
    }
}

impl FromStr for Category {
    type Err = CcgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_category(s)
    }
}

/// Parses category notation such as `N/N` or `(S\NP)/NP`. Slashes are
/// left-associative; atoms may carry a feature in brackets, `S[dcl]`.
pub fn parse_category(text: &str) -> Result<Category, CcgError> {
    CategoryMap::default().parse(text)
}

/// Normalizes categories coming from an external parser: atomic names are
/// renamed through a table and features may be dropped.
#[derive(Clone, Debug, Default)]
pub struct CategoryMap {
    pub names: HashMap<String, String>,
    pub strip_features: bool,
}

impl CategoryMap {
    /// Reads `FROM<TAB>TO` lines; `#` starts a comment. Features are stripped.
    pub fn parse_file(text: &str) -> Result<CategoryMap, CcgError> {
        let mut names = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(from), Some(to), None) => {
                    names.insert(from.to_string(), to.to_string());
                }
                _ => {
                    return Err(CcgError::Malformed {
                        pos: i + 1,
                        message: format!("expected `FROM<TAB>TO`, got `{line}`"),
                    })
                }
            }
        }
        Ok(CategoryMap {
            names,
            strip_features: true,
        })
    }

    pub fn parse(&self, text: &str) -> Result<Category, CcgError> {
        let chars: Vec<char> = text.chars().collect();
        let mut p = CatParser {
            chars: &chars,
            i: 0,
            map: self,
        };
        let c = p.category()?;
        p.skip_ws();
        if p.i != chars.len() {
            return Err(p.err("trailing input in category"));
        }
        Ok(c)
    }
}

struct CatParser<'a> {
    chars: &'a [char],
    i: usize,
    map: &'a CategoryMap,
}

impl CatParser<'_> {
    fn err(&self, message: &str) -> CcgError {
        CcgError::Category {
            pos: self.i,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.i).is_some_and(|c| c.is_whitespace()) {
            self.i += 1;
        }
    }

    fn category(&mut self) -> Result<Category, CcgError> {
        let mut c = self.primary()?;
        loop {
            self.skip_ws();
            let dir = match self.chars.get(self.i) {
                Some('/') => Dir::Forward,
                Some('\\') => Dir::Backward,
                _ => return Ok(c),
            };
            self.i += 1;
            let arg = self.primary()?;
            c = Category::slash(c, dir, arg);
        }
    }

    fn primary(&mut self) -> Result<Category, CcgError> {
        self.skip_ws();
        match self.chars.get(self.i) {
            Some('(') => {
                self.i += 1;
                let c = self.category()?;
                self.skip_ws();
                if self.chars.get(self.i) != Some(&')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(c)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.i;
                while self
                    .chars
                    .get(self.i)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    self.i += 1;
                }
                let raw: String = self.chars[start..self.i].iter().collect();
                let mut feature = None;
                if self.chars.get(self.i) == Some(&'[') {
                    let fstart = self.i + 1;
                    while self.chars.get(self.i).is_some_and(|c| *c != ']') {
                        self.i += 1;
                    }
                    if self.chars.get(self.i) != Some(&']') {
                        return Err(self.err("unterminated feature"));
                    }
                    feature = Some(self.chars[fstart..self.i].iter().collect::<String>());
                    self.i += 1;
                }
                let full = match &feature {
                    Some(f) => format!("{raw}[{f}]"),
                    None => raw.clone(),
                };
                let (name, feature) = match self
                    .map
                    .names
                    .get(&full)
                    .or_else(|| self.map.names.get(&raw))
                {
                    Some(mapped) => (mapped.clone(), None),
                    None => (
                        raw,
                        if self.map.strip_features {
                            None
                        } else {
                            feature
                        },
                    ),
                };
                if !ATOMIC_NAMES.contains(&name.as_str()) {
                    return Err(CcgError::Category {
                        pos: start,
                        message: format!("unknown atomic category `{name}`"),
                    });
                }
                Ok(Category::Atomic { name, feature })
            }
            _ => Err(self.err("expected a category")),
        }
    }
}
