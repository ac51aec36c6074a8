//! Simple types and inference by unification.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::Term;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    /// `e`, `t`, `i`, or any other named base type.
    Base(String),
    Fn(Box<TypeExpr>, Box<TypeExpr>),
    /// Inference variable.
    Var(u32),
    /// The dynamic type: unifies with anything and binds nothing.
    Wildcard,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("type conflict in `{subterm}`: cannot unify {left} with {right}")]
    Conflict {
        subterm: String,
        left: TypeExpr,
        right: TypeExpr,
    },
    #[error("infinite type in `{subterm}`")]
    Occurs { subterm: String },
    #[error("malformed type `{0}`")]
    Syntax(String),
}

impl TypeExpr {
    pub fn base(name: &str) -> TypeExpr {
        TypeExpr::Base(name.to_string())
    }

    pub fn func(from: TypeExpr, to: TypeExpr) -> TypeExpr {
        TypeExpr::Fn(Box::new(from), Box::new(to))
    }

    /// Parses `e`, `e->t`, `(e->t)->e->t`; `->` is right-associative and `?`
    /// is the wildcard.
    pub fn parse(text: &str) -> Result<TypeExpr, TypeError> {
        let toks: Vec<String> = {
            let mut out = Vec::new();
            let mut rest = text.trim();
            while !rest.is_empty() {
                rest = rest.trim_start();
                if let Some(r) = rest.strip_prefix("->") {
                    out.push("->".to_string());
                    rest = r;
                } else if let Some(r) = rest.strip_prefix('→') {
                    out.push("->".to_string());
                    rest = r;
                } else if rest.starts_with(['(', ')', '?']) {
                    out.push(rest[..1].to_string());
                    rest = &rest[1..];
                } else {
                    let end = rest
                        .find(|c: char| !(c.is_alphanumeric() || c == '_'))
                        .unwrap_or(rest.len());
                    if end == 0 {
                        return Err(TypeError::Syntax(text.to_string()));
                    }
                    out.push(rest[..end].to_string());
                    rest = &rest[end..];
                }
            }
            out
        };
        fn arrow(toks: &[String], i: &mut usize, src: &str) -> Result<TypeExpr, TypeError> {
            let from = primary(toks, i, src)?;
            if toks.get(*i).map(String::as_str) == Some("->") {
                *i += 1;
                let to = arrow(toks, i, src)?;
                return Ok(TypeExpr::func(from, to));
            }
            Ok(from)
        }
        fn primary(toks: &[String], i: &mut usize, src: &str) -> Result<TypeExpr, TypeError> {
            let tok = toks
                .get(*i)
                .ok_or_else(|| TypeError::Syntax(src.to_string()))?;
            *i += 1;
            match tok.as_str() {
                "(" => {
                    let t = arrow(toks, i, src)?;
                    if toks.get(*i).map(String::as_str) != Some(")") {
                        return Err(TypeError::Syntax(src.to_string()));
                    }
                    *i += 1;
                    Ok(t)
                }
                "?" => Ok(TypeExpr::Wildcard),
                ")" | "->" => Err(TypeError::Syntax(src.to_string())),
                name => Ok(TypeExpr::Base(name.to_string())),
            }
        }
        let mut i = 0;
        let t = arrow(&toks, &mut i, text)?;
        if i != toks.len() {
            return Err(TypeError::Syntax(text.to_string()));
        }
        Ok(t)
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Base(n) => f.write_str(n),
            TypeExpr::Var(v) => {
                let letter = (b'a' + (*v % 26) as u8) as char;
                if *v < 26 {
                    write!(f, "'{letter}")
                } else {
                    write!(f, "'{letter}{}", v / 26)
                }
            }
            TypeExpr::Wildcard => f.write_str("?"),
            TypeExpr::Fn(a, b) => {
                if matches!(a.as_ref(), TypeExpr::Fn(..)) {
                    write!(f, "({a})->{b}")
                } else {
                    write!(f, "{a}->{b}")
                }
            }
        }
    }
}

/// Types of constants and predicates.
///
/// Names absent from the map get the default type. A signature with no
/// default is strict: the term parser rejects unknown lower-case names.
#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    types: BTreeMap<String, TypeExpr>,
    default: Option<TypeExpr>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature::dynamic()
    }
}

impl Signature {
    /// Every name is admitted with the wildcard type.
    pub fn dynamic() -> Signature {
        Signature {
            types: BTreeMap::new(),
            default: Some(TypeExpr::Wildcard),
        }
    }

    pub fn strict() -> Signature {
        Signature {
            types: BTreeMap::new(),
            default: None,
        }
    }

    /// Reads `name <TAB> type` lines; `#` starts a comment. The result is strict.
    pub fn parse(text: &str) -> Result<Signature, TypeError> {
        let mut sig = Signature::strict();
        for line in text.lines() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (name, ty) = line
                .split_once('\t')
                .ok_or_else(|| TypeError::Syntax(line.to_string()))?;
            sig.insert(name.trim(), TypeExpr::parse(ty.trim())?);
        }
        Ok(sig)
    }

    pub fn insert(&mut self, name: &str, ty: TypeExpr) {
        self.types.insert(name.to_string(), ty);
    }

    pub fn with_default(mut self, default: Option<TypeExpr>) -> Signature {
        self.default = default;
        self
    }

    pub fn get(&self, name: &str) -> Option<&TypeExpr> {
        self.types.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Whether an unbound name may be read as a constant: declared names,
    /// anything under a default type, and upper-case corpus variables.
    pub fn admits(&self, name: &str) -> bool {
        self.types.contains_key(name)
            || self.default.is_some()
            || name.chars().next().is_some_and(char::is_uppercase)
    }
}

struct Infer<'a> {
    sig: &'a Signature,
    subst: Vec<Option<TypeExpr>>,
}

impl Infer<'_> {
    fn fresh(&mut self) -> TypeExpr {
        self.subst.push(None);
        TypeExpr::Var(self.subst.len() as u32 - 1)
    }

    fn resolve(&self, t: &TypeExpr) -> TypeExpr {
        match t {
            TypeExpr::Var(v) => match &self.subst[*v as usize] {
                Some(bound) => self.resolve(bound),
                None => t.clone(),
            },
            TypeExpr::Fn(a, b) => TypeExpr::func(self.resolve(a), self.resolve(b)),
            other => other.clone(),
        }
    }

    fn occurs(&self, v: u32, t: &TypeExpr) -> bool {
        match self.resolve(t) {
            TypeExpr::Var(w) => v == w,
            TypeExpr::Fn(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &TypeExpr, b: &TypeExpr, at: &Term) -> Result<(), TypeError> {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (TypeExpr::Wildcard, _) | (_, TypeExpr::Wildcard) => Ok(()),
            (TypeExpr::Var(x), TypeExpr::Var(y)) if x == y => Ok(()),
            (TypeExpr::Var(x), other) | (other, TypeExpr::Var(x)) => {
                if self.occurs(*x, other) {
                    return Err(TypeError::Occurs {
                        subterm: at.to_string(),
                    });
                }
                self.subst[*x as usize] = Some(other.clone());
                Ok(())
            }
            (TypeExpr::Base(x), TypeExpr::Base(y)) if x == y => Ok(()),
            (TypeExpr::Fn(a1, b1), TypeExpr::Fn(a2, b2)) => {
                self.unify(a1, a2, at)?;
                self.unify(b1, b2, at)
            }
            _ => Err(TypeError::Conflict {
                subterm: at.to_string(),
                left: a.clone(),
                right: b.clone(),
            }),
        }
    }

    fn constant(&mut self, name: &str) -> TypeExpr {
        match self.sig.get(name).or(self.sig.default.as_ref()) {
            Some(t) => t.clone(),
            None => self.fresh(),
        }
    }

    fn infer(
        &mut self,
        t: &Term,
        env: &mut Vec<(String, TypeExpr)>,
    ) -> Result<TypeExpr, TypeError> {
        match t {
            Term::Var(x) => match env.iter().rev().find(|(n, _)| n == x) {
                Some((_, ty)) => Ok(ty.clone()),
                None => Ok(self.fresh()),
            },
            Term::Const(c) => Ok(self.constant(c)),
            Term::Lam(x, body) => {
                let arg = self.fresh();
                env.push((x.clone(), arg.clone()));
                let res = self.infer(body, env);
                env.pop();
                Ok(TypeExpr::func(arg, res?))
            }
            Term::App(f, a) => {
                let tf = self.infer(f, env)?;
                let ta = self.infer(a, env)?;
                let result = self.fresh();
                self.unify(&tf, &TypeExpr::func(ta, result.clone()), t)?;
                Ok(result)
            }
            Term::Atom(p, args) => {
                let head = self.constant(p);
                let result = self.fresh();
                let mut expected = result.clone();
                let mut arg_types = Vec::with_capacity(args.len());
                for a in args {
                    arg_types.push(self.infer(a, env)?);
                }
                for ta in arg_types.into_iter().rev() {
                    expected = TypeExpr::func(ta, expected);
                }
                self.unify(&head, &expected, t)?;
                Ok(result)
            }
        }
    }
}

/// Infers the principal type of `t`. Inference variables in the result are
/// renumbered from zero in order of appearance.
pub fn infer_type(t: &Term, sig: &Signature) -> Result<TypeExpr, TypeError> {
    let mut inf = Infer {
        sig,
        subst: Vec::new(),
    };
    let ty = inf.infer(t, &mut Vec::new())?;
    let ty = inf.resolve(&ty);
    fn renumber(t: &TypeExpr, map: &mut Vec<u32>) -> TypeExpr {
        match t {
            TypeExpr::Var(v) => {
                let i = map.iter().position(|x| x == v).unwrap_or_else(|| {
                    map.push(*v);
                    map.len() - 1
                });
                TypeExpr::Var(i as u32)
            }
            TypeExpr::Fn(a, b) => TypeExpr::func(renumber(a, map), renumber(b, map)),
            other => other.clone(),
        }
    }
    Ok(renumber(&ty, &mut Vec::new()))
}
