use std::collections::HashMap;

use super::term::{alpha_eq, Path};
use super::Term;

/// A distinct subterm together with every position it occupies.
#[derive(Clone, Debug, PartialEq)]
pub struct Subterm {
    pub term: Term,
    pub positions: Vec<Path>,
}

/// Distinct subterms of `h` in leftmost-outermost (pre-order) order of first
/// occurrence. α-equivalent occurrences are grouped.
pub fn subterms(h: &Term) -> Vec<Subterm> {
    fn go(t: &Term, path: &mut Path, out: &mut Vec<Subterm>, index: &mut HashMap<String, usize>) {
        let key = t.alpha_key();
        match index.get(&key) {
            Some(&i) => out[i].positions.push(path.clone()),
            None => {
                index.insert(key, out.len());
                out.push(Subterm {
                    term: t.clone(),
                    positions: vec![path.clone()],
                });
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, out, index);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(h, &mut Vec::new(), &mut out, &mut HashMap::new());
    out
}

/// Whether `node` is an appearance of `pattern`: α-equivalence for closed
/// patterns, literal equality for open ones.
pub fn matches_pattern(node: &Term, pattern: &Term, pattern_closed: bool) -> bool {
    if pattern_closed {
        alpha_eq(node, pattern)
    } else {
        node == pattern
    }
}

/// The replacement operator: every appearance of `from[i]` in `h` becomes
/// `to[i]`, simultaneously and outermost first. Replacement is purely
/// syntactic; a replaced term is not searched again.
///
/// # Panics
/// If `from` and `to` differ in length.
pub fn replace(h: &Term, from: &[Term], to: &[Term]) -> Term {
    assert_eq!(from.len(), to.len(), "replace: list lengths differ");
    if from.is_empty() {
        return h.clone();
    }
    let closed: Vec<bool> = from.iter().map(Term::is_closed).collect();
    fn go(t: &Term, from: &[Term], to: &[Term], closed: &[bool]) -> Term {
        if let Some(i) = (0..from.len()).find(|&i| matches_pattern(t, &from[i], closed[i])) {
            return to[i].clone();
        }
        match t {
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::Lam(x, b) => Term::lam(x.clone(), go(b, from, to, closed)),
            Term::App(f, a) => Term::app(go(f, from, to, closed), go(a, from, to, closed)),
            Term::Atom(p, args) => Term::atom(
                p.clone(),
                args.iter().map(|a| go(a, from, to, closed)).collect(),
            ),
        }
    }
    go(h, from, to, &closed)
}

/// Replaces the nodes at the given positions by `by`. Positions that do not
/// exist are ignored; nested positions are resolved outermost first.
pub fn replace_at(h: &Term, positions: &[Path], by: &Term) -> Term {
    fn go(t: &Term, path: &mut Path, positions: &[Path], by: &Term) -> Term {
        if positions.iter().any(|p| p == path) {
            return by.clone();
        }
        if !positions.iter().any(|p| p.starts_with(path)) {
            return t.clone();
        }
        let child = |i: usize, c: &Term, path: &mut Path| {
            path.push(i);
            let r = go(c, path, positions, by);
            path.pop();
            r
        };
        match t {
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::Lam(x, b) => Term::lam(x.clone(), child(0, b, path)),
            Term::App(f, a) => {
                let f = child(0, f, path);
                let a = child(1, a, path);
                Term::app(f, a)
            }
            Term::Atom(p, args) => Term::atom(
                p.clone(),
                args.iter()
                    .enumerate()
                    .map(|(i, a)| child(i, a, path))
                    .collect(),
            ),
        }
    }
    go(h, &mut Vec::new(), positions, by)
}

/// Where a name occurs: as a constant leaf or as the predicate of an atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NameSite {
    Constant(Path),
    Predicate(Path),
}

impl NameSite {
    pub fn path(&self) -> &Path {
        match self {
            NameSite::Constant(p) | NameSite::Predicate(p) => p,
        }
    }
}

/// All sites of constants and predicates, pre-order, with their names.
pub fn name_sites(t: &Term) -> Vec<(NameSite, String)> {
    fn go(t: &Term, path: &mut Path, out: &mut Vec<(NameSite, String)>) {
        match t {
            Term::Const(c) => out.push((NameSite::Constant(path.clone()), c.clone())),
            Term::Atom(p, _) => out.push((NameSite::Predicate(path.clone()), p.clone())),
            _ => {}
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Renames the constants or predicates at `sites` according to `rename`.
pub fn rename_sites(t: &Term, sites: &[NameSite], rename: &dyn Fn(&str) -> String) -> Term {
    fn go(t: &Term, path: &mut Path, sites: &[NameSite], rename: &dyn Fn(&str) -> String) -> Term {
        let kids = |path: &mut Path| -> Vec<Term> {
            t.children()
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    path.push(i);
                    let r = go(c, path, sites, rename);
                    path.pop();
                    r
                })
                .collect()
        };
        match t {
            Term::Const(c) if sites.contains(&NameSite::Constant(path.clone())) => {
                Term::constant(rename(c))
            }
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::Lam(x, _) => Term::lam(x.clone(), kids(path).remove(0)),
            Term::App(..) => {
                let mut k = kids(path);
                let a = k.pop().expect("argument");
                let f = k.pop().expect("functor");
                Term::app(f, a)
            }
            Term::Atom(p, _) => {
                let name = if sites.contains(&NameSite::Predicate(path.clone())) {
                    rename(p)
                } else {
                    p.clone()
                };
                Term::atom(name, kids(path))
            }
        }
    }
    go(t, &mut Vec::new(), sites, rename)
}
