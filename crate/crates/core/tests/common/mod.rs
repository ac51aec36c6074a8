//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use invlam::ccg::{combine_categories, compose, parse_category, Category, LeafItem, Rule};
use invlam::lambda::Term;
use invlam::lexicon::{Lexicon, LexiconEntry, Origin};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn t(s: &str) -> Term {
    s.parse().unwrap_or_else(|e| panic!("bad term {s}: {e}"))
}

pub fn cat(s: &str) -> Category {
    parse_category(s).unwrap()
}

/// Locally nameless term used as a reference normalizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Db {
    Bound(usize),
    Free(String),
    Const(String),
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
    Atom(String, Vec<Db>),
}

pub fn to_db(t: &Term) -> Db {
    fn go(t: &Term, env: &mut Vec<String>) -> Db {
        match t {
            Term::Var(x) => match env.iter().rev().position(|b| b == x) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.clone()),
            },
            Term::Const(c) => Db::Const(c.clone()),
            Term::Lam(x, b) => {
                env.push(x.clone());
                let r = Db::Lam(Box::new(go(b, env)));
                env.pop();
                r
            }
            Term::App(f, a) => Db::App(Box::new(go(f, env)), Box::new(go(a, env))),
            Term::Atom(p, args) => Db::Atom(p.clone(), args.iter().map(|a| go(a, env)).collect()),
        }
    }
    go(t, &mut Vec::new())
}

fn shift(t: &Db, d: isize, cutoff: usize) -> Db {
    match t {
        Db::Bound(i) if *i >= cutoff => Db::Bound((*i as isize + d) as usize),
        Db::Bound(_) | Db::Free(_) | Db::Const(_) => t.clone(),
        Db::Lam(b) => Db::Lam(Box::new(shift(b, d, cutoff + 1))),
        Db::App(f, a) => Db::App(Box::new(shift(f, d, cutoff)), Box::new(shift(a, d, cutoff))),
        Db::Atom(p, args) => Db::Atom(
            p.clone(),
            args.iter().map(|a| shift(a, d, cutoff)).collect(),
        ),
    }
}

fn subst(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Bound(i) if *i == j => s.clone(),
        Db::Bound(_) | Db::Free(_) | Db::Const(_) => t.clone(),
        Db::Lam(b) => Db::Lam(Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        Db::App(f, a) => Db::App(Box::new(subst(f, j, s)), Box::new(subst(a, j, s))),
        Db::Atom(p, args) => Db::Atom(p.clone(), args.iter().map(|a| subst(a, j, s)).collect()),
    }
}

/// Normal-order β-normal form, `None` after `fuel` steps.
pub fn db_normalize(t: &Db, fuel: &mut usize) -> Option<Db> {
    match t {
        Db::Bound(_) | Db::Free(_) | Db::Const(_) => Some(t.clone()),
        Db::Lam(b) => Some(Db::Lam(Box::new(db_normalize(b, fuel)?))),
        Db::Atom(p, args) => Some(Db::Atom(
            p.clone(),
            args.iter()
                .map(|a| db_normalize(a, fuel))
                .collect::<Option<_>>()?,
        )),
        Db::App(f, a) => {
            let f = db_normalize(f, fuel)?;
            if let Db::Lam(body) = &f {
                if *fuel == 0 {
                    return None;
                }
                *fuel -= 1;
                let r = shift(&subst(body, 0, &shift(a, 1, 0)), -1, 0);
                db_normalize(&r, fuel)
            } else {
                Some(Db::App(Box::new(f), Box::new(db_normalize(a, fuel)?)))
            }
        }
    }
}

/// Reference check that `f@g` reduces to `h`, independent of the library's
/// reducer and α-comparison.
pub fn reduces_to(f: &Term, g: &Term, h: &Term) -> bool {
    let mut fuel = 10_000;
    let app = Db::App(Box::new(to_db(f)), Box::new(to_db(g)));
    let mut fuel2 = 10_000;
    match (
        db_normalize(&app, &mut fuel),
        db_normalize(&to_db(h), &mut fuel2),
    ) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

const CONSTS: [&str; 5] = ["a", "b", "texas", "river", "A"];
const UNARY: [&str; 4] = ["state", "city", "big", "run"];
const BINARY: [&str; 4] = ["loc", "in", "next_to", "largest"];

fn leaf(rng: &mut impl Rng, vars: &[Term]) -> Term {
    if !vars.is_empty() && rng.gen_bool(0.5) {
        vars.choose(rng).unwrap().clone()
    } else {
        Term::constant(*CONSTS.choose(rng).unwrap())
    }
}

/// A random first-order atom tree whose leaves are constants or `vars`.
pub fn body(rng: &mut impl Rng, depth: usize, vars: &[Term]) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, vars);
    }
    if rng.gen_bool(0.5) {
        Term::atom(
            *UNARY.choose(rng).unwrap(),
            vec![body(rng, depth - 1, vars)],
        )
    } else {
        Term::atom(
            *BINARY.choose(rng).unwrap(),
            vec![body(rng, depth - 1, vars), body(rng, depth - 1, vars)],
        )
    }
}

fn atom_body(rng: &mut impl Rng, depth: usize, vars: &[Term]) -> Term {
    loop {
        let b = body(rng, depth, vars);
        if matches!(b, Term::Atom(..)) {
            return b;
        }
    }
}

/// A functor/argument pair and the normal form of their application.
#[derive(Clone, Debug)]
pub struct InversePair {
    pub f: Term,
    pub g: Term,
    pub h: Term,
}

/// Pairs in the shapes the operators target: first-order abstraction over
/// a constant, abstraction over a predicate (`λx.λy.p(y,x@y)`), type-raised
/// arguments, and unrelated terms.
pub fn inverse_pair(rng: &mut impl Rng) -> InversePair {
    let x = Term::var("x");
    let y = Term::var("y");
    let (f, g) = match rng.gen_range(0..4) {
        0 => {
            let g = Term::constant(*CONSTS.choose(rng).unwrap());
            (
                Term::lam("x", atom_body(rng, 3, std::slice::from_ref(&x))),
                g,
            )
        }
        1 => {
            let p = *UNARY.choose(rng).unwrap();
            let g = Term::lam("z", Term::atom(p, vec![Term::var("z")]));
            let xy = Term::app(x.clone(), y.clone());
            let b = atom_body(rng, 2, &[xy, y.clone()]);
            (Term::lam("x", Term::lam("y", b)), g)
        }
        2 => {
            let c = Term::constant(*CONSTS.choose(rng).unwrap());
            let g = Term::lam(
                "x",
                Term::atom(*UNARY.choose(rng).unwrap(), vec![Term::var("x")]),
            );
            (Term::lam("v", Term::app(Term::var("v"), c)), g)
        }
        _ => {
            let g = Term::lam("x", atom_body(rng, 2, std::slice::from_ref(&x)));
            (
                Term::lam(
                    "x",
                    atom_body(rng, 2, &[Term::app(x.clone(), Term::constant("a"))]),
                ),
                g,
            )
        }
    };
    let h = invlam::lambda::normalize(&Term::app(f.clone(), g.clone())).unwrap();
    InversePair { f, g, h }
}

/// Lexical options drawn from a small typed pool, for chart tests.
pub fn pool() -> Vec<(Category, Term)> {
    [
        ("NP", "texas"),
        ("NP", "ohio"),
        ("N", "\\x.state(x)"),
        ("N", "\\x.city(x)"),
        ("NP/N", "\\x.x"),
        ("NP/N", "\\f.\\y.the(y,f@y)"),
        ("N/N", "\\f.\\y.largest(y,f@y)"),
        ("N\\N", "\\f.\\y.and(f@y,old(y))"),
        ("(N\\N)/NP", "\\n.\\f.\\y.and(f@y,loc(y,n))"),
        ("S\\NP", "\\x.run(x)"),
        ("(S\\NP)/NP", "\\x.\\y.see(y,x)"),
        ("S/NP", "\\x.answer(x)"),
        ("S/S", "\\p.not(p)"),
    ]
    .iter()
    .map(|(c, s)| (cat(c), t(s)))
    .collect()
}

pub fn leaf_items(options: &[Vec<(Category, Term)>]) -> Vec<Vec<LeafItem>> {
    options
        .iter()
        .enumerate()
        .map(|(i, opts)| {
            opts.iter()
                .map(|(c, s)| LeafItem {
                    word: format!("w{i}"),
                    category: c.clone(),
                    semantics: Some(s.clone()),
                    entry: None,
                    weight: 0.0,
                })
                .collect()
        })
        .collect()
}

/// Every (category, semantics) derivable over the whole span, enumerating
/// bracketings recursively without sharing.
pub fn brute_force(
    options: &[Vec<(Category, Term)>],
    composition: bool,
) -> BTreeSet<(String, String)> {
    fn span(options: &[Vec<(Category, Term)>], composition: bool) -> Vec<(Category, Term)> {
        if options.len() == 1 {
            return options[0].clone();
        }
        let mut rules = vec![Rule::FwdApp, Rule::BwdApp];
        if composition {
            rules.extend([Rule::FwdComp, Rule::BwdComp]);
        }
        let mut out = Vec::new();
        for k in 1..options.len() {
            let left = span(&options[..k], composition);
            let right = span(&options[k..], composition);
            for (lc, ls) in &left {
                for (rc, rs) in &right {
                    for &rule in &rules {
                        if let Some(c) = combine_categories(rule, lc, rc) {
                            if let Some(s) = compose(rule, ls, rs) {
                                out.push((c, s));
                            }
                        }
                    }
                }
            }
        }
        out
    }
    span(options, composition)
        .into_iter()
        .map(|(c, s)| (c.to_string(), s.alpha_key()))
        .collect()
}

pub fn lexicon(entries: &[(&str, &str, &str, f64)]) -> Lexicon {
    let mut lex = Lexicon::new();
    for (w, c, s, wt) in entries {
        lex.insert(LexiconEntry::new(
            w,
            cat(c),
            Some(t(s)),
            *wt,
            Origin::Initial,
        ));
    }
    lex
}

/// Three sentences with ambiguous words, for likelihood tests.
pub fn toy_lexicon() -> Lexicon {
    lexicon(&[
        ("show", "S/NP", "\\x.answer(A,x@A)", 0.2),
        ("the", "NP/N", "\\x.x", 0.05),
        ("big", "N/N", "\\f.\\y.big(y,f@y)", 0.3),
        ("big", "N/N", "\\f.\\y.large(y,f@y)", -0.2),
        ("big", "N/N", "\\f.f", -0.4),
        ("city", "N", "\\x.city(x)", 0.1),
        ("city", "N", "\\x.town(x)", 0.5),
        ("state", "N", "\\x.state(x)", -0.3),
        ("state", "N", "\\x.city(x)", 0.25),
    ])
}

pub fn toy_examples() -> Vec<invlam::learner::TrainingExample> {
    let ex = |s: &str, g: &str| {
        invlam::learner::TrainingExample::new(s.split(' ').map(str::to_string).collect(), t(g))
    };
    vec![
        ex("show the big city", "answer(A,big(A,city(A)))"),
        ex("show the state", "answer(A,state(A))"),
        ex("show the big state", "answer(A,large(A,city(A)))"),
    ]
}

/// Sentences of length 1..=5 with one or two pooled options per token.
pub fn random_options(rng: &mut impl Rng) -> Vec<Vec<(Category, Term)>> {
    let pool = pool();
    let n = rng.gen_range(1..=5);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            pool.choose_multiple(rng, k).cloned().collect()
        })
        .collect()
}
