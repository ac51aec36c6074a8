//! Inverse application: given `H` and `G`, find every `F` with `G@F = H`
//! ([`inverse_r`]) or `F@G = H` ([`inverse_l`]).
//!
//! Candidates are proposed by structural cases over the subterms of `H` and
//! kept only if the directed application β-reduces to `H`, so every returned
//! candidate is a solution. An empty result means no case applied.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::lambda::{
    alpha_eq, apply, fresh_name, normalize, replace, replace_at, subterms, LambdaError, Path, Term,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `F@G = H`
    Left,
    /// `G@F = H`
    Right,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "l",
            Direction::Right => "r",
        })
    }
}

/// Which construction produced a candidate. For [`inverse_l`] the numbers
/// refer to the mirrored cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InverseCase {
    Case1,
    Case2,
    Case3,
    /// The identity meaning assigned to a word that contributes nothing.
    Trivial,
}

impl fmt::Display for InverseCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseCase::Case1 => "case1",
            InverseCase::Case2 => "case2",
            InverseCase::Case3 => "case3",
            InverseCase::Trivial => "trivial",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub term: Term,
    pub case: InverseCase,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseResult {
    pub direction: Direction,
    pub candidates: Vec<Candidate>,
}

impl InverseResult {
    pub fn is_null(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.candidates.iter().map(|c| &c.term)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InverseOptions {
    /// Atoms with more arguments than this are not abstracted over.
    pub max_args: usize,
    /// Bound on the mutual recursion through the `λv.v@J` cases.
    pub max_depth: usize,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions {
            max_args: 6,
            max_depth: 4,
        }
    }
}

pub fn inverse_r(h: &Term, g: &Term) -> Result<InverseResult, LambdaError> {
    inverse_r_with(h, g, &InverseOptions::default())
}

pub fn inverse_l(h: &Term, g: &Term) -> Result<InverseResult, LambdaError> {
    inverse_l_with(h, g, &InverseOptions::default())
}

pub fn inverse_r_with(
    h: &Term,
    g: &Term,
    opts: &InverseOptions,
) -> Result<InverseResult, LambdaError> {
    let h = normalize(h)?;
    let g = normalize(g)?;
    let mut out = Collector::new(&h, &g, Direction::Right);
    Search { opts }.right(&h, &g, 0, &mut out)?;
    Ok(out.finish())
}

pub fn inverse_l_with(
    h: &Term,
    g: &Term,
    opts: &InverseOptions,
) -> Result<InverseResult, LambdaError> {
    let h = normalize(h)?;
    let g = normalize(g)?;
    let mut out = Collector::new(&h, &g, Direction::Left);
    Search { opts }.left(&h, &g, 0, &mut out)?;
    Ok(out.finish())
}

/// True iff the directed application of `f` and `g` β-normalizes to a term
/// α-equivalent to `h`. Exceeding the reduction bound counts as false.
pub fn verify_inverse(h: &Term, g: &Term, f: &Term, direction: Direction) -> bool {
    let applied = match direction {
        Direction::Right => apply(g, f),
        Direction::Left => apply(f, g),
    };
    let target = normalize(h);
    match (applied, target) {
        (Ok(a), Ok(t)) => alpha_eq(&a, &t),
        (Err(e), _) | (_, Err(e)) => {
            log::debug!("verification of {f} against {h} failed: {e}");
            false
        }
    }
}

/// Accumulates verified candidates for the top-level call, deduplicated up to α.
struct Collector<'a> {
    h: &'a Term,
    g: &'a Term,
    direction: Direction,
    seen: HashSet<String>,
    candidates: Vec<Candidate>,
}

impl<'a> Collector<'a> {
    fn new(h: &'a Term, g: &'a Term, direction: Direction) -> Self {
        Collector {
            h,
            g,
            direction,
            seen: HashSet::new(),
            candidates: Vec::new(),
        }
    }

    fn offer(&mut self, f: Term, case: InverseCase) -> bool {
        let key = f.alpha_key();
        if self.seen.contains(&key) {
            return true;
        }
        if !verify_inverse(self.h, self.g, &f, self.direction) {
            return false;
        }
        self.seen.insert(key);
        self.candidates.push(Candidate { term: f, case });
        true
    }

    fn finish(self) -> InverseResult {
        InverseResult {
            direction: self.direction,
            candidates: self.candidates,
        }
    }
}

/// Local result sink for recursive calls, whose own equation differs from the
/// top-level one.
struct Local<'a> {
    h: &'a Term,
    g: &'a Term,
    direction: Direction,
    found: Vec<Term>,
}

trait Sink {
    /// Returns whether the candidate verified.
    fn offer(&mut self, f: Term, case: InverseCase) -> bool;
}

impl Sink for Collector<'_> {
    fn offer(&mut self, f: Term, case: InverseCase) -> bool {
        Collector::offer(self, f, case)
    }
}

impl Sink for Local<'_> {
    fn offer(&mut self, f: Term, _case: InverseCase) -> bool {
        if !verify_inverse(self.h, self.g, &f, self.direction) {
            return false;
        }
        if !self.found.iter().any(|t| alpha_eq(t, &f)) {
            self.found.push(f);
        }
        true
    }
}

struct Search<'o> {
    opts: &'o InverseOptions,
}

/// `λv.v@J` with `v` not free in `J`.
fn raised_argument(g: &Term) -> Option<&Term> {
    let Term::Lam(v, body) = g else { return None };
    let Term::App(head, j) = body.as_ref() else {
        return None;
    };
    match head.as_ref() {
        Term::Var(x) if x == v && !j.occurs_free(v) => Some(j),
        _ => None,
    }
}

/// Ordered selections of `s` distinct indices below `m`, lexicographic.
fn selections(m: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in 0..m {
            if !cur.contains(&i) {
                cur.push(i);
                go(m, s, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if s <= m {
        go(m, s, &mut Vec::new(), &mut out);
    }
    out
}

/// Closed subterms of the atom `j` that lie strictly below its direct
/// arguments.
fn nested_arguments(j: &Term) -> Vec<Term> {
    let Term::Atom(_, args) = j else {
        return Vec::new();
    };
    let mut out: Vec<Term> = Vec::new();
    for a in args {
        for sub in subterms(a) {
            if sub.term != *a
                && sub.term.is_closed()
                && !args.contains(&sub.term)
                && !out.contains(&sub.term)
            {
                out.push(sub.term);
            }
        }
    }
    out
}

/// Lengths of the application spines headed by the free variable `w` in `t`.
fn spine_lengths(t: &Term, w: &str) -> BTreeSet<usize> {
    fn go(t: &Term, w: &str, out: &mut BTreeSet<usize>) {
        match t {
            Term::App(..) => {
                let (head, args) = t.spine();
                if matches!(head, Term::Var(x) if x == w) {
                    out.insert(args.len());
                } else {
                    go(head, w, out);
                }
                for a in args {
                    go(a, w, out);
                }
            }
            Term::Lam(x, b) => {
                if x != w {
                    go(b, w, out);
                }
            }
            Term::Atom(_, args) => args.iter().for_each(|a| go(a, w, out)),
            Term::Var(_) | Term::Const(_) => {}
        }
    }
    let mut out = BTreeSet::new();
    go(t, w, &mut out);
    out
}

fn fresh_vars(avoid: &mut BTreeSet<String>, base: &str, n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| {
            let name = fresh_name(&format!("{base}{i}"), avoid);
            avoid.insert(name.clone());
            name
        })
        .collect()
}

/// `K` with the selected arguments abstracted: every appearance (`all`) or
/// only the argument slots themselves.
fn abstract_args(k: &Term, sel: &[usize], vars: &[String], all: bool) -> Term {
    let Term::Atom(p, args) = k else {
        unreachable!("abstract_args on non-atom")
    };
    if all {
        let from: Vec<Term> = sel.iter().map(|&i| args[i].clone()).collect();
        let to: Vec<Term> = vars.iter().map(Term::var).collect();
        replace(k, &from, &to)
    } else {
        let mut new_args = args.clone();
        for (&i, v) in sel.iter().zip(vars) {
            new_args[i] = Term::var(v);
        }
        Term::atom(p.clone(), new_args)
    }
}

/// `H` with `K` replaced everywhere, and then at each single position if `K`
/// occurs more than once.
fn occurrence_variants(h: &Term, k: &Term, positions: &[Path], by: &Term) -> Vec<Term> {
    let mut out = vec![replace(
        h,
        std::slice::from_ref(k),
        std::slice::from_ref(by),
    )];
    if positions.len() > 1 {
        for p in positions {
            out.push(replace_at(h, std::slice::from_ref(p), by));
        }
    }
    out
}

impl Search<'_> {
    fn right(
        &self,
        h: &Term,
        g: &Term,
        depth: usize,
        out: &mut dyn Sink,
    ) -> Result<(), LambdaError> {
        let mut avoid = h.names();
        avoid.extend(g.names());
        let subs = subterms(h);

        // Case 1: G = λv.v@J  =>  F = Inverse_L(H, J)
        let raised = raised_argument(g);
        if let Some(j) = raised {
            if depth < self.opts.max_depth {
                let mut local = Local {
                    h,
                    g: j,
                    direction: Direction::Left,
                    found: Vec::new(),
                };
                self.left(h, j, depth + 1, &mut local)?;
                for f in local.found {
                    out.offer(f, InverseCase::Case1);
                }
            }
        }

        // Case 2: G = λv.H(J:v)  =>  F = J
        if let Term::Lam(..) = g {
            let v = Term::var(fresh_name("v", &avoid));
            let Term::Var(vname) = &v else { unreachable!() };
            for sub in &subs {
                let all = Term::lam(
                    vname.clone(),
                    replace(h, std::slice::from_ref(&sub.term), std::slice::from_ref(&v)),
                );
                if alpha_eq(&all, g) && out.offer(sub.term.clone(), InverseCase::Case2) {
                    continue;
                }
                if sub.positions.len() > 1 {
                    for p in &sub.positions {
                        let partial =
                            Term::lam(vname.clone(), replace_at(h, std::slice::from_ref(p), &v));
                        if alpha_eq(&partial, g) {
                            out.offer(sub.term.clone(), InverseCase::Case2);
                        }
                    }
                }
            }
        }

        // Case 3: G = λw.H(J(J1..Jm) : w@Jp@..@Jq)  =>  F = λv1..vs.J(J1..Jm : vp..vq)
        if raised.is_none() {
            if let Term::Lam(w, body) = g {
                let lengths = spine_lengths(body, w);
                for sub in &subs {
                    let Term::Atom(_, args) = &sub.term else {
                        continue;
                    };
                    let m = args.len();
                    if m == 0 || m > self.opts.max_args {
                        continue;
                    }
                    for &s in lengths.iter().filter(|&&s| s >= 1 && s <= m) {
                        for sel in selections(m, s) {
                            let applied = Term::apps(
                                Term::var(w.clone()),
                                sel.iter().map(|&i| args[i].clone()),
                            );
                            let shape_ok =
                                occurrence_variants(h, &sub.term, &sub.positions, &applied)
                                    .into_iter()
                                    .any(|body2| alpha_eq(&Term::lam(w.clone(), body2), g));
                            if !shape_ok {
                                continue;
                            }
                            let mut names = avoid.clone();
                            let vars = fresh_vars(&mut names, "v", s);
                            let f_all =
                                Term::lams(&vars, abstract_args(&sub.term, &sel, &vars, true));
                            if !out.offer(f_all, InverseCase::Case3) {
                                let f_slot =
                                    Term::lams(&vars, abstract_args(&sub.term, &sel, &vars, false));
                                out.offer(f_slot, InverseCase::Case3);
                            }
                        }
                    }
                }
                // The single argument of `w` may also sit deeper inside J.
                if lengths.contains(&1) {
                    for sub in &subs {
                        for inner in nested_arguments(&sub.term) {
                            let applied = Term::app(Term::var(w.clone()), inner.clone());
                            let shape_ok =
                                occurrence_variants(h, &sub.term, &sub.positions, &applied)
                                    .into_iter()
                                    .any(|body2| alpha_eq(&Term::lam(w.clone(), body2), g));
                            if shape_ok {
                                let v = fresh_name("v1", &avoid);
                                let f = Term::lam(
                                    v.clone(),
                                    replace(&sub.term, &[inner], &[Term::var(v)]),
                                );
                                out.offer(f, InverseCase::Case3);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn left(
        &self,
        h: &Term,
        g: &Term,
        depth: usize,
        out: &mut dyn Sink,
    ) -> Result<(), LambdaError> {
        let mut avoid = h.names();
        avoid.extend(g.names());
        let subs = subterms(h);
        let g_closed = g.is_closed();

        // Case 1': G is a subterm of H  =>  F = λv.H(G:v)
        let v = fresh_name("v", &avoid);
        for sub in &subs {
            if !crate::lambda::matches_pattern(&sub.term, g, g_closed) {
                continue;
            }
            let all = Term::lam(
                v.clone(),
                replace(h, std::slice::from_ref(g), &[Term::var(v.clone())]),
            );
            if !out.offer(all, InverseCase::Case1) && sub.positions.len() > 1 {
                for p in &sub.positions {
                    let partial = Term::lam(
                        v.clone(),
                        replace_at(h, std::slice::from_ref(p), &Term::var(v.clone())),
                    );
                    out.offer(partial, InverseCase::Case1);
                }
            }
        }

        // Case 2': G = λvp..vq.J(J1..Jm : vp..vq)  =>  F = λw.H(J(J1..Jm) : w@Jp@..@Jq)
        let (binders, _) = g.strip_lams();
        let s = binders.len();
        if s >= 1 {
            let mut names = avoid.clone();
            let vars = fresh_vars(&mut names, "v", s);
            let w = fresh_name("w", &names);
            for sub in &subs {
                let Term::Atom(_, args) = &sub.term else {
                    continue;
                };
                let m = args.len();
                if m == 0 || m > self.opts.max_args || s > m {
                    continue;
                }
                for sel in selections(m, s) {
                    let matches = [true, false].into_iter().any(|all| {
                        alpha_eq(
                            &Term::lams(&vars, abstract_args(&sub.term, &sel, &vars, all)),
                            g,
                        )
                    });
                    if !matches {
                        continue;
                    }
                    let applied =
                        Term::apps(Term::var(w.clone()), sel.iter().map(|&i| args[i].clone()));
                    let mut variants =
                        occurrence_variants(h, &sub.term, &sub.positions, &applied).into_iter();
                    if let Some(first) = variants.next() {
                        if !out.offer(Term::lam(w.clone(), first), InverseCase::Case2) {
                            for partial in variants {
                                out.offer(Term::lam(w.clone(), partial), InverseCase::Case2);
                            }
                        }
                    }
                }
            }
        }

        if s == 1 {
            let w = fresh_name("w", &avoid);
            let v = Term::var(binders[0]);
            for sub in &subs {
                for inner in nested_arguments(&sub.term) {
                    let abstracted = Term::lam(
                        binders[0],
                        replace(
                            &sub.term,
                            std::slice::from_ref(&inner),
                            std::slice::from_ref(&v),
                        ),
                    );
                    if !alpha_eq(&abstracted, g) {
                        continue;
                    }
                    let applied = Term::app(Term::var(w.clone()), inner);
                    let mut variants =
                        occurrence_variants(h, &sub.term, &sub.positions, &applied).into_iter();
                    if let Some(first) = variants.next() {
                        if !out.offer(Term::lam(w.clone(), first), InverseCase::Case2) {
                            for partial in variants {
                                out.offer(Term::lam(w.clone(), partial), InverseCase::Case2);
                            }
                        }
                    }
                }
            }
        }

        // Case 3': G = λv.v@J. Then F = λu.u@(λj.j@X) with J@X = H, or
        // F = λu.u@X with X@J = H.
        if let Some(j) = raised_argument(g) {
            if depth < self.opts.max_depth {
                let mut names = avoid.clone();
                let u = fresh_name("u", &names);
                names.insert(u.clone());
                let jv = fresh_name("j", &names);

                let mut via_r = Local {
                    h,
                    g: j,
                    direction: Direction::Right,
                    found: Vec::new(),
                };
                self.right(h, j, depth + 1, &mut via_r)?;
                for x in via_r.found {
                    let inner = Term::lam(jv.clone(), Term::app(Term::var(jv.clone()), x));
                    out.offer(
                        Term::lam(u.clone(), Term::app(Term::var(u.clone()), inner)),
                        InverseCase::Case3,
                    );
                }

                let mut via_l = Local {
                    h,
                    g: j,
                    direction: Direction::Left,
                    found: Vec::new(),
                };
                self.left(h, j, depth + 1, &mut via_l)?;
                for x in via_l.found {
                    out.offer(
                        Term::lam(u.clone(), Term::app(Term::var(u.clone()), x)),
                        InverseCase::Case3,
                    );
                }
            }
        }
        Ok(())
    }
}
