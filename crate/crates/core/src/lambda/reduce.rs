use std::collections::BTreeSet;

use super::term::fresh_name;
use super::types::{infer_type, Signature};
use super::{LambdaError, Term};

/// β-steps allowed before normalization gives up.
pub const DEFAULT_STEP_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Normal order: the leftmost-outermost redex first.
    #[default]
    LeftmostOutermost,
    /// Arguments are normalized before they are substituted.
    Innermost,
}

/// Capture-avoiding substitution `t[x := s]`.
pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    let fv = s.free_vars();
    subst(t, x, s, &fv)
}

fn subst(t: &Term, x: &str, s: &Term, fv_s: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Lam(y, body) => {
            if y == x || !body.occurs_free(x) {
                return t.clone();
            }
            if fv_s.contains(y) {
                let mut avoid = body.names();
                avoid.extend(s.names());
                avoid.insert(x.to_string());
                let z = fresh_name(y, &avoid);
                let renamed = subst(body, y, &Term::var(z.clone()), &BTreeSet::from([z.clone()]));
                Term::lam(z, subst(&renamed, x, s, fv_s))
            } else {
                Term::lam(y.clone(), subst(body, x, s, fv_s))
            }
        }
        Term::App(f, a) => Term::app(subst(f, x, s, fv_s), subst(a, x, s, fv_s)),
        Term::Atom(p, args) => Term::atom(
            p.clone(),
            args.iter().map(|a| subst(a, x, s, fv_s)).collect(),
        ),
    }
}

struct Reducer {
    steps: usize,
    limit: usize,
}

impl Reducer {
    fn tick(&mut self) -> Result<(), LambdaError> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(LambdaError::StepLimit { limit: self.limit })
        } else {
            Ok(())
        }
    }

    fn whnf(&mut self, t: &Term) -> Result<Term, LambdaError> {
        let mut cur = t.clone();
        loop {
            let (head, args) = cur.spine();
            let Term::Lam(x, body) = head else {
                return Ok(cur);
            };
            if args.is_empty() {
                return Ok(cur);
            }
            self.tick()?;
            let reduced = substitute(body, x, args[0]);
            let rest: Vec<Term> = args[1..].iter().map(|a| (*a).clone()).collect();
            cur = Term::apps(reduced, rest);
        }
    }

    fn normal_order(&mut self, t: &Term) -> Result<Term, LambdaError> {
        match t {
            Term::Var(_) | Term::Const(_) => Ok(t.clone()),
            Term::Lam(x, b) => Ok(Term::lam(x.clone(), self.normal_order(b)?)),
            Term::Atom(p, args) => Ok(Term::atom(
                p.clone(),
                args.iter()
                    .map(|a| self.normal_order(a))
                    .collect::<Result<_, _>>()?,
            )),
            Term::App(..) => match self.whnf(t)? {
                Term::App(f, a) => Ok(Term::app(self.normal_order(&f)?, self.normal_order(&a)?)),
                other => self.normal_order(&other),
            },
        }
    }

    fn innermost(&mut self, t: &Term) -> Result<Term, LambdaError> {
        match t {
            Term::Var(_) | Term::Const(_) => Ok(t.clone()),
            Term::Lam(x, b) => Ok(Term::lam(x.clone(), self.innermost(b)?)),
            Term::Atom(p, args) => Ok(Term::atom(
                p.clone(),
                args.iter()
                    .map(|a| self.innermost(a))
                    .collect::<Result<_, _>>()?,
            )),
            Term::App(f, a) => {
                let f = self.innermost(f)?;
                let a = self.innermost(a)?;
                match f {
                    Term::Lam(x, body) => {
                        self.tick()?;
                        self.innermost(&substitute(&body, &x, &a))
                    }
                    f => Ok(Term::app(f, a)),
                }
            }
        }
    }
}

/// β-normal form under `strategy`, failing after `limit` reduction steps.
pub fn normalize_with(t: &Term, strategy: Strategy, limit: usize) -> Result<Term, LambdaError> {
    let mut r = Reducer { steps: 0, limit };
    match strategy {
        Strategy::LeftmostOutermost => r.normal_order(t),
        Strategy::Innermost => r.innermost(t),
    }
}

pub fn normalize(t: &Term) -> Result<Term, LambdaError> {
    normalize_with(t, Strategy::LeftmostOutermost, DEFAULT_STEP_LIMIT)
}

/// `f @ g` reduced to β-normal form.
/// Fails when the result applies a constant or atom to something.
pub fn apply(f: &Term, g: &Term) -> Result<Term, LambdaError> {
    let t = normalize(&Term::app(f.clone(), g.clone()))?;
    match stuck_application(&t) {
        Some(bad) => Err(LambdaError::NotApplicable {
            term: bad.to_string(),
        }),
        None => Ok(t),
    }
}

/// The first application whose head is a constant or an atom.
pub fn stuck_application(t: &Term) -> Option<&Term> {
    match t {
        Term::Var(_) | Term::Const(_) => None,
        Term::Lam(_, b) => stuck_application(b),
        Term::Atom(_, args) => args.iter().find_map(stuck_application),
        Term::App(f, a) => {
            if matches!(t.spine().0, Term::Const(_) | Term::Atom(..)) {
                Some(t)
            } else {
                stuck_application(f).or_else(|| stuck_application(a))
            }
        }
    }
}

/// Like [`apply`], but first checks that the application is well typed.
pub fn apply_typed(f: &Term, g: &Term, sig: &Signature) -> Result<Term, LambdaError> {
    infer_type(&Term::app(f.clone(), g.clone()), sig)?;
    apply(f, g)
}
