use std::collections::BTreeSet;
use std::fmt;

/// Path from the root of a term to one of its nodes.
///
/// Child indices: the body of an abstraction is `0`; the functor and argument
/// of an application are `0` and `1`; atom arguments are numbered from `0`.
pub type Path = Vec<usize>;

/// A λ-calculus expression.
///
/// `Var` is a variable introduced by a binder (or a free variable of an open
/// subterm). Everything else that is named but never bound is a `Const`,
/// including corpus variables such as the `A` in `answer(A, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Atom(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn lam(binder: impl Into<String>, body: Term) -> Term {
        Term::Lam(binder.into(), Box::new(body))
    }

    pub fn app(functor: Term, argument: Term) -> Term {
        Term::App(Box::new(functor), Box::new(argument))
    }

    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Atom(predicate.into(), args)
    }

    /// `λv1. ... λvn. body`
    pub fn lams<S: AsRef<str>>(binders: &[S], body: Term) -> Term {
        binders
            .iter()
            .rev()
            .fold(body, |acc, b| Term::lam(b.as_ref(), acc))
    }

    /// `head @ a1 @ ... @ an`, left-nested.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// The identity `λx.x`.
    pub fn identity() -> Term {
        Term::lam("x", Term::var("x"))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Term::Lam(x, body) if matches!(body.as_ref(), Term::Var(y) if x == y))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(_) => Vec::new(),
            Term::Lam(_, b) => vec![b.as_ref()],
            Term::App(f, a) => vec![f.as_ref(), a.as_ref()],
            Term::Atom(_, args) => args.iter().collect(),
        }
    }

    pub fn child(&self, index: usize) -> Option<&Term> {
        match (self, index) {
            (Term::Lam(_, b), 0) => Some(b),
            (Term::App(f, _), 0) => Some(f),
            (Term::App(_, a), 1) => Some(a),
            (Term::Atom(_, args), i) => args.get(i),
            _ => None,
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        path.iter().try_fold(self, |t, &i| t.child(i))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(&x.as_str()) {
                        out.insert(x.clone());
                    }
                }
                Term::Const(_) => {}
                Term::Lam(x, b) => {
                    bound.push(x);
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Term::Atom(_, args) => args.iter().for_each(|a| go(a, bound, out)),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn occurs_free(&self, name: &str) -> bool {
        match self {
            Term::Var(x) => x == name,
            Term::Const(_) => false,
            Term::Lam(x, b) => x != name && b.occurs_free(name),
            Term::App(f, a) => f.occurs_free(name) || a.occurs_free(name),
            Term::Atom(_, args) => args.iter().any(|a| a.occurs_free(name)),
        }
    }

    /// Every identifier in the term: binders, variables, constants and predicates.
    pub fn names(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) | Term::Const(x) => {
                    out.insert(x.clone());
                }
                Term::Lam(x, b) => {
                    out.insert(x.clone());
                    go(b, out);
                }
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Atom(p, args) => {
                    out.insert(p.clone());
                    args.iter().for_each(|a| go(a, out));
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Names of constants and predicates, i.e. the non-logical vocabulary.
    pub fn constants(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    out.insert(c.clone());
                }
                Term::Lam(_, b) => go(b, out),
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Atom(p, args) => {
                    out.insert(p.clone());
                    args.iter().for_each(|a| go(a, out));
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Peels leading abstractions: `λa.λb.body` gives `([a, b], body)`.
    pub fn strip_lams(&self) -> (Vec<&str>, &Term) {
        let mut binders = Vec::new();
        let mut t = self;
        while let Term::Lam(x, b) = t {
            binders.push(x.as_str());
            t = b;
        }
        (binders, t)
    }

    /// Head and arguments of an application spine: `h @ a @ b` gives `(h, [a, b])`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// A string that is identical for two terms exactly when they are
    /// α-equivalent. Bound variables are replaced by binder distances.
    pub fn alpha_key(&self) -> String {
        fn go<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut String) {
            match t {
                Term::Var(x) => match bound.iter().rev().position(|b| *b == x) {
                    Some(i) => {
                        out.push('#');
                        out.push_str(&i.to_string());
                    }
                    None => {
                        out.push('$');
                        write_name(out, x);
                    }
                },
                Term::Const(c) => write_name(out, c),
                Term::Lam(x, b) => {
                    out.push_str("\\.");
                    bound.push(x);
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    out.push('(');
                    go(f, bound, out);
                    out.push('@');
                    go(a, bound, out);
                    out.push(')');
                }
                Term::Atom(p, args) => {
                    write_name(out, p);
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        go(a, bound, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// True iff `a` and `b` are identical up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(
        a: &'a Term,
        b: &'a Term,
        env_a: &mut Vec<&'a str>,
        env_b: &mut Vec<&'a str>,
    ) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let ix = env_a.iter().rev().position(|v| *v == x);
                let iy = env_b.iter().rev().position(|v| *v == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Lam(x, bx), Term::Lam(y, by)) => {
                env_a.push(x);
                env_b.push(y);
                let r = go(bx, by, env_a, env_b);
                env_a.pop();
                env_b.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, env_a, env_b) && go(a1, a2, env_a, env_b)
            }
            (Term::Atom(p, xs), Term::Atom(q, ys)) => {
                p == q
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| go(x, y, env_a, env_b))
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// Picks a variable name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded name supply")
}

pub(crate) fn is_plain_ident(name: &str) -> bool {
    super::syntax::is_number(name)
        || (!name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
}

fn write_name(out: &mut String, name: &str) {
    if is_plain_ident(name) {
        out.push_str(name);
    } else {
        out.push('\'');
        for c in name.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        print_term(self, &mut out);
        f.write_str(&out)
    }
}

fn print_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) | Term::Const(x) => write_name(out, x),
        Term::Lam(x, b) => {
            out.push('\\');
            write_name(out, x);
            out.push('.');
            print_term(b, out);
        }
        Term::App(func, arg) => {
            if matches!(func.as_ref(), Term::Lam(..)) {
                out.push('(');
                print_term(func, out);
                out.push(')');
            } else {
                print_term(func, out);
            }
            out.push('@');
            if matches!(arg.as_ref(), Term::Lam(..) | Term::App(..)) {
                out.push('(');
                print_term(arg, out);
                out.push(')');
            } else {
                print_term(arg, out);
            }
        }
        Term::Atom(p, args) => {
            write_name(out, p);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                print_term(a, out);
            }
            out.push(')');
        }
    }
}
