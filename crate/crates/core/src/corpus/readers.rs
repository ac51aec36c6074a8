//! Readers for gold semantic representations: Prolog-style GEOQUERY terms
//! and CLANG s-expressions. Both produce atom trees with constants at the
//! leaves.

use crate::lambda::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at {pos}: {message}")]
pub struct ReadError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ReadError> {
    Err(ReadError {
        pos,
        message: message.into(),
    })
}

struct Cursor {
    chars: Vec<(usize, char)>,
    i: usize,
    len: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            i: 0,
            len: src.len(),
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.len, |(p, _)| *p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|(_, c)| *c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            s.push(c);
            self.i += 1;
        }
        s
    }

    fn quoted(&mut self, quote: char) -> Result<String, ReadError> {
        let start = self.pos();
        self.i += 1;
        let mut s = String::new();
        loop {
            match self.peek() {
                None => return err(start, "unterminated quoted name"),
                Some('\\') => {
                    self.i += 1;
                    if let Some(c) = self.peek() {
                        s.push(c);
                        self.i += 1;
                    }
                }
                Some(c) if c == quote => {
                    self.i += 1;
                    return Ok(s);
                }
                Some(c) => {
                    s.push(c);
                    self.i += 1;
                }
            }
        }
    }

    fn finish(&mut self) -> Result<(), ReadError> {
        self.skip_ws();
        if self.i == self.chars.len() {
            Ok(())
        } else {
            err(self.pos(), "trailing input")
        }
    }
}

/// Reads a Prolog-style term. `(a,b)` is a conjunction `and(a,b)`, `\+ t`
/// is `not(t)`, variables and quoted atoms become constants.
pub fn parse_geo(text: &str) -> Result<Term, ReadError> {
    let mut c = Cursor::new(text);
    let t = geo_term(&mut c)?;
    c.eat('.');
    c.finish()?;
    Ok(t)
}

fn geo_args(c: &mut Cursor) -> Result<Vec<Term>, ReadError> {
    let mut args = vec![geo_term(c)?];
    while c.eat(',') {
        args.push(geo_term(c)?);
    }
    if !c.eat(')') {
        return err(c.pos(), "expected ')' or ','");
    }
    Ok(args)
}

fn geo_term(c: &mut Cursor) -> Result<Term, ReadError> {
    c.skip_ws();
    let pos = c.pos();
    match c.peek() {
        Some('(') => {
            c.i += 1;
            let mut args = geo_args(c)?;
            Ok(if args.len() == 1 {
                args.remove(0)
            } else {
                Term::atom("and", args)
            })
        }
        Some('\\') => {
            c.i += 1;
            if c.peek() != Some('+') {
                return err(pos, "expected '\\+'");
            }
            c.i += 1;
            Ok(Term::atom("not", vec![geo_term(c)?]))
        }
        Some(q @ ('\'' | '"')) => Ok(Term::constant(c.quoted(q)?)),
        Some(ch) if ch.is_alphanumeric() || ch == '_' || ch == '-' || ch == '.' => {
            let name =
                c.take_while(|ch| ch.is_alphanumeric() || ch == '_' || ch == '-' || ch == '.');
            let name = name.trim_end_matches('.').to_string();
            if name.is_empty() {
                return err(pos, "expected a term");
            }
            if c.peek() == Some('(') {
                c.i += 1;
                let args = geo_args(c)?;
                Ok(Term::atom(name, args))
            } else {
                Ok(Term::constant(name))
            }
        }
        Some(ch) => err(pos, format!("unexpected '{ch}'")),
        None => err(pos, "unexpected end of input"),
    }
}

/// Reads a CLANG s-expression. `(head a b)` with a symbol head is an atom;
/// a list with a non-symbol head is `seq(...)`, `{...}` is `set(...)`;
/// symbols, numbers and strings are constants.
pub fn parse_clang(text: &str) -> Result<Term, ReadError> {
    let mut c = Cursor::new(text);
    let t = sexpr(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn sexpr(c: &mut Cursor) -> Result<Term, ReadError> {
    c.skip_ws();
    let pos = c.pos();
    match c.peek() {
        Some(open @ ('(' | '{')) => {
            c.i += 1;
            let close = if open == '(' { ')' } else { '}' };
            let mut items = Vec::new();
            loop {
                c.skip_ws();
                match c.peek() {
                    Some(ch) if ch == close => {
                        c.i += 1;
                        break;
                    }
                    None => return err(pos, format!("unclosed '{open}'")),
                    _ => items.push(sexpr(c)?),
                }
            }
            if open == '{' {
                return Ok(Term::atom("set", items));
            }
            match items.first() {
                Some(Term::Const(head))
                    if !crate::lambda::is_number(head) && !head.contains(' ') =>
                {
                    let head = head.clone();
                    Ok(Term::atom(head, items.into_iter().skip(1).collect()))
                }
                _ => Ok(Term::atom("seq", items)),
            }
        }
        Some('"') => Ok(Term::constant(c.quoted('"')?)),
        Some(ch) if ch == ')' || ch == '}' => err(pos, format!("unexpected '{ch}'")),
        Some(_) => {
            let s = c.take_while(|ch| !ch.is_whitespace() && !"(){}\"".contains(ch));
            Ok(Term::constant(s))
        }
        None => err(pos, "unexpected end of input"),
    }
}
