//! Concrete syntax for terms.
//!
//! ```text
//! term   := lambda | app
//! lambda := '\' IDENT '.' term
//! app    := operand ('@' operand)*        left-associative
//! operand:= '(' term ')' | NAME '(' term (',' term)* ')' | NAME
//! ```
//!
//! A lambda may appear as the last operand of an application and then
//! extends as far right as possible. `λ` is accepted in place of `\`.
//! Names that are not plain identifiers or numbers are written in single
//! quotes, e.g. `'new york'`.

use super::types::Signature;
use super::{LambdaError, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    At,
    LParen,
    RParen,
    Comma,
    Name { text: String, quoted: bool },
}

pub(crate) fn is_number(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut parts = body.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    !int.is_empty()
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.chars().all(|c| c.is_ascii_digit()))
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, LambdaError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                toks.push((pos, Tok::Lambda));
                i += 1;
            }
            '.' => {
                toks.push((pos, Tok::Dot));
                i += 1;
            }
            '@' => {
                toks.push((pos, Tok::At));
                i += 1;
            }
            '(' => {
                toks.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((pos, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((pos, Tok::Comma));
                i += 1;
            }
            '\'' => {
                let mut name = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(LambdaError::Syntax {
                                pos,
                                message: "unterminated quoted name".into(),
                            })
                        }
                        Some((_, '\\')) => {
                            if let Some((_, e)) = chars.get(i + 1) {
                                name.push(*e);
                            }
                            i += 2;
                        }
                        Some((_, '\'')) => {
                            i += 1;
                            break;
                        }
                        Some((_, ch)) => {
                            name.push(*ch);
                            i += 1;
                        }
                    }
                }
                toks.push((
                    pos,
                    Tok::Name {
                        text: name,
                        quoted: true,
                    },
                ));
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' => {
                let start = i;
                if c == '-' {
                    if !chars.get(i + 1).is_some_and(|(_, d)| d.is_ascii_digit()) {
                        return Err(LambdaError::Syntax {
                            pos,
                            message: "'-' must start a number".into(),
                        });
                    }
                    i += 1;
                }
                while chars
                    .get(i)
                    .is_some_and(|(_, d)| d.is_ascii_alphanumeric() || *d == '_')
                {
                    i += 1;
                }
                let mut word: String = chars[start..i].iter().map(|(_, ch)| *ch).collect();
                // fractional part of a number
                if is_number(&word)
                    && chars.get(i).is_some_and(|(_, d)| *d == '.')
                    && chars.get(i + 1).is_some_and(|(_, d)| d.is_ascii_digit())
                {
                    i += 1;
                    while chars.get(i).is_some_and(|(_, d)| d.is_ascii_digit()) {
                        i += 1;
                    }
                    word = chars[start..i].iter().map(|(_, ch)| *ch).collect();
                }
                if word.starts_with('-') && !is_number(&word) {
                    return Err(LambdaError::Syntax {
                        pos,
                        message: format!("malformed number '{word}'"),
                    });
                }
                toks.push((
                    pos,
                    Tok::Name {
                        text: word,
                        quoted: false,
                    },
                ));
            }
            other => {
                return Err(LambdaError::Syntax {
                    pos,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    bound: Vec<String>,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, LambdaError> {
        Err(LambdaError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), LambdaError> {
        if self.peek() == Some(&tok) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn term(&mut self) -> Result<Term, LambdaError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut t = self.operand()?;
        while self.peek() == Some(&Tok::At) {
            self.i += 1;
            if self.peek() == Some(&Tok::Lambda) {
                let l = self.lambda()?;
                return Ok(Term::app(t, l));
            }
            let arg = self.operand()?;
            t = Term::app(t, arg);
        }
        Ok(t)
    }

    fn lambda(&mut self) -> Result<Term, LambdaError> {
        self.expect(Tok::Lambda, "'\\'")?;
        let binder = match self.peek() {
            Some(Tok::Name {
                text,
                quoted: false,
            }) if !is_number(text) => text.clone(),
            _ => return self.err("expected binder name"),
        };
        self.i += 1;
        self.expect(Tok::Dot, "'.' after binder")?;
        self.bound.push(binder.clone());
        let body = self.term();
        self.bound.pop();
        Ok(Term::lam(binder, body?))
    }

    fn operand(&mut self) -> Result<Term, LambdaError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.i += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::Name { text, quoted }) => {
                let pos = self.pos();
                self.i += 1;
                if self.peek() == Some(&Tok::LParen) {
                    self.i += 1;
                    let mut args = Vec::new();
                    if self.peek() != Some(&Tok::RParen) {
                        args.push(self.term()?);
                        while self.peek() == Some(&Tok::Comma) {
                            self.i += 1;
                            args.push(self.term()?);
                        }
                    }
                    self.expect(Tok::RParen, "')' closing argument list")?;
                    // a bound head is ordinary application: x(a,b) = x@a@b
                    if !quoted && self.bound.contains(&text) {
                        return Ok(Term::apps(Term::var(text), args));
                    }
                    return Ok(Term::atom(text, args));
                }
                if !quoted && self.bound.contains(&text) {
                    return Ok(Term::var(text));
                }
                if quoted || is_number(&text) || self.sig.admits(&text) {
                    Ok(Term::constant(text))
                } else {
                    Err(LambdaError::Unbound { name: text, pos })
                }
            }
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a term. Unbound names become constants when the signature admits
/// them (see [`Signature::admits`]).
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, LambdaError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
        bound: Vec::new(),
        sig,
    };
    let t = p.term()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = LambdaError;

    /// Parses under the dynamic signature.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s, &Signature::dynamic())
    }
}
