//! Parser for the λ-term text syntax.
//!
//! ```text
//! expr  ::= '\' ident+ '.' expr | app ('=>' expr)?
//! app   ::= atom+ [lambda]
//! atom  ::= ident | 'A@' ident | '#' name | '$' name | '?' digits | '(' expr ')'
//! ```
//!
//! Application is left-associative and binds tighter than `=>`, which is
//! right-associative; a λ extends as far to the right as possible. The
//! reserved identifiers `Xi L H K S I F bot` denote constants and
//! abbreviations; an identifier is a user constant iff it is declared in the
//! [`ParseEnv`], otherwise a free variable. Abbreviations are expanded while
//! parsing, so the result only contains core syntax.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::sugar;
use crate::term::{Const, Term};

/// Parse error with byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    /// Description.
    pub msg: String,
}

/// Names that parse as user constants.
#[derive(Clone, Debug, Default)]
pub struct ParseEnv {
    /// Declared user constants.
    pub consts: BTreeSet<String>,
}

impl ParseEnv {
    /// Environment declaring the given constants.
    pub fn with_consts<I, S>(names: I) -> ParseEnv
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ParseEnv { consts: names.into_iter().map(Into::into).collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Arrow,
    Ident(String),
    ABase(String),
    Canon(String),
    Ext(String),
    Hole(u32),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '[' | ']' | '>' | ':' | '!' | '.' | '-' | '\'')
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |pos, msg: &str| ParseError { pos, msg: msg.to_string() };
    let take_while = |i: &mut usize, pred: &dyn Fn(char) -> bool| -> String {
        let mut s = String::new();
        while *i < chars.len() && pred(chars[*i].1) {
            s.push(chars[*i].1);
            *i += 1;
        }
        s
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push((pos, Tok::Lambda));
                i += 1;
            }
            '.' => {
                out.push((pos, Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '⊃' => {
                out.push((pos, Tok::Arrow));
                i += 1;
            }
            '=' => {
                if i + 1 < chars.len() && chars[i + 1].1 == '>' {
                    out.push((pos, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(err(pos, "expected '=>'"));
                }
            }
            '#' | '$' => {
                i += 1;
                let name = take_while(&mut i, &is_name_char);
                if name.is_empty() {
                    return Err(err(pos, "empty constant name"));
                }
                out.push((pos, if c == '#' { Tok::Canon(name) } else { Tok::Ext(name) }));
            }
            '?' => {
                i += 1;
                let digits = take_while(&mut i, &|c: char| c.is_ascii_digit());
                let n: u32 = digits.parse().map_err(|_| err(pos, "expected box index"))?;
                if n == 0 {
                    return Err(err(pos, "box indices start at 1"));
                }
                out.push((pos, Tok::Hole(n)));
            }
            c if is_ident_start(c) => {
                let name = take_while(&mut i, &is_ident_char);
                if name == "A" && i < chars.len() && chars[i].1 == '@' {
                    i += 1;
                    let base = take_while(&mut i, &is_ident_char);
                    if base.is_empty() {
                        return Err(err(pos, "expected base type after 'A@'"));
                    }
                    out.push((pos, Tok::ABase(base)));
                } else {
                    out.push((pos, Tok::Ident(name)));
                }
            }
            _ => return Err(err(pos, &format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    env: &'a ParseEnv,
}

/// Head of an application spine before sugar expansion.
enum Head {
    Sugar(&'static str),
    Term(Term),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.offset(), msg: msg.to_string() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let lhs = self.app()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.expr()?;
            return Ok(sugar::imp(&lhs, &rhs));
        }
        Ok(lhs)
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "'\\'")?;
        let mut names = Vec::new();
        while let Some(Tok::Ident(n)) = self.peek() {
            if crate::print::RESERVED.contains(&n.as_str()) {
                return self.err(&format!("reserved word '{n}' cannot be bound"));
            }
            if self.env.consts.contains(n) {
                return self.err(&format!("constant '{n}' cannot be bound"));
            }
            names.push(n.clone());
            self.pos += 1;
        }
        if names.is_empty() {
            return self.err("expected binder name");
        }
        self.expect(Tok::Dot, "'.'")?;
        let mut body = self.expr()?;
        for n in names.iter().rev() {
            body = Term::lam(n, &body);
        }
        Ok(body)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::ABase(_) | Tok::Canon(_) | Tok::Ext(_) | Tok::Hole(_) | Tok::LParen)
        )
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        if !self.starts_atom() {
            return self.err("expected a term");
        }
        let head = self.head()?;
        let mut args = Vec::new();
        loop {
            if self.starts_atom() {
                args.push(self.atom()?);
            } else if self.peek() == Some(&Tok::Lambda) {
                args.push(self.lambda()?);
                break;
            } else {
                break;
            }
        }
        Ok(apply_head(head, args))
    }

    fn head(&mut self) -> Result<Head, ParseError> {
        if let Some(Tok::Ident(n)) = self.peek() {
            let s: Option<&'static str> = match n.as_str() {
                "K" => Some("K"),
                "H" => Some("H"),
                "F" => Some("F"),
                _ => None,
            };
            if let Some(s) = s {
                self.pos += 1;
                return Ok(Head::Sugar(s));
            }
        }
        Ok(Head::Term(self.atom()?))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        Ok(match tok {
            Tok::Ident(n) => match n.as_str() {
                "Xi" => Term::xi(),
                "L" => Term::l(),
                "H" => sugar::h_term(),
                "K" => sugar::k_term(),
                "S" => sugar::s_term(),
                "I" => sugar::i_term(),
                "F" => sugar::f_term(),
                "bot" => sugar::bot(),
                _ if self.env.consts.contains(&n) => Term::cnst(Const::User(n.as_str().into())),
                _ => Term::var(&n),
            },
            Tok::ABase(b) => Term::a(&b),
            Tok::Canon(c) => Term::canon(&c),
            Tok::Ext(c) => Term::ext(&c),
            Tok::Hole(i) => Term::hole(i),
            Tok::LParen => {
                let t = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                t
            }
            _ => {
                self.pos -= 1;
                return self.err("expected a term");
            }
        })
    }
}

fn apply_head(head: Head, args: Vec<Term>) -> Term {
    match head {
        Head::Term(t) => Term::apps(t, args),
        Head::Sugar(s) => {
            let mut it = args.into_iter();
            let base = match s {
                "K" => match it.next() {
                    Some(a) => sugar::k(&a),
                    None => sugar::k_term(),
                },
                "H" => match it.next() {
                    Some(a) => sugar::h(&a),
                    None => sugar::h_term(),
                },
                _ => {
                    let a = it.next();
                    let b = it.next();
                    match (a, b) {
                        (Some(a), Some(b)) => sugar::f(&a, &b),
                        (Some(a), None) => Term::app(sugar::f_term(), a),
                        _ => sugar::f_term(),
                    }
                }
            };
            Term::apps(base, it)
        }
    }
}

/// Parse a term, expanding all abbreviations.
pub fn parse_term(src: &str, env: &ParseEnv) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), env };
    let t = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Parse a term with no declared user constants.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    parse_term(src, &ParseEnv::default())
}

/// Expand the abbreviation layer of a sugared term (alias of [`parse_term`]).
pub fn expand_abbrev(src: &str, env: &ParseEnv) -> Result<Term, ParseError> {
    parse_term(src, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::{print, print_raw};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("f a b"), Term::apps(Term::var("f"), [Term::var("a"), Term::var("b")]));
        assert_eq!(p("a => b => c"), sugar::imp(&Term::var("a"), &sugar::imp(&Term::var("b"), &Term::var("c"))));
        assert_eq!(p("Xi A@b \\x. x"), sugar::xi(&Term::a("b"), &sugar::i_term()));
    }

    #[test]
    fn abbreviations() {
        assert_eq!(p("bot"), Term::apps(Term::xi(), [sugar::h_term(), sugar::i_term()]));
        assert_eq!(p("t1 => t2"), p("Xi (\\x. t1) (\\x. t2)"));
        assert_eq!(p("F t (\\z. q z z)"), p("\\f. Xi t (\\x. q (f x) (f x))"));
        assert_eq!(p("H t"), p("L (K t)"));
        assert_eq!(p("(K) t"), Term::app(sugar::k_term(), Term::var("t")));
    }

    #[test]
    fn signature_consts() {
        let env = ParseEnv::with_consts(["c"]);
        let t = parse_term("c x", &env).unwrap();
        assert_eq!(t, Term::app(Term::user("c"), Term::var("x")));
    }

    #[test]
    fn roundtrips() {
        for s in [
            "\\x. x",
            "H",
            "(H) t",
            "H t",
            "F A@b H",
            "F A@b (F A@b A@b)",
            "\\f. Xi A@b (\\x. g (f x) x)",
            "a => b => c",
            "(a => b) => c",
            "#b:d1 $nu_0 ?1",
            "bot",
            "\\x y. y x",
            "L (\\x y. x)",
        ] {
            let t = p(s);
            assert_eq!(p(&print(&t)), t, "{s} printed {}", print(&t));
            assert_eq!(p(&print_raw(&t)), t, "{s} printed raw {}", print_raw(&t));
        }
    }

    #[test]
    fn capture_renaming_in_printer() {
        let t = p("\\y. x").subst("x", &Term::var("y"));
        assert_eq!(print(&t), "K y");
        assert_eq!(print_raw(&t), "\\y'. y");
    }

    #[test]
    fn errors() {
        assert!(parse("(a").is_err());
        assert!(parse("\\. x").is_err());
        assert!(parse("a )").is_err());
        assert!(parse("\\K. K").is_err());
    }
}
