//! Parser and typechecker for types, terms and formulas.
//!
//! ```text
//! formula ::= ('forall' | 'exists') x:type (',' x:type)* '.' formula
//!           | disj ('->' formula)?
//! disj    ::= conj ('|' conj)*
//! conj    ::= unary ('&' unary)*
//! unary   ::= '~' unary | atom+
//! atom    ::= ident | 'bot' | '(' formula ')'
//! type    ::= tatom ('->' type)?        tatom ::= 'o' | ident | '(' type ')'
//! ```
//! `bot`, `~`, `&`, `|` and `exists` are the usual second-order encodings.

use crate::error::Pred2Error;
use crate::expr::Expr;
use crate::types::{Mode, Signature, SimpleType};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Arrow,
    Colon,
    Dot,
    Comma,
    Not,
    And,
    Or,
    Forall,
    Exists,
    Bot,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, Pred2Error> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '~' | '¬' => Some(Tok::Not),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '⊃' | '→' => Some(Tok::Arrow),
            '∀' => Some(Tok::Forall),
            '∃' => Some(Tok::Exists),
            '⊥' => Some(Tok::Bot),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && i + 1 < chars.len() && chars[i + 1].1 == '>' {
            out.push((pos, Tok::Arrow));
            i += 2;
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((
                pos,
                match s.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(s),
                },
            ));
        } else {
            return Err(Pred2Error::Parse { pos, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// Untyped syntax tree.
#[derive(Clone, Debug)]
enum Raw {
    Name(String),
    App(Box<Raw>, Box<Raw>),
    Imp(Box<Raw>, Box<Raw>),
    Forall(String, SimpleType, Box<Raw>),
    Exists(String, SimpleType, Box<Raw>),
    Bot,
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
}

struct P {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }
    fn err<T>(&self, msg: &str) -> Result<T, Pred2Error> {
        let pos = self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end);
        Err(Pred2Error::Parse { pos, msg: msg.to_string() })
    }
    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, t: Tok, what: &str) -> Result<(), Pred2Error> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn ty(&mut self) -> Result<SimpleType, Pred2Error> {
        let a = match self.peek().cloned() {
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                if n == "o" {
                    SimpleType::O
                } else {
                    SimpleType::base(&n)
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                t
            }
            _ => return self.err("expected a type"),
        };
        if self.eat(&Tok::Arrow) {
            Ok(SimpleType::arrow(a, self.ty()?))
        } else {
            Ok(a)
        }
    }

    fn formula(&mut self) -> Result<Raw, Pred2Error> {
        if let Some(q @ (Tok::Forall | Tok::Exists)) = self.peek().cloned() {
            self.pos += 1;
            let mut binders = Vec::new();
            loop {
                let name = match self.peek().cloned() {
                    Some(Tok::Ident(n)) => n,
                    _ => return self.err("expected a variable"),
                };
                self.pos += 1;
                self.expect(Tok::Colon, "':' and a type annotation")?;
                let t = self.ty()?;
                binders.push((name, t));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Dot, "'.'")?;
            let mut body = self.formula()?;
            for (n, t) in binders.into_iter().rev() {
                body = if q == Tok::Forall {
                    Raw::Forall(n, t, Box::new(body))
                } else {
                    Raw::Exists(n, t, Box::new(body))
                };
            }
            return Ok(body);
        }
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Raw::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Raw, Pred2Error> {
        let mut l = self.conj()?;
        while self.eat(&Tok::Or) {
            let r = self.conj()?;
            l = Raw::Or(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn conj(&mut self) -> Result<Raw, Pred2Error> {
        let mut l = self.unary()?;
        while self.eat(&Tok::And) {
            let r = self.unary()?;
            l = Raw::And(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Raw, Pred2Error> {
        if self.eat(&Tok::Not) {
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        let mut head = self.atom()?;
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::LParen | Tok::Bot)) {
            let a = self.atom()?;
            head = Raw::App(Box::new(head), Box::new(a));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Raw, Pred2Error> {
        match self.peek().cloned() {
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                Ok(Raw::Name(n))
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Raw::Bot)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Forall | Tok::Exists) => self.formula(),
            _ => self.err("expected a term"),
        }
    }
}

/// Parse a type.
pub fn parse_type(src: &str) -> Result<SimpleType, Pred2Error> {
    let mut p = P { toks: lex(src)?, pos: 0, end: src.len() };
    let t = p.ty()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

fn parse_raw(src: &str) -> Result<Raw, Pred2Error> {
    let mut p = P { toks: lex(src)?, pos: 0, end: src.len() };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

struct Checker<'a> {
    sig: &'a Signature,
    mode: Mode,
    bound: Vec<(String, SimpleType)>,
}

impl Checker<'_> {
    fn check_type_ok(&self, t: &SimpleType, ctx: &str) -> Result<(), Pred2Error> {
        let mut bs = std::collections::BTreeSet::new();
        t.bases(&mut bs);
        if let Some(b) = bs.iter().find(|b| !self.sig.base_types.contains(&***b)) {
            return Err(Pred2Error::Type {
                term: ctx.to_string(),
                expected: "a declared base type".into(),
                actual: b.to_string(),
            });
        }
        if self.mode == Mode::Pred2_0 && !t.is_pred2_0() {
            return Err(Pred2Error::Type {
                term: ctx.to_string(),
                expected: "a type of the form o | B | B -> T".into(),
                actual: t.to_string(),
            });
        }
        Ok(())
    }

    fn binder(&mut self, x: &str, t: &SimpleType, body: &Raw) -> Result<Expr, Pred2Error> {
        self.check_type_ok(t, x)?;
        if self.mode == Mode::Pred2_0 && !matches!(t, SimpleType::O | SimpleType::Base(_)) {
            return Err(Pred2Error::Type {
                term: format!("forall {x}:{t}"),
                expected: "a quantifier over a base type or o".into(),
                actual: t.to_string(),
            });
        }
        if self.sig.consts.contains_key(x) {
            return Err(Pred2Error::Type {
                term: x.to_string(),
                expected: "a variable".into(),
                actual: "a constant".into(),
            });
        }
        self.bound.push((x.to_string(), t.clone()));
        let b = self.formula(body);
        self.bound.pop();
        Ok(Expr::forall(x, t.clone(), b?))
    }

    fn formula(&mut self, r: &Raw) -> Result<Expr, Pred2Error> {
        let e = self.expr(r)?;
        if e.ty() != SimpleType::O {
            return Err(Pred2Error::Type { term: e.to_string(), expected: "o".into(), actual: e.ty().to_string() });
        }
        Ok(e)
    }

    fn expr(&mut self, r: &Raw) -> Result<Expr, Pred2Error> {
        match r {
            Raw::Name(n) => {
                if let Some((_, t)) = self.bound.iter().rev().find(|(m, _)| m == n) {
                    return Ok(Expr::var(n, t.clone()));
                }
                if let Some(t) = self.sig.consts.get(n) {
                    self.check_type_ok(t, n)?;
                    return Ok(Expr::cnst(n, t.clone()));
                }
                if let Some(t) = self.sig.vars.get(n) {
                    self.check_type_ok(t, n)?;
                    return Ok(Expr::var(n, t.clone()));
                }
                Err(Pred2Error::Unbound(n.clone()))
            }
            Raw::App(f, a) => {
                let f = self.expr(f)?;
                let a = self.expr(a)?;
                let ft = f.ty();
                let Some((dom, _)) = ft.as_arrow() else {
                    return Err(Pred2Error::Type {
                        term: f.to_string(),
                        expected: "a function type".into(),
                        actual: ft.to_string(),
                    });
                };
                let at = a.ty();
                if self.mode == Mode::Pred2_0 && !at.is_base() {
                    return Err(Pred2Error::Type {
                        term: a.to_string(),
                        expected: "an argument of base type".into(),
                        actual: at.to_string(),
                    });
                }
                if &at != dom {
                    return Err(Pred2Error::Type { term: a.to_string(), expected: dom.to_string(), actual: at.to_string() });
                }
                Ok(Expr::app(f, a))
            }
            Raw::Imp(a, b) => Ok(Expr::imp(self.formula(a)?, self.formula(b)?)),
            Raw::Forall(x, t, b) => self.binder(x, t, b),
            Raw::Exists(x, t, b) => {
                let inner = self.binder(x, t, b)?;
                let (x, t, body) = inner.as_forall().expect("binder builds a quantifier");
                Ok(Expr::exists(x, t.clone(), body.clone()))
            }
            Raw::Bot => Ok(Expr::bot()),
            Raw::Not(a) => Ok(Expr::not(self.formula(a)?)),
            Raw::And(a, b) => Ok(Expr::and(self.formula(a)?, self.formula(b)?)),
            Raw::Or(a, b) => Ok(Expr::or(self.formula(a)?, self.formula(b)?)),
        }
    }
}

/// Parse and typecheck a term (of any type).
pub fn parse_expr(src: &str, sig: &Signature, mode: Mode) -> Result<Expr, Pred2Error> {
    let raw = parse_raw(src)?;
    Checker { sig, mode, bound: Vec::new() }.expr(&raw)
}

/// Parse and typecheck a formula (a term of type `o`).
pub fn parse_formula(src: &str, sig: &Signature, mode: Mode) -> Result<Expr, Pred2Error> {
    let raw = parse_raw(src)?;
    Checker { sig, mode, bound: Vec::new() }.formula(&raw)
}

/// Re-typecheck an already built expression against a signature and mode.
pub fn typecheck(e: &Expr, sig: &Signature, mode: Mode) -> Result<SimpleType, Pred2Error> {
    fn go(e: &Expr, c: &mut Checker<'_>) -> Result<SimpleType, Pred2Error> {
        match e {
            Expr::Var(n, t) => {
                c.check_type_ok(t, n)?;
                if let Some((_, bt)) = c.bound.iter().rev().find(|(m, _)| **m == **n) {
                    if bt != t {
                        return Err(Pred2Error::Type { term: n.to_string(), expected: bt.to_string(), actual: t.to_string() });
                    }
                }
                Ok(t.clone())
            }
            Expr::Const(n, t) => {
                match c.sig.consts.get(&**n) {
                    Some(st) if st == t => {}
                    Some(st) => {
                        return Err(Pred2Error::Type { term: n.to_string(), expected: st.to_string(), actual: t.to_string() })
                    }
                    None => return Err(Pred2Error::Unbound(n.to_string())),
                }
                c.check_type_ok(t, n)?;
                Ok(t.clone())
            }
            Expr::App(f, a) => {
                let ft = go(f, c)?;
                let at = go(a, c)?;
                let Some((dom, cod)) = ft.as_arrow() else {
                    return Err(Pred2Error::Type { term: f.to_string(), expected: "a function type".into(), actual: ft.to_string() });
                };
                if c.mode == Mode::Pred2_0 && !at.is_base() {
                    return Err(Pred2Error::Type {
                        term: a.to_string(),
                        expected: "an argument of base type".into(),
                        actual: at.to_string(),
                    });
                }
                if &at != dom {
                    return Err(Pred2Error::Type { term: a.to_string(), expected: dom.to_string(), actual: at.to_string() });
                }
                Ok(cod.clone())
            }
            Expr::Imp(a, b) => {
                for x in [a, b] {
                    let t = go(x, c)?;
                    if t != SimpleType::O {
                        return Err(Pred2Error::Type { term: x.to_string(), expected: "o".into(), actual: t.to_string() });
                    }
                }
                Ok(SimpleType::O)
            }
            Expr::Forall(x, t, b) => {
                c.check_type_ok(t, x)?;
                if c.mode == Mode::Pred2_0 && !matches!(t, SimpleType::O | SimpleType::Base(_)) {
                    return Err(Pred2Error::Type {
                        term: format!("forall {x}:{t}"),
                        expected: "a quantifier over a base type or o".into(),
                        actual: t.to_string(),
                    });
                }
                c.bound.push((x.to_string(), t.clone()));
                let bt = go(b, c);
                c.bound.pop();
                let bt = bt?;
                if bt != SimpleType::O {
                    return Err(Pred2Error::Type { term: b.to_string(), expected: "o".into(), actual: bt.to_string() });
                }
                Ok(SimpleType::O)
            }
        }
    }
    go(e, &mut Checker { sig, mode, bound: Vec::new() })
}
