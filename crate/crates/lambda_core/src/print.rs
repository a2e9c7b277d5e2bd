//! Pretty printers.
//!
//! [`print`] re-sugars `H`, `H t`, `K t`, `⊃`, `⊥`, `I`, `K`, `S`, `F` and
//! `F t₁ t₂` whenever re-expansion yields exactly the same term; [`print_raw`]
//! prints only core syntax. Both outputs re-parse to the printed term (given
//! the same set of declared constants).

use std::collections::BTreeSet;

use crate::sugar;
use crate::term::{Const, Kind, Term};

/// Identifiers with a fixed meaning in the term syntax.
pub const RESERVED: [&str; 8] = ["Xi", "L", "H", "K", "S", "I", "F", "bot"];

/// Printer configuration.
#[derive(Clone, Debug, Default)]
pub struct Printer {
    /// Re-sugar abbreviations.
    pub sugar: bool,
    /// Extra names binders must avoid (e.g. declared constants).
    pub avoid: BTreeSet<String>,
}

/// Print with re-sugaring.
pub fn print(t: &Term) -> String {
    Printer { sugar: true, avoid: BTreeSet::new() }.print(t)
}

/// Print core syntax only.
pub fn print_raw(t: &Term) -> String {
    Printer { sugar: false, avoid: BTreeSet::new() }.print(t)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Top,
    App,
    Atom,
}

impl Printer {
    /// Print a term.
    pub fn print(&self, t: &Term) -> String {
        let mut used: BTreeSet<String> = t.free_vars().iter().map(|s| s.to_string()).collect();
        for c in t.constants() {
            if let Const::User(n) = c {
                used.insert(n.to_string());
            }
        }
        used.extend(self.avoid.iter().cloned());
        let mut env = Vec::new();
        let mut out = String::new();
        self.go(t, Level::Top, &used, &mut env, &mut out);
        out
    }

    fn exact_name(&self, t: &Term) -> Option<&'static str> {
        if !self.sugar || !t.is_locally_closed() {
            return None;
        }
        let table: [(fn() -> Term, &'static str); 6] = [
            (sugar::bot, "bot"),
            (sugar::i_term, "I"),
            (sugar::k_term, "K"),
            (sugar::s_term, "S"),
            (sugar::h_term, "H"),
            (sugar::f_term, "F"),
        ];
        table.iter().find(|(mk, _)| mk() == *t).map(|(_, n)| *n)
    }

    fn go(&self, t: &Term, lvl: Level, used: &BTreeSet<String>, env: &mut Vec<String>, out: &mut String) {
        if let Some(n) = self.exact_name(t) {
            out.push_str(n);
            return;
        }
        if self.sugar {
            if let Some((a, b)) = sugar::imp_shape(t) {
                self.paren(lvl > Level::Top, out, |out| {
                    self.go(&a, Level::App, used, env, out);
                    out.push_str(" => ");
                    self.go(&b, Level::Top, used, env, out);
                });
                return;
            }
            if let Some(a) = sugar::h_shape(t) {
                self.prefixed("H", &[a], lvl, used, env, out);
                return;
            }
            if let Some((a, b)) = sugar::f_shapes(t).into_iter().next() {
                self.prefixed("F", &[a, b], lvl, used, env, out);
                return;
            }
            if let Some(a) = sugar::k_shape(t) {
                self.prefixed("K", &[a], lvl, used, env, out);
                return;
            }
        }
        match t.kind() {
            Kind::BVar(i) => {
                let idx = env.len().checked_sub(1 + *i as usize);
                match idx {
                    Some(k) => out.push_str(&env[k]),
                    None => out.push_str(&format!("^{i}")),
                }
            }
            Kind::FVar(n) => out.push_str(n),
            Kind::Const(c) => out.push_str(&c.spelling()),
            Kind::App(..) => {
                let (head, args) = t.spine();
                self.paren(lvl > Level::App, out, |out| {
                    // Heads with an applied sugar form must be parenthesised
                    // so that they re-parse as the unapplied constant.
                    let head_needs_paren = matches!(self.exact_name(&head), Some("K" | "H" | "F"));
                    if head_needs_paren {
                        out.push('(');
                        self.go(&head, Level::Top, used, env, out);
                        out.push(')');
                    } else {
                        self.go(&head, Level::Atom, used, env, out);
                    }
                    for a in &args {
                        out.push(' ');
                        self.go(a, Level::Atom, used, env, out);
                    }
                });
            }
            Kind::Lam(..) => {
                self.paren(lvl > Level::Top, out, |out| {
                    out.push('\\');
                    let mut cur = t.clone();
                    let mut pushed = 0;
                    let mut first = true;
                    // Collect consecutive binders unless the body is sugar.
                    while let Kind::Lam(n, b) = cur.kind() {
                        if !first && (self.exact_name(&cur).is_some() || (self.sugar && self.is_sugar(&cur))) {
                            break;
                        }
                        let name = self.pick_name(n, used, env);
                        if !first {
                            out.push(' ');
                        }
                        out.push_str(&name);
                        env.push(name);
                        pushed += 1;
                        first = false;
                        let next = b.clone();
                        cur = next;
                    }
                    out.push_str(". ");
                    self.go(&cur, Level::Top, used, env, out);
                    for _ in 0..pushed {
                        env.pop();
                    }
                });
            }
        }
    }

    fn is_sugar(&self, t: &Term) -> bool {
        sugar::k_shape(t).is_some() || !sugar::f_shapes(t).is_empty()
    }

    fn prefixed(&self, head: &str, args: &[Term], lvl: Level, used: &BTreeSet<String>, env: &mut Vec<String>, out: &mut String) {
        self.paren(lvl > Level::App, out, |out| {
            out.push_str(head);
            for a in args {
                out.push(' ');
                self.go(a, Level::Atom, used, env, out);
            }
        });
    }

    fn paren(&self, needed: bool, out: &mut String, body: impl FnOnce(&mut String)) {
        if needed {
            out.push('(');
        }
        body(out);
        if needed {
            out.push(')');
        }
    }

    fn pick_name(&self, hint: &str, used: &BTreeSet<String>, env: &[String]) -> String {
        let mut base: String = hint
            .chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
            .collect();
        if base.is_empty() || base == "_" || !base.chars().next().unwrap().is_ascii_alphabetic() && !base.starts_with('_') {
            base = "x".into();
        }
        let mut name = base;
        while used.contains(&name) || env.contains(&name) || RESERVED.contains(&name.as_str()) {
            name.push('\'');
        }
        name
    }
}
