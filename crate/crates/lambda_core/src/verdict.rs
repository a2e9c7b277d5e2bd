//! Three-valued verdicts with Kleene connectives.

use std::fmt;

/// Outcome of a semi-decidable query under finite budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    /// Definitely holds.
    True,
    /// Definitely fails.
    False,
    /// Not decided within the budgets.
    Unknown,
}

impl Verdict {
    /// Kleene conjunction.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::True, _) | (_, Verdict::True) => Verdict::True,
            (Verdict::False, Verdict::False) => Verdict::False,
            _ => Verdict::Unknown,
        }
    }

    /// Kleene negation.
    pub fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    /// Whether the verdict is `True`.
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    /// Whether the verdict is `False`.
    pub fn is_false(self) -> bool {
        self == Verdict::False
    }

    /// Whether the verdict is definite.
    pub fn is_definite(self) -> bool {
        self != Verdict::Unknown
    }

    /// Kleene conjunction over an iterator, short-circuiting on `False`.
    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        let mut acc = Verdict::True;
        for v in it {
            acc = acc.and(v);
            if acc == Verdict::False {
                break;
            }
        }
        acc
    }

    /// Kleene disjunction over an iterator, short-circuiting on `True`.
    pub fn any<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        let mut acc = Verdict::False;
        for v in it {
            acc = acc.or(v);
            if acc == Verdict::True {
                break;
            }
        }
        acc
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::Verdict::{self, *};

    #[test]
    fn kleene_tables() {
        let all = [True, False, Unknown];
        for a in all {
            for b in all {
                assert_eq!(a.and(b), b.and(a));
                assert_eq!(a.or(b), b.or(a));
                assert_eq!(a.and(b).not(), a.not().or(b.not()));
            }
        }
        assert_eq!(Verdict::all([True, Unknown]), Unknown);
        assert_eq!(Verdict::any([False, Unknown, True]), True);
        assert_eq!(Verdict::any(std::iter::empty()), False);
    }
}
