use std::collections::{HashSet, VecDeque};
use std::fmt;

use super::term::Term;

/// A finite sequence of terms ending in `π0`. The front is the top of the
/// stack; the back is the position adjacent to `π0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Stack(VecDeque<Term>);

impl Stack {
    /// `π0`.
    pub fn empty() -> Self {
        Stack(VecDeque::new())
    }

    /// Builds `t1 · t2 · … · π0` from items listed top first.
    pub fn from_items<I: IntoIterator<Item = Term>>(items: I) -> Self {
        Stack(items.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, t: Term) {
        self.0.push_front(t);
    }

    pub fn pop(&mut self) -> Option<Term> {
        self.0.pop_front()
    }

    pub fn top(&self) -> Option<&Term> {
        self.0.front()
    }

    /// `π^τ`: replaces `π0` by `τ · π0`.
    pub fn push_back(&mut self, t: Term) {
        self.0.push_back(t);
    }

    pub fn pop_back(&mut self) -> Option<Term> {
        self.0.pop_back()
    }

    pub fn back(&self) -> Option<&Term> {
        self.0.back()
    }

    /// Items top first.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Term> + ExactSizeIterator {
        self.0.iter()
    }

    pub fn with_back(mut self, t: Term) -> Self {
        self.push_back(t);
        self
    }

    pub fn pushed(mut self, t: Term) -> Self {
        self.push(t);
        self
    }
}

impl FromIterator<Term> for Stack {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        Stack::from_items(iter)
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.0 {
            write!(f, "{item} · ")?;
        }
        f.write_str("π0")
    }
}

/// `ξ ⋆ π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Process {
    pub head: Term,
    pub stack: Stack,
}

impl Process {
    pub fn new(head: Term, stack: Stack) -> Self {
        Process { head, stack }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.head).chain(self.stack.iter())
    }

    /// Indices of all `h_i` occurring in the head or the stack.
    pub fn h_indices(&self) -> HashSet<u32> {
        let mut seen = HashSet::new();
        let mut found = HashSet::new();
        for t in self.terms() {
            t.visit_shared(&mut seen, &mut |n| {
                if let Term::H(i) = n {
                    found.insert(*i);
                }
            });
        }
        found
    }

    /// Least index `f` such that `h_f` does not occur in the process.
    pub fn fresh_index(&self) -> u32 {
        let used = self.h_indices();
        (0..).find(|i| !used.contains(i)).expect("finitely many constants")
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⋆ {}", self.head, self.stack)
    }
}

pub fn occurs_h(index: u32, p: &Process) -> bool {
    p.terms().any(|t| t.contains_h(index))
}

/// Continuation term: `k_π0 = a`, `k_{t·π} = λx (k_π)(x)t = ((C)(B)k_π)t`,
/// that is `C (B k_π) t`.
pub fn k_term(stack: &Stack) -> Term {
    stack.iter().rev().fold(Term::ABORT, |k, t| {
        Term::app(Term::app(Term::C, Term::app(Term::B, k)), t.clone())
    })
}
