use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::forcing::CondSeq;

/// The instruction alphabet of the machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    B,
    C,
    I,
    K,
    W,
    /// `cc`, call with current continuation.
    Cc,
    /// `a`, abort: jump to the empty stack.
    Abort,
    /// `p`, stop: the only unconditional accepting instruction.
    Stop,
    /// `γ`, three-way fork.
    Fork,
    /// `κ`, introduction of a fresh indexed constant.
    Kappa,
    /// `e`, comparison of two indexed constants.
    E,
    /// `χ`, read the end of the stack.
    Chi,
    /// `χ′`, write at the end of the stack.
    ChiPrime,
    /// `𝔠`, the certificate transformer.
    Frak,
}

impl Instr {
    pub const ALL: [Instr; 14] = [
        Instr::B,
        Instr::C,
        Instr::I,
        Instr::K,
        Instr::W,
        Instr::Cc,
        Instr::Abort,
        Instr::Stop,
        Instr::Fork,
        Instr::Kappa,
        Instr::E,
        Instr::Chi,
        Instr::ChiPrime,
        Instr::Frak,
    ];

    /// Concrete-syntax spelling, as accepted by the parser.
    pub fn name(self) -> &'static str {
        match self {
            Instr::B => "B",
            Instr::C => "C",
            Instr::I => "I",
            Instr::K => "K",
            Instr::W => "W",
            Instr::Cc => "cc",
            Instr::Abort => "a",
            Instr::Stop => "p",
            Instr::Fork => "gamma",
            Instr::Kappa => "kappa",
            Instr::E => "e",
            Instr::Chi => "chi",
            Instr::ChiPrime => "chi'",
            Instr::Frak => "frak-c",
        }
    }

    pub fn from_name(name: &str) -> Option<Instr> {
        Instr::ALL.iter().copied().find(|i| i.name() == name)
    }
}

/// A combinator term. Cloning is cheap: subterms are shared.
// equality is structural, the manual impl only short-cuts shared subterms
#[allow(clippy::derived_hash_with_manual_eq)]
#[derive(Clone, Debug, Eq, Hash)]
pub enum Term {
    Instr(Instr),
    /// Indexed constant `h_i`.
    H(u32),
    /// Oracle constant, `delta` by default.
    Oracle(Arc<str>),
    /// Certificate carrying a condition sequence; only created by the forcing layer.
    Cert(Arc<CondSeq>),
    App(Arc<Term>, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Instr(a), Term::Instr(b)) => a == b,
            (Term::H(a), Term::H(b)) => a == b,
            (Term::Oracle(a), Term::Oracle(b)) => a == b,
            (Term::Cert(a), Term::Cert(b)) => Arc::ptr_eq(a, b) || a == b,
            (Term::App(f, x), Term::App(g, y)) => {
                (Arc::ptr_eq(f, g) || f == g) && (Arc::ptr_eq(x, y) || x == y)
            }
            _ => false,
        }
    }
}

pub const DEFAULT_ORACLE: &str = "delta";

impl Term {
    pub const B: Term = Term::Instr(Instr::B);
    pub const C: Term = Term::Instr(Instr::C);
    pub const I: Term = Term::Instr(Instr::I);
    pub const K: Term = Term::Instr(Instr::K);
    pub const W: Term = Term::Instr(Instr::W);
    pub const CC: Term = Term::Instr(Instr::Cc);
    pub const ABORT: Term = Term::Instr(Instr::Abort);
    pub const STOP: Term = Term::Instr(Instr::Stop);
    pub const FORK: Term = Term::Instr(Instr::Fork);
    pub const KAPPA: Term = Term::Instr(Instr::Kappa);
    pub const E: Term = Term::Instr(Instr::E);
    pub const CHI: Term = Term::Instr(Instr::Chi);
    pub const CHI_PRIME: Term = Term::Instr(Instr::ChiPrime);
    pub const FRAK: Term = Term::Instr(Instr::Frak);

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    /// `(head) a1 a2 … an`, left-associated.
    pub fn apply<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn oracle(name: &str) -> Term {
        Term::Oracle(Arc::from(name))
    }

    pub fn delta() -> Term {
        Term::oracle(DEFAULT_ORACLE)
    }

    pub fn cert(seq: CondSeq) -> Term {
        Term::Cert(Arc::new(seq))
    }

    pub fn is_app(&self) -> bool {
        matches!(self, Term::App(..))
    }

    pub fn as_h(&self) -> Option<u32> {
        match self {
            Term::H(i) => Some(*i),
            _ => None,
        }
    }

    /// Number of `App` nodes, counting shared subterms once per occurrence.
    pub fn app_count(&self) -> usize {
        let mut count = 0;
        let mut todo = vec![self];
        while let Some(t) = todo.pop() {
            if let Term::App(f, x) = t {
                count += 1;
                todo.push(f);
                todo.push(x);
            }
        }
        count
    }

    /// Splits `(h) a1 … an` into `h` and `[a1, …, an]`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, x) = head {
            args.push(&**x);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Visits every node once per distinct shared allocation.
    pub(crate) fn visit_shared(&self, seen: &mut HashSet<*const Term>, f: &mut impl FnMut(&Term)) {
        let mut todo = vec![self];
        while let Some(t) = todo.pop() {
            f(t);
            if let Term::App(a, b) = t {
                for child in [a, b] {
                    if seen.insert(Arc::as_ptr(child)) {
                        todo.push(child);
                    }
                }
            }
        }
    }

    pub fn contains_h(&self, index: u32) -> bool {
        let mut found = false;
        self.visit_shared(&mut HashSet::new(), &mut |t| {
            if t.as_h() == Some(index) {
                found = true;
            }
        });
        found
    }

    pub fn any_node(&self, mut pred: impl FnMut(&Term) -> bool) -> bool {
        let mut found = false;
        self.visit_shared(&mut HashSet::new(), &mut |t| {
            if !found && pred(t) {
                found = true;
            }
        });
        found
    }
}

/// Proof-like terms contain neither `a`, `p`, any `h_i`, nor any oracle constant.
/// Certificates are host values and are excluded as well.
pub fn is_proof_like(t: &Term) -> bool {
    !t.any_node(|n| {
        matches!(
            n,
            Term::Instr(Instr::Abort) | Term::Instr(Instr::Stop) | Term::H(_) | Term::Oracle(_) | Term::Cert(_)
        )
    })
}

fn fmt_atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Instr(i) => f.write_str(i.name()),
        Term::H(i) => write!(f, "h{i}"),
        Term::Oracle(name) if &**name == DEFAULT_ORACLE => f.write_str(DEFAULT_ORACLE),
        Term::Oracle(name) => write!(f, "${name}"),
        Term::Cert(seq) => write!(f, "{{cert {seq}}}"),
        Term::App(..) => {
            f.write_str("(")?;
            fmt::Display::fmt(t, f)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, args) = self.spine();
        fmt_atom(head, f)?;
        for arg in args {
            f.write_str(" ")?;
            fmt_atom(arg, f)?;
        }
        Ok(())
    }
}

/// Canonical concrete syntax; `parse_term(&print_term(t)) == t` for certificate-free terms.
pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// The successor `s = (BW)(B)B`, i.e. `B W (B B)`.
pub fn successor() -> Term {
    Term::app(Term::app(Term::B, Term::W), Term::app(Term::B, Term::B))
}

/// `0 = K I`, `n+1 = s n`.
pub fn numeral(n: u64) -> Term {
    let s = successor();
    (0..n).fold(Term::app(Term::K, Term::I), |acc, _| Term::app(s.clone(), acc))
}
