use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::syntax::Term;

/// λ-terms over the instruction alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Var(Arc<str>),
    Lam(Arc<str>, Arc<LambdaTerm>),
    LApp(Arc<LambdaTerm>, Arc<LambdaTerm>),
    Const(Term),
}

impl LambdaTerm {
    pub fn var(name: &str) -> Self {
        LambdaTerm::Var(Arc::from(name))
    }

    pub fn lam(name: &str, body: LambdaTerm) -> Self {
        LambdaTerm::Lam(Arc::from(name), Arc::new(body))
    }

    pub fn app(f: LambdaTerm, x: LambdaTerm) -> Self {
        LambdaTerm::LApp(Arc::new(f), Arc::new(x))
    }

    /// Application that folds two constants into one constant term, keeping
    /// parsed terms in a canonical shape.
    pub fn app_merged(f: LambdaTerm, x: LambdaTerm) -> Self {
        match (f, x) {
            (LambdaTerm::Const(a), LambdaTerm::Const(b)) => LambdaTerm::Const(Term::app(a, b)),
            (f, x) => LambdaTerm::app(f, x),
        }
    }

    pub fn apply<I: IntoIterator<Item = LambdaTerm>>(head: LambdaTerm, args: I) -> Self {
        args.into_iter().fold(head, LambdaTerm::app)
    }

    /// Nested abstraction `λx1 … λxn. body`.
    pub fn lams(names: &[&str], body: LambdaTerm) -> Self {
        names.iter().rev().fold(body, |b, x| LambdaTerm::lam(x, b))
    }

    pub fn size(&self) -> usize {
        match self {
            LambdaTerm::Var(_) | LambdaTerm::Const(_) => 1,
            LambdaTerm::Lam(_, b) => 1 + b.size(),
            LambdaTerm::LApp(f, x) => 1 + f.size() + x.size(),
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    /// Converts a binder-free, variable-free term. Returns `None` otherwise.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            LambdaTerm::Const(t) => Some(t.clone()),
            LambdaTerm::LApp(f, x) => Some(Term::app(f.to_term()?, x.to_term()?)),
            LambdaTerm::Var(_) | LambdaTerm::Lam(..) => None,
        }
    }

    pub(crate) fn has_free(&self, name: &str) -> bool {
        match self {
            LambdaTerm::Var(x) => &**x == name,
            LambdaTerm::Const(_) => false,
            LambdaTerm::Lam(x, b) => &**x != name && b.has_free(name),
            LambdaTerm::LApp(f, a) => f.has_free(name) || a.has_free(name),
        }
    }
}

fn collect_free(t: &LambdaTerm, bound: &mut Vec<Arc<str>>, out: &mut BTreeSet<String>) {
    match t {
        LambdaTerm::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.to_string());
            }
        }
        LambdaTerm::Const(_) => {}
        LambdaTerm::Lam(x, b) => {
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        LambdaTerm::LApp(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
    }
}

pub fn free_vars(t: &LambdaTerm) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

/// Capture-avoiding substitution `t[u/x]`.
pub fn substitute(t: &LambdaTerm, x: &str, u: &LambdaTerm) -> LambdaTerm {
    match t {
        LambdaTerm::Var(y) if &**y == x => u.clone(),
        LambdaTerm::Var(_) | LambdaTerm::Const(_) => t.clone(),
        LambdaTerm::LApp(f, a) => LambdaTerm::app(substitute(f, x, u), substitute(a, x, u)),
        LambdaTerm::Lam(y, b) => {
            if &**y == x || !b.has_free(x) {
                return t.clone();
            }
            if u.has_free(y) {
                let mut avoid = free_vars(u);
                avoid.extend(free_vars(b));
                avoid.insert(x.to_string());
                let z = fresh_name(y, &avoid);
                let renamed = substitute(b, y, &LambdaTerm::var(&z));
                LambdaTerm::lam(&z, substitute(&renamed, x, u))
            } else {
                LambdaTerm::lam(y, substitute(b, x, u))
            }
        }
    }
}

fn fmt_latom(t: &LambdaTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        LambdaTerm::Var(x) => f.write_str(x),
        LambdaTerm::Const(c) if !c.is_app() => write!(f, "{c}"),
        _ => write!(f, "({t})"),
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTerm::Lam(x, b) => write!(f, "\\{x}. {b}"),
            LambdaTerm::Const(c) => write!(f, "{c}"),
            LambdaTerm::Var(x) => f.write_str(x),
            LambdaTerm::LApp(fun, arg) => {
                match &**fun {
                    LambdaTerm::Lam(..) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                f.write_str(" ")?;
                fmt_latom(arg, f)
            }
        }
    }
}
