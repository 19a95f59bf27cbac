use std::sync::Arc;

use thiserror::Error;

use super::lambda::LambdaTerm;
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EliminationOptions {
    /// Contract `λx (f)x` to `f` when `x` does not occur in `f`.
    pub eta: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions { eta: true }
    }
}

/// Binder-free body with free variables, the intermediate form of elimination.
#[derive(Clone, Debug, PartialEq)]
enum Body {
    Var(Arc<str>),
    Const(Term),
    App(Box<Body>, Box<Body>),
}

impl Body {
    fn app(f: Body, x: Body) -> Body {
        match (f, x) {
            (Body::Const(a), Body::Const(b)) => Body::Const(Term::app(a, b)),
            (f, x) => Body::App(Box::new(f), Box::new(x)),
        }
    }

    fn mentions(&self, x: &str) -> bool {
        match self {
            Body::Var(y) => &**y == x,
            Body::Const(_) => false,
            Body::App(f, g) => f.mentions(x) || g.mentions(x),
        }
    }

    fn into_term(self) -> Result<Term, EliminationError> {
        match self {
            Body::Const(t) => Ok(t),
            Body::Var(x) => Err(EliminationError::Unbound(x.to_string())),
            Body::App(f, g) => Ok(Term::app(f.into_term()?, g.into_term()?)),
        }
    }
}

/// `S̃ = B (B W) (B B C)`: `S̃ ⋆ f·g·a·π ≻ f ⋆ a·(g)a·π`.
pub fn s_tilde() -> Term {
    Term::apply(
        Term::B,
        [Term::app(Term::B, Term::W), Term::apply(Term::B, [Term::B, Term::C])],
    )
}

fn k(t: Body) -> Body {
    Body::app(Body::Const(Term::K), t)
}

fn eliminate_var(x: &str, body: Body, opts: EliminationOptions) -> Body {
    if !body.mentions(x) {
        return k(body);
    }
    match body {
        Body::Var(_) => Body::Const(Term::I),
        Body::App(f, g) => {
            let in_f = f.mentions(x);
            let in_g = g.mentions(x);
            // η is skipped for a bare h_i: contracting would turn an abstraction
            // into an indexed constant that `e` can see.
            if opts.eta && !in_f && matches!(&*g, Body::Var(y) if &**y == x) && !matches!(&*f, Body::Const(Term::H(_))) {
                return *f;
            }
            match (in_f, in_g) {
                (true, false) => Body::app(Body::app(Body::Const(Term::C), eliminate_var(x, *f, opts)), *g),
                (false, true) => Body::app(Body::app(Body::Const(Term::B), *f), eliminate_var(x, *g, opts)),
                // `λx (f)x` with `x` in `f` copies the argument: `W ⋆ F·a·π ≻ F ⋆ a·a·π`
                _ if matches!(&*g, Body::Var(y) if &**y == x) => {
                    Body::app(Body::Const(Term::W), eliminate_var(x, *f, opts))
                }
                _ => Body::app(
                    Body::app(Body::Const(s_tilde()), eliminate_var(x, *f, opts)),
                    eliminate_var(x, *g, opts),
                ),
            }
        }
        Body::Const(_) => unreachable!("constants mention no variable"),
    }
}

fn to_body(t: &LambdaTerm, opts: EliminationOptions) -> Body {
    match t {
        LambdaTerm::Var(x) => Body::Var(x.clone()),
        LambdaTerm::Const(c) => Body::Const(c.clone()),
        LambdaTerm::LApp(f, a) => Body::app(to_body(f, opts), to_body(a, opts)),
        LambdaTerm::Lam(x, b) => eliminate_var(x, to_body(b, opts), opts),
    }
}

/// Translates a closed λ-term into a combinator term over `B, C, I, K, W`
/// (plus whatever constants the term embeds), innermost abstraction first.
pub fn abstract_eliminate(t: &LambdaTerm) -> Result<Term, EliminationError> {
    abstract_eliminate_with(t, EliminationOptions::default())
}

pub fn abstract_eliminate_with(t: &LambdaTerm, opts: EliminationOptions) -> Result<Term, EliminationError> {
    to_body(t, opts).into_term()
}

/// Parses and compiles λ syntax in one go. Panics on malformed input; meant
/// for the fixed programs of the prelude and the forcing layer.
pub(crate) fn compile_fixed(src: &str) -> Term {
    let lt = crate::syntax::parse_lambda(src).unwrap_or_else(|e| panic!("built-in program `{src}`: {e}"));
    abstract_eliminate(&lt).unwrap_or_else(|e| panic!("built-in program `{src}`: {e}"))
}
