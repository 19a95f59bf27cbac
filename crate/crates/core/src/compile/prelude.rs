use std::collections::BTreeMap;

use super::eliminate::{abstract_eliminate, compile_fixed};
use super::lambda::LambdaTerm;
use crate::syntax::{numeral, successor, Term};

/// `A = W (B (B W (C B)))`, so that `A ⋆ x·f·π ≻* f ⋆ (x x f)·π`.
fn turing_half() -> Term {
    let inner = Term::apply(Term::B, [Term::W, Term::app(Term::C, Term::B)]);
    Term::app(Term::W, Term::app(Term::B, inner))
}

/// `Y = A A`, with `Y ⋆ ξ·π ≻* ξ ⋆ (Y)ξ·π`.
pub fn y_combinator() -> Term {
    let a = turing_half();
    Term::app(a.clone(), a)
}

/// `θ′ = λxλy (cc) λk ((θ)(k)x)(k)y`.
pub fn theta_prime(theta: &Term) -> Term {
    let v = LambdaTerm::var;
    let body = LambdaTerm::apply(
        LambdaTerm::Const(theta.clone()),
        [LambdaTerm::app(v("k"), v("x")), LambdaTerm::app(v("k"), v("y"))],
    );
    let cc = LambdaTerm::app(LambdaTerm::Const(Term::CC), LambdaTerm::lam("k", body));
    abstract_eliminate(&LambdaTerm::lams(&["x", "y"], cc)).expect("closed")
}

/// Induction realizer `λxλyλzλn (x)(n)yz`.
pub fn ind() -> Term {
    compile_fixed("\\x y z n. x (n y z)")
}

/// Named terms used across the toolkit.
pub fn prelude() -> BTreeMap<&'static str, Term> {
    BTreeMap::from([
        ("zero", numeral(0)),
        ("succ", successor()),
        ("Y", y_combinator()),
        ("ind", ind()),
        ("theta_prime_gamma", theta_prime(&Term::FORK)),
    ])
}
