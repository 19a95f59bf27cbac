use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::compile::{abstract_eliminate, LambdaTerm};
use crate::syntax::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `O_∈`
    In,
    /// `O_⊂`
    Sub,
}

/// Implication skeleton over the two atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PropStructure {
    Atom(Atom),
    Imp(Box<PropStructure>, Box<PropStructure>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad propositional structure at offset {position}: {message}")]
pub struct PropParseError {
    pub position: usize,
    pub message: String,
}

impl PropStructure {
    pub fn imp(a: PropStructure, b: PropStructure) -> Self {
        PropStructure::Imp(Box::new(a), Box::new(b))
    }

    /// Parses `O_∈`/`O_in`, `O_⊂`/`O_sub`, `→`/`->` (right associative) and parentheses.
    pub fn parse(src: &str) -> Result<Self, PropParseError> {
        let mut p = PropParser { src, pos: 0 };
        let s = p.imp()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(s)
    }

    /// Nesting depth; an atom has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            PropStructure::Atom(_) => 0,
            PropStructure::Imp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Self {
        if depth == 0 || rng.gen_ratio(1, 3) {
            return PropStructure::Atom(if rng.gen() { Atom::In } else { Atom::Sub });
        }
        PropStructure::imp(Self::random(rng, depth - 1), Self::random(rng, depth - 1))
    }
}

struct PropParser<'a> {
    src: &'a str,
    pos: usize,
}

impl PropParser<'_> {
    fn err(&self, message: &str) -> PropParseError {
        PropParseError { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<PropStructure, PropParseError> {
        let lhs = self.atom()?;
        if self.eat("→") || self.eat("->") {
            let rhs = self.imp()?;
            return Ok(PropStructure::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<PropStructure, PropParseError> {
        if self.eat("(") {
            let inner = self.imp()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(inner);
        }
        for (tok, atom) in [("O_∈", Atom::In), ("O_in", Atom::In), ("O_⊂", Atom::Sub), ("O_sub", Atom::Sub)] {
            if self.eat(tok) {
                return Ok(PropStructure::Atom(atom));
            }
        }
        Err(self.err("expected an atom or `(`"))
    }
}

impl fmt::Display for PropStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropStructure::Atom(Atom::In) => f.write_str("O_∈"),
            PropStructure::Atom(Atom::Sub) => f.write_str("O_⊂"),
            PropStructure::Imp(a, b) => {
                if matches!(**a, PropStructure::Imp(..)) {
                    write!(f, "({a})→{b}")
                } else {
                    write!(f, "{a}→{b}")
                }
            }
        }
    }
}

/// Per-atom base pairs `(𝔮, 𝔮′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseTerms {
    pub on_in: (Term, Term),
    pub on_sub: (Term, Term),
}

impl Default for BaseTerms {
    /// Opaque named constants standing for the base realizers.
    fn default() -> Self {
        BaseTerms {
            on_in: (Term::oracle("q_in"), Term::oracle("qp_in")),
            on_sub: (Term::oracle("q_sub"), Term::oracle("qp_sub")),
        }
    }
}

fn eliminate(t: LambdaTerm) -> Term {
    abstract_eliminate(&t).expect("closed by construction")
}

/// `(χ_F, χ′_F)`. Atoms give `(λx (χ)(𝔮)x, λx (𝔮′)(χ′)x)`; an implication
/// `F′→F″` gives `χ_F = λxλy (χ_F″)(x)(χ′_F′)y` and
/// `χ′_F = λxλy (χ′_F″)(x)(χ_F′)y`.
pub fn chi_transformers(ps: &PropStructure, base: &BaseTerms) -> (Term, Term) {
    let v = LambdaTerm::var;
    let k = LambdaTerm::Const;
    match ps {
        PropStructure::Atom(a) => {
            let (q, qp) = match a {
                Atom::In => &base.on_in,
                Atom::Sub => &base.on_sub,
            };
            let chi = eliminate(LambdaTerm::lam("x", LambdaTerm::app(k(Term::CHI), LambdaTerm::app(k(q.clone()), v("x")))));
            let chi_p =
                eliminate(LambdaTerm::lam("x", LambdaTerm::app(k(qp.clone()), LambdaTerm::app(k(Term::CHI_PRIME), v("x")))));
            (chi, chi_p)
        }
        PropStructure::Imp(lhs, rhs) => {
            let (chi_l, chi_pl) = chi_transformers(lhs, base);
            let (chi_r, chi_pr) = chi_transformers(rhs, base);
            let node = |outer: Term, inner: Term| {
                let body = LambdaTerm::app(
                    k(outer),
                    LambdaTerm::app(v("x"), LambdaTerm::app(k(inner), v("y"))),
                );
                eliminate(LambdaTerm::lams(&["x", "y"], body))
            };
            (node(chi_r, chi_pl), node(chi_pr, chi_l))
        }
    }
}
