use std::fmt;

use thiserror::Error;

use super::conditions::{CondSeq, ConditionSystem};
use super::star::{c_star, cc_star, k_star, w_star};
use crate::machine::{in_pole, OracleConfig, PoleVerdict};
use crate::syntax::{is_proof_like, Instr, Process, Stack, Term};

/// A term of the extension: `(ξ, u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTerm {
    pub term: Term,
    pub cond: CondSeq,
}

/// A stack of the extension: `(π, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairStack {
    pub stack: Stack,
    pub cond: CondSeq,
}

/// A process of the extension: `(ξ⋆π, u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProcess {
    pub base: Process,
    pub cond: CondSeq,
}

impl PairTerm {
    pub fn new(term: Term, cond: CondSeq) -> Self {
        PairTerm { term, cond }
    }

    /// `(ξ,u)(η,v) = (ξη, uv)`.
    pub fn app(&self, arg: &PairTerm) -> PairTerm {
        PairTerm::new(Term::app(self.term.clone(), arg.term.clone()), self.cond.concat(&arg.cond))
    }

    /// `(ξ,u)·(π,v) = (ξ·π, uv)`.
    pub fn push(&self, s: &PairStack) -> PairStack {
        PairStack { stack: s.stack.clone().pushed(self.term.clone()), cond: self.cond.concat(&s.cond) }
    }

    /// `(ξ,u)⋆(π,v) = (ξ⋆π, uv)`.
    pub fn star(&self, s: &PairStack) -> PairProcess {
        PairProcess { base: Process::new(self.term.clone(), s.stack.clone()), cond: self.cond.concat(&s.cond) }
    }
}

impl PairStack {
    pub fn new(stack: Stack, cond: CondSeq) -> Self {
        PairStack { stack, cond }
    }
}

impl PairProcess {
    pub fn new(base: Process, cond: CondSeq) -> Self {
        PairProcess { base, cond }
    }
}

impl fmt::Display for PairProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.base, self.cond)
    }
}

/// Membership in the pole of the extension, checked against the canonical
/// certificate of `u`: vacuously yes when `u` is incompatible, otherwise the
/// base verdict for `ξ ⋆ π^{cert u}`.
pub fn pole1(pp: &PairProcess, fuel: u64, cs: &ConditionSystem, cfg: &OracleConfig) -> PoleVerdict {
    if !cs.compatible(&pp.cond) {
        return PoleVerdict::Yes(Vec::new());
    }
    let stack = pp.base.stack.clone().with_back(Term::cert(pp.cond.clone()));
    let cfg = OracleConfig { certificates: true, ..cfg.clone() };
    in_pole(Process::new(pp.base.head.clone(), stack), fuel, &cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("`{0}` is not proof-like")]
pub struct NotProofLike(pub String);

fn lift(t: &Term, stars: &[Term; 4]) -> Term {
    match t {
        Term::Instr(Instr::C) => stars[0].clone(),
        Term::Instr(Instr::K) => stars[1].clone(),
        Term::Instr(Instr::W) => stars[2].clone(),
        Term::Instr(Instr::Cc) => stars[3].clone(),
        Term::App(f, x) => Term::app(lift(f, stars), lift(x, stars)),
        other => other.clone(),
    }
}

/// `(θ*, 𝟙)`, where `θ*` replaces `C, K, W, cc` by their lifted versions.
pub fn lift_proof_like(theta: &Term) -> Result<PairTerm, NotProofLike> {
    if !is_proof_like(theta) {
        return Err(NotProofLike(theta.to_string()));
    }
    let stars = [c_star(), k_star(), w_star(), cc_star()];
    Ok(PairTerm::new(lift(theta, &stars), CondSeq::unit()))
}
