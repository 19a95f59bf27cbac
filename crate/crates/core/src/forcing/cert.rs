use thiserror::Error;

use super::conditions::{CondSeq, ConditionSystem};
use crate::syntax::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("not a certificate")]
pub struct NotACertificate;

/// Strips a chain `𝔠 (𝔠 (… {cert s}))` down to its payload `s`. The
/// transformer keeps the payload as it is.
pub fn cert_normalize(t: &Term) -> Result<CondSeq, NotACertificate> {
    let mut cur = t;
    loop {
        match cur {
            Term::Cert(s) => return Ok((**s).clone()),
            Term::App(f, x) if **f == Term::FRAK => cur = x,
            _ => return Err(NotACertificate),
        }
    }
}

/// `t` certifies `u` when its payload is compatible and contains every
/// condition of `u`.
pub fn cert_valid(t: &Term, u: &CondSeq, cs: &ConditionSystem) -> bool {
    match cert_normalize(t) {
        Ok(s) => cs.compatible(&s) && u.conditions().iter().all(|c| s.contains(c)),
        Err(_) => false,
    }
}
