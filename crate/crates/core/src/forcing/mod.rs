//! The generic extension: condition sequences, certificates, lifted
//! combinators, the pole of pair processes, and the `χ_F`/`χ′_F` transformers.

mod cert;
mod conditions;
mod laws;
mod pair;
mod prop;
mod sample;
mod star;

pub use cert::{cert_normalize, cert_valid, NotACertificate};
pub use conditions::{CohenCondition, CondSeq, Condition, ConditionError, ConditionSystem, PosetSemilattice};
pub use laws::{check_closure_laws, conclusion_fuel, law_instance, ClosureLaw, ClosureReport, LawReport};
pub use pair::{lift_proof_like, pole1, NotProofLike, PairProcess, PairStack, PairTerm};
pub use prop::{chi_transformers, Atom, BaseTerms, PropParseError, PropStructure};
pub use star::{
    c_star, cc_star, k_star, kstar, star_combinators, star_instance, verify_star_law, w_star, StarLaw, StarReport,
};
