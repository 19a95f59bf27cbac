//! λ-terms, abstraction elimination into `B, C, I, K, W`, the prelude, and a
//! reference environment machine.

mod eliminate;
mod lambda;
mod prelude;
mod reference;

pub use eliminate::{abstract_eliminate, abstract_eliminate_with, s_tilde, EliminationError, EliminationOptions};
pub(crate) use eliminate::compile_fixed;
pub use lambda::{free_vars, substitute, LambdaTerm};
pub use prelude::{ind, prelude, theta_prime, y_combinator};
pub use reference::{ref_run, RefOutcome};
