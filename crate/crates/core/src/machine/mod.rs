//! The base machine: rules 1–15, linear runs, execution trees and the
//! fuel-bounded pole check.

mod observe;
mod run;
mod step;
mod tree;

pub use observe::{agree, observe, Observable};
pub use run::{reaches, run_linear, run_traced, LinearOutcome};
pub use step::{
    step, step_owned, try_step, AcceptKind, OracleConfig, OracleMode, Rule, StepResult, StuckReason,
    DEFAULT_DECODE_FUEL,
};
pub use tree::{exec_tree, in_pole, BranchEnd, BranchSummary, ExecNode, ExecTree, Leaf, PoleVerdict};

pub(crate) use tree::{schedule, Options};

/// Trace line for the state produced by the `n`-th step.
pub fn trace_line(n: u64, rule: Rule, p: &crate::syntax::Process) -> String {
    format!("#{n} {p}  [rule {rule}]")
}
