use std::fmt;

use super::step::{step_owned, try_step, AcceptKind, OracleConfig, Rule, StepResult, StuckReason};
use crate::syntax::{Process, Term};

/// Result of a fork-free run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearOutcome {
    Accept { kind: AcceptKind, steps: u64 },
    /// `process` is the state no rule applies to.
    Stuck { reason: StuckReason, steps: u64, process: Process },
    Fuel { steps: u64, process: Process },
    /// A `γ` head was reached; `process` is the forking state.
    Fork { steps: u64, process: Process },
}

impl LinearOutcome {
    pub fn steps(&self) -> u64 {
        match self {
            LinearOutcome::Accept { steps, .. }
            | LinearOutcome::Stuck { steps, .. }
            | LinearOutcome::Fuel { steps, .. }
            | LinearOutcome::Fork { steps, .. } => *steps,
        }
    }

    pub fn is_accept(&self) -> bool {
        matches!(self, LinearOutcome::Accept { .. })
    }
}

impl fmt::Display for LinearOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearOutcome::Accept { kind, steps } => write!(f, "accept({kind}) in {steps} steps"),
            LinearOutcome::Stuck { reason, steps, process } => {
                write!(f, "stuck({reason}) after {steps} steps at {process}")
            }
            LinearOutcome::Fuel { steps, .. } => write!(f, "fuel exhausted after {steps} steps"),
            LinearOutcome::Fork { steps, process } => write!(f, "fork after {steps} steps at {process}"),
        }
    }
}

/// Steps `p` until it stops being linear. Accepting and forking count as a step;
/// a stuck state does not.
pub fn run_linear(p: Process, fuel: u64, cfg: &OracleConfig) -> LinearOutcome {
    run_traced(p, fuel, cfg, |_, _, _| {})
}

/// [`run_linear`], calling `on_step(n, rule, state)` after the `n`-th transition
/// with the state it produced.
pub fn run_traced(
    mut p: Process,
    fuel: u64,
    cfg: &OracleConfig,
    mut on_step: impl FnMut(u64, Rule, &Process),
) -> LinearOutcome {
    let mut steps = 0;
    loop {
        if steps >= fuel {
            return LinearOutcome::Fuel { steps, process: p };
        }
        let forking = p.head == Term::FORK;
        let kept = forking.then(|| p.clone());
        match try_step(p, cfg) {
            Ok(StepResult::Next(q, rule)) => {
                steps += 1;
                on_step(steps, rule, &q);
                p = q;
            }
            Ok(StepResult::Branch3(_)) => {
                return LinearOutcome::Fork { steps: steps + 1, process: kept.expect("fork head kept") };
            }
            Ok(StepResult::Accept(kind)) => return LinearOutcome::Accept { kind, steps: steps + 1 },
            Ok(StepResult::Stuck(reason)) => unreachable!("try_step reports {reason} through Err"),
            Err((reason, process)) => return LinearOutcome::Stuck { reason, steps, process },
        }
    }
}

/// Runs linearly and reports the step count at which `target` is first
/// reached (0 if `p` already is `target`).
pub fn reaches(p: Process, target: &Process, fuel: u64, cfg: &OracleConfig) -> Option<u64> {
    if &p == target {
        return Some(0);
    }
    let mut hit = None;
    let mut cur = p;
    let mut steps = 0;
    while steps < fuel {
        match step_owned(cur, cfg) {
            StepResult::Next(q, _) => {
                steps += 1;
                if &q == target {
                    hit = Some(steps);
                    break;
                }
                cur = q;
            }
            _ => break,
        }
    }
    hit
}
