use super::run::{run_linear, LinearOutcome};
use super::step::{step, AcceptKind, OracleConfig, StepResult};
use crate::syntax::Process;

/// What an outside observer sees of a run: acceptance events and the fork
/// shape, but neither intermediate states nor why a branch got stuck.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observable {
    Accept(AcceptKind),
    Stuck,
    Fuel,
    Fork(Box<[Observable; 3]>),
}

impl Observable {
    /// True when no subtree ran out of fuel.
    pub fn terminated(&self) -> bool {
        match self {
            Observable::Fuel => false,
            Observable::Fork(c) => c.iter().all(Observable::terminated),
            _ => true,
        }
    }

    /// Oracle payloads in left-to-right order.
    pub fn payloads(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect_payloads(&mut out);
        out
    }

    fn collect_payloads(&self, out: &mut Vec<u64>) {
        match self {
            Observable::Accept(AcceptKind::Oracle { payload, .. }) => out.push(*payload),
            Observable::Fork(c) => c.iter().for_each(|o| o.collect_payloads(out)),
            _ => {}
        }
    }
}

/// Agreement up to fuel: a `Fuel` subtree on either side matches anything.
pub fn agree(a: &Observable, b: &Observable) -> bool {
    match (a, b) {
        (Observable::Fuel, _) | (_, Observable::Fuel) => true,
        (Observable::Fork(x), Observable::Fork(y)) => x.iter().zip(y.iter()).all(|(p, q)| agree(p, q)),
        _ => a == b,
    }
}

/// Depth-first observation; fork children run one after another from the
/// fuel left over by their elder siblings.
pub fn observe(p: Process, fuel: u64, cfg: &OracleConfig) -> Observable {
    let mut left = fuel;
    observe_with(p, &mut left, cfg)
}

fn observe_with(p: Process, fuel: &mut u64, cfg: &OracleConfig) -> Observable {
    let out = run_linear(p, *fuel, cfg);
    *fuel -= out.steps().min(*fuel);
    match out {
        LinearOutcome::Accept { kind, .. } => Observable::Accept(kind),
        LinearOutcome::Stuck { .. } => Observable::Stuck,
        LinearOutcome::Fuel { .. } => Observable::Fuel,
        LinearOutcome::Fork { process, .. } => {
            let StepResult::Branch3(children) = step(&process, cfg) else {
                unreachable!("run_linear stops at forks")
            };
            let [a, b, c] = *children;
            let oa = observe_with(a, fuel, cfg);
            let ob = observe_with(b, fuel, cfg);
            let oc = observe_with(c, fuel, cfg);
            Observable::Fork(Box::new([oa, ob, oc]))
        }
    }
}
