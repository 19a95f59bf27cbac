//! Witness extraction: numerals are decoded by probing, forks are resolved by
//! majority.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::machine::{
    schedule, try_step, AcceptKind, BranchEnd, BranchSummary, OracleConfig, Options, StepResult, StuckReason,
};
use crate::syntax::{Process, Stack, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("not a numeral")]
    NotANumeral,
    #[error("fuel exhausted while decoding")]
    Fuel,
}

// Probe constants. Their names cannot be written in concrete syntax.
const PROBE_TICK: &str = "#T";
const PROBE_DONE: &str = "#D";

/// Runs `t ⋆ T·D·π0`, where `T ⋆ u·π ≻ u ⋆ π` bumps a counter and `D`
/// accepts. The counter at acceptance is the value of `t`.
pub fn decode_numeral(t: &Term, fuel: u64) -> Result<u64, DecodeError> {
    let tick = Term::oracle(PROBE_TICK);
    let done = Term::oracle(PROBE_DONE);
    let cfg = OracleConfig::none();
    let mut p = Process::new(t.clone(), Stack::from_items([tick.clone(), done.clone()]));
    let mut count = 0;
    for _ in 0..fuel {
        if p.head == done {
            return Ok(count);
        }
        if p.head == tick {
            let u = p.stack.pop().ok_or(DecodeError::NotANumeral)?;
            count += 1;
            p.head = u;
            continue;
        }
        match try_step(p, &cfg) {
            Ok(StepResult::Next(q, _)) => p = q,
            _ => return Err(DecodeError::NotANumeral),
        }
    }
    Err(DecodeError::Fuel)
}

/// Partial result of a subtree during dovetailed evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Partial<V> {
    #[default]
    Pending,
    Value(V),
    Failed,
}

/// Value `v` iff at least two children report `v`; failed once no pair of
/// children can still agree; pending otherwise.
pub fn majority<V: Clone + Eq>(children: &[Partial<V>; 3]) -> Partial<V> {
    for i in 0..3 {
        for j in i + 1..3 {
            if let (Partial::Value(a), Partial::Value(b)) = (&children[i], &children[j]) {
                if a == b {
                    return Partial::Value(a.clone());
                }
            }
        }
    }
    let could_agree = |a: &Partial<V>, b: &Partial<V>| match (a, b) {
        (Partial::Failed, _) | (_, Partial::Failed) => false,
        (Partial::Value(x), Partial::Value(y)) => x == y,
        _ => true,
    };
    let open = (0..3).any(|i| (i + 1..3).any(|j| could_agree(&children[i], &children[j])));
    if open {
        Partial::Pending
    } else {
        Partial::Failed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailReason {
    Fuel,
    Stuck,
    UndecodableLeaf,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailReason::Fuel => "fuel",
            FailReason::Stuck => "stuck",
            FailReason::UndecodableLeaf => "undecodable-leaf",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ExtractResult {
    Value { value: u64 },
    Ambiguous { values: BTreeSet<u64> },
    Fail { reason: FailReason },
}

impl fmt::Display for ExtractResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractResult::Value { value } => write!(f, "value {value}"),
            ExtractResult::Ambiguous { values } => {
                let vs: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, "ambiguous {{{}}}", vs.join(","))
            }
            ExtractResult::Fail { reason } => write!(f, "fail {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractReport {
    pub format: u32,
    pub result: ExtractResult,
    pub steps: u64,
    pub branches: Vec<BranchSummary>,
}

impl ExtractReport {
    pub fn value(&self) -> Option<u64> {
        match self.result {
            ExtractResult::Value { value } => Some(value),
            _ => None,
        }
    }

    /// Oracle payloads accepted by any branch, in schedule order.
    pub fn payloads(&self) -> Vec<u64> {
        self.branches
            .iter()
            .filter_map(|b| match &b.end {
                BranchEnd::Accept { accept: AcceptKind::Oracle { payload, .. } } => Some(*payload),
                _ => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ExtractReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "result: {}", self.result)?;
        writeln!(f, "steps: {}", self.steps)?;
        for b in &self.branches {
            let path = if b.path.is_empty() { "root" } else { &b.path };
            let end = match &b.end {
                BranchEnd::Accept { accept } => format!("accept({accept})"),
                BranchEnd::Stuck { reason } => format!("stuck({reason})"),
                BranchEnd::Fork => "fork".to_string(),
                BranchEnd::Fuel => "fuel".to_string(),
                BranchEnd::Pruned => "pruned".to_string(),
            };
            writeln!(f, "  {path}: {end} after {} steps", b.steps)?;
        }
        Ok(())
    }
}

/// Evaluates `p` with dovetailing, reading each accepting oracle leaf as its
/// decoded payload and each fork by majority.
pub fn extract_process(p: Process, fuel: u64, cfg: &OracleConfig) -> ExtractReport {
    let leaf = |k: &AcceptKind| match k {
        AcceptKind::Oracle { payload, .. } => Partial::Value(*payload),
        AcceptKind::Stop => Partial::Failed,
    };
    let s = schedule(p, fuel, cfg, leaf, Options { record: false, short_circuit: true });
    let result = match s.verdict {
        Partial::Value(value) => ExtractResult::Value { value },
        ref other => {
            let values: BTreeSet<u64> = s
                .first_fork
                .iter()
                .flatten()
                .filter_map(|r| match r {
                    Partial::Value(v) => Some(*v),
                    _ => None,
                })
                .collect();
            if values.len() >= 2 {
                ExtractResult::Ambiguous { values }
            } else if *other == Partial::Pending {
                ExtractResult::Fail { reason: FailReason::Fuel }
            } else {
                let undecodable = s
                    .branches
                    .iter()
                    .any(|b| b.end == BranchEnd::Stuck { reason: StuckReason::Undecodable });
                let reason = if undecodable { FailReason::UndecodableLeaf } else { FailReason::Stuck };
                ExtractResult::Fail { reason }
            }
        }
    };
    ExtractReport { format: 1, result, steps: s.steps, branches: s.branches }
}

/// Runs `θ ⋆ δ·π0` with `δ` collecting numerals.
pub fn extract_witness(theta: &Term, fuel: u64, oracle: &str) -> ExtractReport {
    let cfg = OracleConfig::collector().with_oracle(oracle);
    let p = Process::new(theta.clone(), Stack::from_items([Term::oracle(oracle)]));
    extract_process(p, fuel, &cfg)
}
