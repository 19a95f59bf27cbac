use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::extract::decode_numeral;
use crate::forcing::cert_normalize;
use crate::syntax::{k_term, Instr, Process, Stack, Term, DEFAULT_ORACLE};

/// Fuel granted to the private numeral decoder at each oracle call.
pub const DEFAULT_DECODE_FUEL: u64 = 100_000;

/// Acceptance behavior of the oracle constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "target")]
pub enum OracleMode {
    /// The oracle is an inert constant.
    None,
    /// Accepts `δ ⋆ t·π` iff `t` decodes to the target.
    Checker(u64),
    /// Accepts `δ ⋆ t·π` for every decodable `t`, recording the value.
    Collector,
}

/// Fresh constants introduced by `κ` always take the least index absent from
/// the process; oracle acceptance only decodes numerals behaviorally and never
/// looks at indexed constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub mode: OracleMode,
    pub oracle: Arc<str>,
    pub decode_fuel: u64,
    /// Reduce `𝔠`-chains over certificates to the bare certificate. Only the
    /// forcing layer turns this on.
    pub certificates: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mode: OracleMode::None,
            oracle: Arc::from(DEFAULT_ORACLE),
            decode_fuel: DEFAULT_DECODE_FUEL,
            certificates: false,
        }
    }
}

impl OracleConfig {
    pub fn none() -> Self {
        OracleConfig::default()
    }

    pub fn checker(target: u64) -> Self {
        OracleConfig { mode: OracleMode::Checker(target), ..OracleConfig::default() }
    }

    pub fn collector() -> Self {
        OracleConfig { mode: OracleMode::Collector, ..OracleConfig::default() }
    }

    pub fn with_oracle(mut self, name: &str) -> Self {
        self.oracle = Arc::from(name);
        self
    }
}

/// Label of an execution step. Numbered rules follow the definition of the pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Stop = 1,
    Abort = 2,
    Fork = 3,
    ElimSame = 4,
    ElimDistinct = 5,
    Intro = 6,
    Push = 7,
    Noop = 8,
    Delete = 9,
    Copy = 10,
    Switch = 11,
    Apply = 12,
    Save = 13,
    ReadEnd = 14,
    WriteEnd = 15,
    /// Oracle acceptance.
    Oracle = 16,
    /// `𝔠`-chain normalization in the forcing layer.
    Certificate = 17,
}

impl Rule {
    pub fn label(self) -> String {
        match self {
            Rule::Oracle => "oracle".to_string(),
            Rule::Certificate => "cert".to_string(),
            r => (r as u8).to_string(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum AcceptKind {
    Stop,
    Oracle { name: String, payload: u64 },
}

impl fmt::Display for AcceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcceptKind::Stop => f.write_str("stop"),
            AcceptKind::Oracle { name, payload } => write!(f, "oracle {name} {payload}"),
        }
    }
}

/// Why no rule applies. The spelling of each reason is stable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StuckReason {
    /// The head is a constant without rules (`h_i`, a certificate, `𝔠`, an inert oracle).
    HeadConstant,
    /// The stack is too short for the head instruction.
    Arity,
    /// `χ` found nothing between its argument and `π0`.
    EmptyBack,
    /// `e` was not given two indexed constants.
    NoRule,
    /// A checking oracle received a numeral other than its target.
    OracleRejected,
    /// The oracle argument does not behave as a numeral.
    Undecodable,
}

impl StuckReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StuckReason::HeadConstant => "head-constant",
            StuckReason::Arity => "arity",
            StuckReason::EmptyBack => "empty-back",
            StuckReason::NoRule => "no-rule",
            StuckReason::OracleRejected => "oracle-rejected",
            StuckReason::Undecodable => "undecodable",
        }
    }
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Next(Process, Rule),
    /// Rule 3: the three branches share the stack tail.
    Branch3(Box<[Process; 3]>),
    Accept(AcceptKind),
    Stuck(StuckReason),
}

/// Items an instruction consumes from the top of the stack.
fn arity(instr: Instr) -> usize {
    match instr {
        Instr::Stop | Instr::Frak => 0,
        Instr::Abort | Instr::Kappa | Instr::I | Instr::Cc | Instr::Chi => 1,
        Instr::K | Instr::W | Instr::ChiPrime => 2,
        Instr::Fork | Instr::C | Instr::B => 3,
        Instr::E => 4,
    }
}

fn take<const N: usize>(stack: &mut Stack) -> [Term; N] {
    std::array::from_fn(|_| stack.pop().expect("arity checked"))
}

fn next(head: Term, stack: Stack, rule: Rule) -> StepResult {
    StepResult::Next(Process::new(head, stack), rule)
}

/// One execution step. Exactly one clause applies to any process.
pub fn step(p: &Process, cfg: &OracleConfig) -> StepResult {
    step_owned(p.clone(), cfg)
}

/// [`step`] without cloning the process.
pub fn step_owned(p: Process, cfg: &OracleConfig) -> StepResult {
    match try_step(p, cfg) {
        Ok(r) => r,
        Err((reason, _)) => StepResult::Stuck(reason),
    }
}

/// Like [`step_owned`], but a stuck process is handed back unchanged.
pub fn try_step(p: Process, cfg: &OracleConfig) -> Result<StepResult, (StuckReason, Process)> {
    let Process { head, mut stack } = p;
    let instr = match head {
        Term::App(f, x) => {
            if cfg.certificates && *f == Term::FRAK {
                if let Ok(seq) = cert_normalize(&x) {
                    return Ok(next(Term::cert(seq), stack, Rule::Certificate));
                }
            }
            stack.push((*x).clone());
            return Ok(next((*f).clone(), stack, Rule::Push));
        }
        Term::Oracle(ref name) => {
            return match oracle_step(name, &stack, cfg) {
                Ok(r) => Ok(r),
                Err(reason) => Err((reason, Process::new(head, stack))),
            };
        }
        Term::H(_) | Term::Cert(_) | Term::Instr(Instr::Frak) => {
            return Err((StuckReason::HeadConstant, Process::new(head, stack)))
        }
        Term::Instr(i) => i,
    };
    if stack.len() < arity(instr) {
        return Err((StuckReason::Arity, Process::new(head, stack)));
    }
    if instr == Instr::Chi && stack.len() < 2 {
        return Err((StuckReason::EmptyBack, Process::new(head, stack)));
    }
    let r = match instr {
        Instr::Stop => StepResult::Accept(AcceptKind::Stop),
        Instr::Abort => {
            let [xi] = take(&mut stack);
            next(xi, Stack::empty(), Rule::Abort)
        }
        Instr::Fork => {
            let [xi, eta, zeta] = take(&mut stack);
            StepResult::Branch3(Box::new([
                Process::new(xi, stack.clone()),
                Process::new(eta, stack.clone()),
                Process::new(zeta, stack),
            ]))
        }
        Instr::E => {
            let (i, j) = {
                let mut items = stack.iter();
                (items.next().and_then(Term::as_h), items.next().and_then(Term::as_h))
            };
            let (Some(i), Some(j)) = (i, j) else {
                return Err((StuckReason::NoRule, Process::new(head, stack)));
            };
            let [_, _, u, v] = take(&mut stack);
            if i == j {
                // e ⋆ h_i·h_i·η·ξ·π ≻ ξ ⋆ π
                next(v, stack, Rule::ElimSame)
            } else {
                // e ⋆ h_i·h_j·ξ·η·π ≻ ξ ⋆ π
                next(u, stack, Rule::ElimDistinct)
            }
        }
        Instr::Kappa => {
            let fresh = Process::new(head, stack.clone()).fresh_index();
            let [xi] = take(&mut stack);
            stack.push(Term::H(fresh));
            next(xi, stack, Rule::Intro)
        }
        Instr::I => {
            let [xi] = take(&mut stack);
            next(xi, stack, Rule::Noop)
        }
        Instr::K => {
            let [xi, _eta] = take(&mut stack);
            next(xi, stack, Rule::Delete)
        }
        Instr::W => {
            let [xi, eta] = take(&mut stack);
            stack.push(eta.clone());
            stack.push(eta);
            next(xi, stack, Rule::Copy)
        }
        Instr::C => {
            let [xi, eta, zeta] = take(&mut stack);
            stack.push(eta);
            stack.push(zeta);
            next(xi, stack, Rule::Switch)
        }
        Instr::B => {
            let [xi, eta, zeta] = take(&mut stack);
            stack.push(Term::app(eta, zeta));
            next(xi, stack, Rule::Apply)
        }
        Instr::Cc => {
            let [xi] = take(&mut stack);
            let k = k_term(&stack);
            stack.push(k);
            next(xi, stack, Rule::Save)
        }
        Instr::Chi => {
            let [xi] = take(&mut stack);
            let tau = stack.pop_back().expect("length checked");
            stack.push(tau);
            next(xi, stack, Rule::ReadEnd)
        }
        Instr::ChiPrime => {
            let [tau, xi] = take(&mut stack);
            stack.push_back(tau);
            next(xi, stack, Rule::WriteEnd)
        }
        Instr::Frak => unreachable!("handled with the constants"),
    };
    Ok(r)
}

fn oracle_step(name: &str, stack: &Stack, cfg: &OracleConfig) -> Result<StepResult, StuckReason> {
    if name != &*cfg.oracle || cfg.mode == OracleMode::None {
        return Err(StuckReason::HeadConstant);
    }
    let arg = stack.top().ok_or(StuckReason::Arity)?;
    let value = decode_numeral(arg, cfg.decode_fuel).map_err(|_| StuckReason::Undecodable)?;
    match cfg.mode {
        OracleMode::Checker(target) if value != target => Err(StuckReason::OracleRejected),
        _ => Ok(StepResult::Accept(AcceptKind::Oracle { name: name.to_string(), payload: value })),
    }
}
