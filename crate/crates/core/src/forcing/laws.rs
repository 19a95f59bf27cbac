//! Sampling checker for the closure laws of the extension's pole.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::conditions::{CondSeq, ConditionSystem};
use super::pair::{pole1, PairProcess};
use super::sample::{pool, random_stack, random_term};
use super::star::{c_star, cc_star, k_star, kstar, w_star};
use crate::machine::{OracleConfig, PoleVerdict};
use crate::syntax::{Process, Stack, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureLaw {
    App,
    B,
    Cstar,
    I,
    Kstar,
    Wstar,
    Kpi,
    Ccstar,
}

impl ClosureLaw {
    pub const ALL: [ClosureLaw; 8] = [
        ClosureLaw::App,
        ClosureLaw::B,
        ClosureLaw::Cstar,
        ClosureLaw::I,
        ClosureLaw::Kstar,
        ClosureLaw::Wstar,
        ClosureLaw::Kpi,
        ClosureLaw::Ccstar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosureLaw::App => "app",
            ClosureLaw::B => "B",
            ClosureLaw::Cstar => "Cstar",
            ClosureLaw::I => "I",
            ClosureLaw::Kstar => "Kstar",
            ClosureLaw::Wstar => "Wstar",
            ClosureLaw::Kpi => "kstar",
            ClosureLaw::Ccstar => "ccstar",
        }
    }
}

impl fmt::Display for ClosureLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Premise and conclusion of one law instance, built from the same sample.
pub fn law_instance(
    law: ClosureLaw,
    [xi, eta, zeta]: [Term; 3],
    [pi, varpi]: [Stack; 2],
    [u, v, w, z]: [CondSeq; 4],
) -> (PairProcess, PairProcess) {
    let seq = |parts: &[&CondSeq]| CondSeq::join(parts.iter().copied());
    let st = |items: &[&Term], base: &Stack| {
        let mut s = base.clone();
        for t in items.iter().rev() {
            s.push((*t).clone());
        }
        s
    };
    let pp = |head: Term, stack: Stack, cond: CondSeq| PairProcess::new(Process::new(head, stack), cond);
    match law {
        ClosureLaw::App => (
            pp(xi.clone(), st(&[&eta], &pi), seq(&[&u, &v, &w])),
            pp(Term::app(xi, eta), pi, seq(&[&u, &v, &w])),
        ),
        ClosureLaw::B => (
            pp(xi.clone(), st(&[&Term::app(eta.clone(), zeta.clone())], &pi), seq(&[&u, &v, &w, &z])),
            pp(Term::B, st(&[&xi, &eta, &zeta], &pi), seq(&[&u, &v, &w, &z])),
        ),
        ClosureLaw::Cstar => (
            pp(xi.clone(), st(&[&zeta, &eta], &pi), seq(&[&u, &w, &v, &z])),
            pp(c_star(), st(&[&xi, &eta, &zeta], &pi), seq(&[&u, &v, &w, &z])),
        ),
        ClosureLaw::I => (pp(xi.clone(), pi.clone(), seq(&[&u, &v])), pp(Term::I, st(&[&xi], &pi), seq(&[&u, &v]))),
        ClosureLaw::Kstar => (
            pp(xi.clone(), pi.clone(), seq(&[&u, &w])),
            pp(k_star(), st(&[&xi, &eta], &pi), seq(&[&u, &v, &w])),
        ),
        ClosureLaw::Wstar => (
            pp(xi.clone(), st(&[&eta, &eta], &pi), seq(&[&u, &v, &v, &w])),
            pp(w_star(), st(&[&xi, &eta], &pi), seq(&[&u, &v, &w])),
        ),
        ClosureLaw::Kpi => (
            pp(xi.clone(), pi.clone(), seq(&[&v, &u])),
            pp(kstar(&pi), st(&[&xi], &varpi), seq(&[&u, &v, &w])),
        ),
        ClosureLaw::Ccstar => (
            pp(xi.clone(), st(&[&kstar(&pi)], &pi), seq(&[&u, &v, &v])),
            pp(cc_star(), st(&[&xi], &pi), seq(&[&u, &v])),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: ClosureLaw,
    pub samples: usize,
    /// Premises certified within the fuel, vacuous ones included.
    pub premises_certified: usize,
    pub vacuous: usize,
    pub conclusions_certified: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub format: u32,
    pub system: String,
    pub seed: u64,
    pub trials: usize,
    pub fuel: u64,
    pub conclusion_fuel: u64,
    pub laws: Vec<LawReport>,
}

impl ClosureReport {
    pub fn violations(&self) -> usize {
        self.laws.iter().map(|l| l.violations.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "closure laws: system={} trials={} fuel={} seed={}",
            self.system, self.trials, self.fuel, self.seed
        )?;
        for l in &self.laws {
            writeln!(
                f,
                "  {:<7} premises {:>4}/{} (vacuous {:>3})  conclusions {:>4}  violations {}",
                l.law.name(),
                l.premises_certified,
                l.samples,
                l.vacuous,
                l.conclusions_certified,
                l.violations.len()
            )?;
            for v in &l.violations {
                writeln!(f, "    {v}")?;
            }
        }
        write!(f, "total violations: {}", self.violations())
    }
}

/// Conclusion budget granted when the premise was certified with `fuel`.
pub fn conclusion_fuel(fuel: u64) -> u64 {
    2 * fuel + 500
}

/// Samples `trials` instances of each law. Whenever the premise is in the
/// pole within `fuel`, the conclusion must be within [`conclusion_fuel`].
pub fn check_closure_laws(cs: &ConditionSystem, trials: usize, fuel: u64, seed: u64) -> ClosureReport {
    let pool = pool();
    let cfg = OracleConfig::none();
    let big = conclusion_fuel(fuel);
    let mut laws = Vec::new();
    for (li, law) in ClosureLaw::ALL.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(li as u64));
        let mut rep = LawReport {
            law,
            samples: trials,
            premises_certified: 0,
            vacuous: 0,
            conclusions_certified: 0,
            violations: Vec::new(),
        };
        for _ in 0..trials {
            let terms = [(); 3].map(|_| random_term(&mut rng, &pool, 2));
            let stacks = [(); 2].map(|_| random_stack(&mut rng, &pool, 3));
            let conds = [(); 4].map(|_| {
                let len = rng.gen_range(0..=2);
                cs.random_seq(&mut rng, len)
            });
            let (premise, conclusion) = law_instance(law, terms, stacks, conds);
            if !pole1(&premise, fuel, cs, &cfg).is_yes() {
                continue;
            }
            rep.premises_certified += 1;
            if !cs.compatible(&premise.cond) {
                rep.vacuous += 1;
            }
            match pole1(&conclusion, big, cs, &cfg) {
                PoleVerdict::Yes(_) => rep.conclusions_certified += 1,
                other => rep.violations.push(format!(
                    "premise {premise} certified but conclusion {conclusion} is {}",
                    other.label()
                )),
            }
        }
        laws.push(rep);
    }
    ClosureReport {
        format: 1,
        system: cs.name().to_string(),
        seed,
        trials,
        fuel,
        conclusion_fuel: big,
        laws,
    }
}
