//! Lifted combinators threading a certificate through the end of the stack.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sample::{pool, random_stack, random_term};
use crate::compile::compile_fixed;
use crate::machine::{reaches, OracleConfig};
use crate::syntax::{k_term, Process, Stack, Term};

struct Stars {
    c: Term,
    k: Term,
    w: Term,
    cc: Term,
    /// `λkλx′ (χ)λt′ (k)((χ′)(𝔠)t′)x′`; applied to `k_π` it is `k*_π`.
    k_lift: Term,
}

fn stars() -> &'static Stars {
    static STARS: OnceLock<Stars> = OnceLock::new();
    STARS.get_or_init(|| Stars {
        c: compile_fixed("\\x y z. chi (\\t. chi' (frak-c t) x z y)"),
        k: compile_fixed("\\x y. chi (\\t. chi' (frak-c t) x)"),
        w: compile_fixed("\\x y. chi (\\t. chi' (frak-c t) x y y)"),
        cc: compile_fixed("\\x. chi (\\t. cc (\\k. chi' (frak-c t) x (\\x'. chi (\\t'. k (chi' (frak-c t') x')))))"),
        k_lift: compile_fixed("\\k x'. chi (\\t'. k (chi' (frak-c t') x'))"),
    })
}

pub fn c_star() -> Term {
    stars().c.clone()
}

pub fn k_star() -> Term {
    stars().k.clone()
}

pub fn w_star() -> Term {
    stars().w.clone()
}

pub fn cc_star() -> Term {
    stars().cc.clone()
}

/// `k*_π`, in exactly the form `cc*` pushes for the saved stack `π`.
pub fn kstar(pi: &Stack) -> Term {
    Term::app(stars().k_lift.clone(), k_term(pi))
}

/// `Cstar, Kstar, Wstar, ccstar`, `kstar` at `π0`, and the aliases `Bstar = B`, `Istar = I`.
pub fn star_combinators() -> BTreeMap<&'static str, Term> {
    BTreeMap::from([
        ("Bstar", Term::B),
        ("Istar", Term::I),
        ("Cstar", c_star()),
        ("Kstar", k_star()),
        ("Wstar", w_star()),
        ("ccstar", cc_star()),
        ("kstar", kstar(&Stack::empty())),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StarLaw {
    Cstar,
    Kstar,
    Wstar,
    Kpi,
    Ccstar,
}

impl StarLaw {
    pub const ALL: [StarLaw; 5] = [StarLaw::Cstar, StarLaw::Kstar, StarLaw::Wstar, StarLaw::Kpi, StarLaw::Ccstar];

    pub fn name(self) -> &'static str {
        match self {
            StarLaw::Cstar => "Cstar",
            StarLaw::Kstar => "Kstar",
            StarLaw::Wstar => "Wstar",
            StarLaw::Kpi => "kstar",
            StarLaw::Ccstar => "ccstar",
        }
    }

    pub fn from_name(s: &str) -> Option<StarLaw> {
        StarLaw::ALL.into_iter().find(|l| l.name() == s)
    }
}

impl fmt::Display for StarLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Start and expected target of one instance of a lifted reduction.
pub fn star_instance(law: StarLaw, xi: Term, eta: Term, zeta: Term, pi: Stack, tau: Term) -> (Process, Process) {
    let ctau = Term::app(Term::FRAK, tau.clone());
    let with = |items: Vec<Term>, base: &Stack, back: Term| {
        let mut s = base.clone();
        for t in items.into_iter().rev() {
            s.push(t);
        }
        s.with_back(back)
    };
    match law {
        StarLaw::Cstar => (
            Process::new(c_star(), with(vec![xi.clone(), eta.clone(), zeta.clone()], &pi, tau)),
            Process::new(xi, with(vec![zeta, eta], &pi, ctau)),
        ),
        StarLaw::Kstar => (
            Process::new(k_star(), with(vec![xi.clone(), eta], &pi, tau)),
            Process::new(xi, with(vec![], &pi, ctau)),
        ),
        StarLaw::Wstar => (
            Process::new(w_star(), with(vec![xi.clone(), eta.clone()], &pi, tau)),
            Process::new(xi, with(vec![eta.clone(), eta], &pi, ctau)),
        ),
        StarLaw::Kpi => {
            // `zeta` seeds the unrelated stack ϖ
            let varpi = Stack::from_items([zeta, eta]);
            (
                Process::new(kstar(&pi), with(vec![xi.clone()], &varpi, tau)),
                Process::new(xi, with(vec![], &pi, ctau)),
            )
        }
        StarLaw::Ccstar => (
            Process::new(cc_star(), with(vec![xi.clone()], &pi, tau)),
            Process::new(xi, with(vec![kstar(&pi)], &pi, ctau)),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub law: StarLaw,
    pub seed: u64,
    pub cases: usize,
    pub matched: usize,
    /// Largest number of steps needed to reach the target.
    pub max_steps: u64,
    pub failures: Vec<String>,
}

/// Runs `cases` random instances of `law`; the target must be reached exactly.
pub fn verify_star_law(law: StarLaw, cases: usize, seed: u64) -> StarReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = pool();
    let cfg = OracleConfig::none();
    let mut report = StarReport { law, seed, cases, matched: 0, max_steps: 0, failures: Vec::new() };
    for _ in 0..cases {
        let xi = random_term(&mut rng, &pool, 2);
        let eta = random_term(&mut rng, &pool, 2);
        let zeta = random_term(&mut rng, &pool, 2);
        let pi = random_stack(&mut rng, &pool, 4);
        let tau = random_term(&mut rng, &pool, 1);
        let (start, target) = star_instance(law, xi, eta, zeta, pi, tau);
        match reaches(start.clone(), &target, 500, &cfg) {
            Some(n) => {
                report.matched += 1;
                report.max_steps = report.max_steps.max(n);
            }
            None => report.failures.push(format!("{start} did not reach {target}")),
        }
    }
    report
}
