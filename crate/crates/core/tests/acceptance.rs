//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime and bound; the process exits non-zero if any criterion fails.
//!
//! Expected values are computed here, independently of the library: the
//! transition table, continuation terms, fresh indices, majority folding over
//! planted fork trees and the shapes of the transformer recursion are all
//! re-derived on the test side.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rzm::compile::{abstract_eliminate, abstract_eliminate_with, ref_run, substitute, theta_prime, EliminationOptions, LambdaTerm};
use rzm::extract::{decode_numeral, extract_process, extract_witness, ExtractResult};
use rzm::forcing::{
    cert_valid, chi_transformers, check_closure_laws, verify_star_law, Atom, BaseTerms, CondSeq, Condition,
    ConditionSystem, PropStructure, StarLaw,
};
use rzm::machine::{
    agree, exec_tree, observe, reaches, step, AcceptKind, Observable, OracleConfig, Rule, StepResult,
};
use rzm::syntax::{is_proof_like, numeral, parse_term, Process, Stack, Term};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn app(f: Term, x: Term) -> Term {
    Term::app(f, x)
}

fn apply<const N: usize>(f: Term, xs: [Term; N]) -> Term {
    xs.into_iter().fold(f, Term::app)
}

fn stack<const N: usize>(items: [Term; N]) -> Stack {
    Stack::from_items(items)
}

fn proc(head: Term, s: Stack) -> Process {
    Process::new(head, s)
}

fn delta_of(n: u64) -> Term {
    app(Term::delta(), numeral(n))
}

// Test-side model of the transition relation

#[derive(Debug, PartialEq)]
enum Expect {
    Next(Process, Rule),
    Branch([Process; 3]),
    Stop,
}

/// Continuation term by the recurrence `k_π0 = a`, `k_{t·π} = ((C)(B)k_π)t`.
fn oracle_k(items: &[Term]) -> Term {
    match items.split_first() {
        None => Term::ABORT,
        Some((t, rest)) => apply(Term::C, [app(Term::B, oracle_k(rest)), t.clone()]),
    }
}

fn collect_h(t: &Term, out: &mut HashSet<u32>) {
    match t {
        Term::H(i) => {
            out.insert(*i);
        }
        Term::App(f, x) => {
            collect_h(f, out);
            collect_h(x, out);
        }
        _ => {}
    }
}

fn oracle_fresh(p: &Process) -> u32 {
    let mut used = HashSet::new();
    collect_h(&p.head, &mut used);
    for t in p.stack.iter() {
        collect_h(t, &mut used);
    }
    (0..).find(|i| !used.contains(i)).unwrap()
}

/// Every clause of the rule table whose left-hand side matches `p`.
fn matching_clauses(p: &Process) -> Vec<Expect> {
    let items: Vec<Term> = p.stack.iter().cloned().collect();
    let rest = |n: usize| Stack::from_items(items[n..].iter().cloned());
    let mut out = Vec::new();
    let h = &p.head;
    if let Term::App(f, x) = h {
        out.push(Expect::Next(proc((**f).clone(), rest(0).pushed((**x).clone())), Rule::Push));
    }
    if *h == Term::STOP {
        out.push(Expect::Stop);
    }
    if *h == Term::ABORT && !items.is_empty() {
        out.push(Expect::Next(proc(items[0].clone(), Stack::empty()), Rule::Abort));
    }
    if *h == Term::FORK && items.len() >= 3 {
        out.push(Expect::Branch([
            proc(items[0].clone(), rest(3)),
            proc(items[1].clone(), rest(3)),
            proc(items[2].clone(), rest(3)),
        ]));
    }
    if *h == Term::E && items.len() >= 4 {
        if let (Term::H(i), Term::H(j)) = (&items[0], &items[1]) {
            if i == j {
                out.push(Expect::Next(proc(items[3].clone(), rest(4)), Rule::ElimSame));
            } else {
                out.push(Expect::Next(proc(items[2].clone(), rest(4)), Rule::ElimDistinct));
            }
        }
    }
    if *h == Term::KAPPA && !items.is_empty() {
        let f = oracle_fresh(p);
        out.push(Expect::Next(proc(items[0].clone(), rest(1).pushed(Term::H(f))), Rule::Intro));
    }
    if *h == Term::I && !items.is_empty() {
        out.push(Expect::Next(proc(items[0].clone(), rest(1)), Rule::Noop));
    }
    if *h == Term::K && items.len() >= 2 {
        out.push(Expect::Next(proc(items[0].clone(), rest(2)), Rule::Delete));
    }
    if *h == Term::W && items.len() >= 2 {
        let s = rest(2).pushed(items[1].clone()).pushed(items[1].clone());
        out.push(Expect::Next(proc(items[0].clone(), s), Rule::Copy));
    }
    if *h == Term::C && items.len() >= 3 {
        let s = rest(3).pushed(items[1].clone()).pushed(items[2].clone());
        out.push(Expect::Next(proc(items[0].clone(), s), Rule::Switch));
    }
    if *h == Term::B && items.len() >= 3 {
        let s = rest(3).pushed(app(items[1].clone(), items[2].clone()));
        out.push(Expect::Next(proc(items[0].clone(), s), Rule::Apply));
    }
    if *h == Term::CC && !items.is_empty() {
        let s = rest(1).pushed(oracle_k(&items[1..]));
        out.push(Expect::Next(proc(items[0].clone(), s), Rule::Save));
    }
    if *h == Term::CHI && items.len() >= 2 {
        let tau = items.last().unwrap().clone();
        let mid = Stack::from_items(items[1..items.len() - 1].iter().cloned());
        out.push(Expect::Next(proc(items[0].clone(), mid.pushed(tau)), Rule::ReadEnd));
    }
    if *h == Term::CHI_PRIME && items.len() >= 2 {
        out.push(Expect::Next(proc(items[1].clone(), rest(2).with_back(items[0].clone())), Rule::WriteEnd));
    }
    out
}

fn agrees_with_model(p: &Process) -> Result<(), String> {
    let cfg = OracleConfig::none();
    let clauses = matching_clauses(p);
    ensure(clauses.len() <= 1, || format!("{} clauses match {p}", clauses.len()))?;
    let got = step(p, &cfg);
    match (clauses.first(), got) {
        (None, StepResult::Stuck(_)) => Ok(()),
        (Some(Expect::Stop), StepResult::Accept(AcceptKind::Stop)) => Ok(()),
        (Some(Expect::Next(q, r)), StepResult::Next(q2, r2)) if *q == q2 && *r == r2 => Ok(()),
        (Some(Expect::Branch(bs)), StepResult::Branch3(got)) if *bs == *got => Ok(()),
        (e, g) => Err(format!("{p}: model {e:?}, machine {g:?}")),
    }
}

// Random material

const ATOMS: &[&str] = &[
    "B", "C", "I", "K", "W", "cc", "a", "p", "gamma", "kappa", "e", "chi", "chi'", "frak-c", "h0", "h1", "h2", "h5",
    "delta",
];

fn rand_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.45) {
        let a = ATOMS.choose(rng).unwrap();
        return parse_term(a).unwrap();
    }
    app(rand_term(rng, depth - 1), rand_term(rng, depth - 1))
}

fn rand_stack(rng: &mut ChaCha8Rng, max_len: usize) -> Stack {
    let n = rng.gen_range(0..=max_len);
    Stack::from_items((0..n).map(|_| rand_term(rng, 2)))
}

fn rule_head(rule: u8, rng: &mut ChaCha8Rng) -> Term {
    match rule {
        1 => Term::STOP,
        2 => Term::ABORT,
        3 => Term::FORK,
        4 | 5 => Term::E,
        6 => Term::KAPPA,
        7 => app(rand_term(rng, 2), rand_term(rng, 2)),
        8 => Term::I,
        9 => Term::K,
        10 => Term::W,
        11 => Term::C,
        12 => Term::B,
        13 => Term::CC,
        14 => Term::CHI,
        15 => Term::CHI_PRIME,
        _ => unreachable!(),
    }
}

fn rule_stack(rule: u8, rng: &mut ChaCha8Rng) -> Stack {
    let mut s = rand_stack(rng, 7);
    if matches!(rule, 4 | 5) && rng.gen_bool(0.8) {
        let i = rng.gen_range(0..3);
        let j = if rule == 4 { i } else { (i + rng.gen_range(1..3)) % 3 };
        s = s.pushed(rand_term(rng, 1)).pushed(rand_term(rng, 1)).pushed(Term::H(j)).pushed(Term::H(i));
    }
    s
}

// 1

fn rule_examples() -> Result<(), String> {
    let (xi, eta, zeta, t) = (Term::H(7), Term::H(8), Term::H(9), Term::H(10));
    let pi = stack([Term::K, Term::H(11)]);
    let cfg = OracleConfig::none();
    let on = |head: Term, items: Vec<Term>| proc(head, Stack::from_items(items.into_iter().chain(pi.iter().cloned())));
    let next = |q: Process, r: Rule| StepResult::Next(q, r);
    let cases: Vec<(&str, Process, StepResult)> = vec![
        ("1 stop", on(Term::STOP, vec![xi.clone()]), StepResult::Accept(AcceptKind::Stop)),
        ("2 abort", on(Term::ABORT, vec![xi.clone()]), next(proc(xi.clone(), Stack::empty()), Rule::Abort)),
        (
            "3 fork",
            on(Term::FORK, vec![xi.clone(), eta.clone(), zeta.clone()]),
            StepResult::Branch3(Box::new([
                proc(xi.clone(), pi.clone()),
                proc(eta.clone(), pi.clone()),
                proc(zeta.clone(), pi.clone()),
            ])),
        ),
        (
            "4 elimination, same",
            on(Term::E, vec![Term::H(2), Term::H(2), eta.clone(), xi.clone()]),
            next(proc(xi.clone(), pi.clone()), Rule::ElimSame),
        ),
        (
            "5 elimination, distinct",
            on(Term::E, vec![Term::H(2), Term::H(3), xi.clone(), eta.clone()]),
            next(proc(xi.clone(), pi.clone()), Rule::ElimDistinct),
        ),
        (
            "6 introduction",
            on(Term::KAPPA, vec![Term::I]),
            next(proc(Term::I, pi.clone().pushed(Term::H(0))), Rule::Intro),
        ),
        ("7 push", on(app(xi.clone(), eta.clone()), vec![]), next(on(xi.clone(), vec![eta.clone()]), Rule::Push)),
        ("8 no operation", on(Term::I, vec![xi.clone()]), next(proc(xi.clone(), pi.clone()), Rule::Noop)),
        ("9 delete", on(Term::K, vec![xi.clone(), eta.clone()]), next(proc(xi.clone(), pi.clone()), Rule::Delete)),
        (
            "10 copy",
            on(Term::W, vec![xi.clone(), eta.clone()]),
            next(on(xi.clone(), vec![eta.clone(), eta.clone()]), Rule::Copy),
        ),
        (
            "11 switch",
            on(Term::C, vec![xi.clone(), eta.clone(), zeta.clone()]),
            next(on(xi.clone(), vec![zeta.clone(), eta.clone()]), Rule::Switch),
        ),
        (
            "12 apply",
            on(Term::B, vec![xi.clone(), eta.clone(), zeta.clone()]),
            next(on(xi.clone(), vec![app(eta.clone(), zeta.clone())]), Rule::Apply),
        ),
        (
            "13 save the stack",
            on(Term::CC, vec![xi.clone()]),
            next(on(xi.clone(), vec![oracle_k(&pi.iter().cloned().collect::<Vec<_>>())]), Rule::Save),
        ),
        (
            "14 read the end",
            proc(Term::CHI, stack([xi.clone(), Term::K, t.clone()])),
            next(proc(xi.clone(), stack([t.clone(), Term::K])), Rule::ReadEnd),
        ),
        (
            "15 write at the end",
            on(Term::CHI_PRIME, vec![t.clone(), xi.clone()]),
            next(proc(xi.clone(), pi.clone().with_back(t.clone())), Rule::WriteEnd),
        ),
    ];
    for (name, p, want) in cases {
        let got = step(&p, &cfg);
        ensure(got == want, || format!("rule {name}: {p} gave {got:?}, expected {want:?}"))?;
    }
    // displayed instances
    let k_i_w = proc(Term::K, stack([Term::I, Term::W]));
    ensure(step(&k_i_w, &cfg) == next(proc(Term::I, Stack::empty()), Rule::Delete), || "K ⋆ I·W".into())?;
    let cc = proc(Term::CC, stack([Term::I, Term::K]));
    let want = next(proc(Term::I, stack([oracle_k(&[Term::K]), Term::K])), Rule::Save);
    ensure(step(&cc, &cfg) == want, || "cc ⋆ I·K".into())?;
    let w = proc(Term::CHI_PRIME, stack([t.clone(), xi.clone()]));
    ensure(step(&w, &cfg) == next(proc(xi.clone(), stack([t.clone()])), Rule::WriteEnd), || "χ′ at π0".into())?;
    let empty = proc(Term::CHI, stack([xi.clone()]));
    ensure(
        step(&empty, &cfg) == StepResult::Stuck(rzm::machine::StuckReason::EmptyBack),
        || "χ ⋆ ξ·π0 must be stuck on an empty back".into(),
    )?;
    Ok(())
}

fn criterion_1() -> Check {
    rule_examples()?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut fired = [0usize; 16];
    for rule in 1..=15u8 {
        for _ in 0..1000 {
            let p = proc(rule_head(rule, &mut rng), rule_stack(rule, &mut rng));
            agrees_with_model(&p)?;
            if let StepResult::Next(_, r) = step(&p, &OracleConfig::none()) {
                fired[r as usize] += 1;
            }
        }
    }
    // arbitrary heads as well, so that clauses are tried against each other
    for _ in 0..5000 {
        let p = proc(rand_term(&mut rng, 3), rand_stack(&mut rng, 6));
        agrees_with_model(&p)?;
    }
    let silent: Vec<usize> = (2..=15).filter(|&r| r != 3 && fired[r] == 0).collect();
    ensure(silent.is_empty(), || format!("rules never exercised: {silent:?}"))?;
    Ok("15 displayed transitions, 15x1000 + 5000 random processes, one clause each".into())
}

// 2

fn criterion_2() -> Check {
    for n in 0..=100u64 {
        let got = decode_numeral(&numeral(n), 50 * n + 50);
        ensure(got == Ok(n), || format!("numeral {n} decoded as {got:?}"))?;
    }
    Ok("n in [0,100] within fuel 50n+50".into())
}

// 3

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = OracleConfig::none();
    let pool = [Term::I, Term::K, Term::W, Term::H(0), Term::H(4), Term::delta(), app(Term::B, Term::C)];
    let mut max_steps = 0;
    for case in 0..500 {
        let depth = rng.gen_range(0..=8);
        let items: Vec<Term> = (0..depth).map(|_| rand_term(&mut rng, 2)).collect();
        let pi = Stack::from_items(items.iter().cloned());
        let xi = pool.choose(&mut rng).unwrap().clone();
        let StepResult::Next(saved, Rule::Save) = step(&proc(Term::CC, pi.clone().pushed(xi.clone())), &cfg) else {
            return Err(format!("case {case}: cc did not save"));
        };
        let k = saved.stack.top().cloned().unwrap();
        ensure(k == oracle_k(&items), || format!("case {case}: captured {k}"))?;
        ensure(saved.head == xi, || format!("case {case}: head {}", saved.head))?;
        let fresh = pool.choose(&mut rng).unwrap().clone();
        let varpi = rand_stack(&mut rng, 5);
        let start = proc(k, varpi.pushed(fresh.clone()));
        let target = proc(fresh, pi);
        let n = reaches(start.clone(), &target, 10_000, &cfg).ok_or_else(|| format!("{start} did not restore"))?;
        max_steps = max_steps.max(n);
    }
    Ok(format!("500 stacks of depth <= 8 restored, at most {max_steps} steps"))
}

// 4

const LAMBDA_CONSTS: &[&str] = &[
    "B", "C", "I", "K", "W", "cc", "p", "gamma", "kappa", "chi", "chi'", "delta", "n:0", "n:1", "n:2", "n:3", "h0",
    "h1", "e h0 h0", "e h0 h1", "e h1 h1 (delta n:1)",
];

struct LambdaGen<'a> {
    rng: &'a mut ChaCha8Rng,
    fresh: usize,
}

impl LambdaGen<'_> {
    /// A term of at most `budget` nodes over the variables in `scope`.
    fn term(&mut self, scope: &mut Vec<String>, budget: usize) -> LambdaTerm {
        let r = self.rng.gen_range(0..10);
        if budget <= 1 || r < 3 {
            if !scope.is_empty() && self.rng.gen_bool(0.6) {
                return LambdaTerm::var(scope.choose(self.rng).unwrap());
            }
            let c = LAMBDA_CONSTS.choose(self.rng).unwrap();
            return LambdaTerm::Const(parse_term(c).unwrap());
        }
        if r < 6 || budget < 3 {
            let name = format!("v{}", self.fresh);
            self.fresh += 1;
            scope.push(name.clone());
            let body = self.term(scope, budget - 1);
            scope.pop();
            return LambdaTerm::lam(&name, body);
        }
        let left = self.rng.gen_range(1..=budget - 2);
        let f = self.term(scope, left);
        let x = self.term(scope, budget - 1 - left);
        LambdaTerm::app(f, x)
    }
}

fn lambda_stack(rng: &mut ChaCha8Rng) -> Stack {
    let pool = [
        Term::delta(),
        numeral(0),
        numeral(2),
        numeral(5),
        Term::STOP,
        Term::I,
        Term::K,
        app(Term::K, Term::STOP),
        delta_of(4),
        Term::H(3),
    ];
    let n = rng.gen_range(0..=5);
    Stack::from_items((0..n).map(|_| pool.choose(rng).unwrap().clone()))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = OracleConfig::collector();
    let fuel = 100_000;
    let no_eta = EliminationOptions { eta: false };
    let (mut co_ref, mut co_beta, mut co_eta, mut accepts) = (0, 0, 0, 0);
    for case in 0..300 {
        let mut g = LambdaGen { rng: &mut rng, fresh: 0 };
        let size = g.rng.gen_range(3..=30);
        let t = g.term(&mut Vec::new(), size);
        ensure(t.size() <= 30 && t.is_closed(), || format!("generator produced {t}"))?;
        let pi = lambda_stack(&mut rng);
        let compiled = abstract_eliminate(&t).map_err(|e| e.to_string())?;
        let o_comb = observe(proc(compiled, pi.clone()), fuel, &cfg);
        let o_ref = ref_run(&t, &pi, fuel, &cfg).observable;
        if o_comb.terminated() && o_ref.terminated() {
            co_ref += 1;
        }
        if !o_comb.payloads().is_empty() || matches!(o_comb, Observable::Accept(_)) {
            accepts += 1;
        }
        ensure(agree(&o_comb, &o_ref), || format!("case {case}: {t} on {pi}: machine {o_comb:?}, reference {o_ref:?}"))?;

        let plain = abstract_eliminate_with(&t, no_eta).map_err(|e| e.to_string())?;
        let o_plain = observe(proc(plain, pi.clone()), fuel, &cfg);
        if o_plain.terminated() && o_comb.terminated() {
            co_eta += 1;
        }
        ensure(agree(&o_comb, &o_plain), || format!("case {case}: eta changed {t}"))?;

        // (λx.b) u against b[u/x]
        let mut g = LambdaGen { rng: &mut rng, fresh: 100 };
        let mut scope = vec!["x".to_string()];
        let body = g.term(&mut scope, 12);
        let arg = g.term(&mut Vec::new(), 8);
        let redex = LambdaTerm::app(LambdaTerm::lam("x", body.clone()), arg.clone());
        let contractum = substitute(&body, "x", &arg);
        let a = observe(proc(abstract_eliminate(&redex).unwrap(), pi.clone()), fuel, &cfg);
        let b = observe(proc(abstract_eliminate(&contractum).unwrap(), pi.clone()), fuel, &cfg);
        if a.terminated() && b.terminated() {
            co_beta += 1;
        }
        ensure(agree(&a, &b), || format!("case {case}: {redex} vs {contractum}: {a:?} / {b:?}"))?;
    }
    Ok(format!(
        "300 terms: co-terminating {co_ref} (reference), {co_eta} (eta off), {co_beta} (beta); {accepts} accepting runs; 0 disagreements"
    ))
}

// 5

#[derive(Clone, Debug)]
enum Plan {
    Leaf(u64, u8),
    Fork(Box<[Plan; 3]>),
    Diverge,
    Stuck,
}

impl Plan {
    fn term(&self) -> Term {
        match self {
            Plan::Leaf(n, 0) => delta_of(*n),
            Plan::Leaf(n, 1) => app(Term::I, delta_of(*n)),
            Plan::Leaf(n, 2) => apply(Term::K, [delta_of(*n), Term::H(2)]),
            Plan::Leaf(n, _) => apply(Term::B, [Term::delta(), Term::I, numeral(*n)]),
            Plan::Fork(c) => apply(Term::FORK, [c[0].term(), c[1].term(), c[2].term()]),
            Plan::Diverge => apply(Term::W, [Term::W, Term::W]),
            Plan::Stuck => Term::H(0),
        }
    }

    /// Majority folding over the plan: the value produced by at least two children.
    fn value(&self) -> Option<u64> {
        match self {
            Plan::Leaf(n, _) => Some(*n),
            Plan::Diverge | Plan::Stuck => None,
            Plan::Fork(c) => {
                let vs: Vec<Option<u64>> = c.iter().map(Plan::value).collect();
                (0..3).find_map(|i| {
                    let v = vs[i]?;
                    (vs.iter().filter(|w| **w == Some(v)).count() >= 2).then_some(v)
                })
            }
        }
    }

    fn has_diverging(&self) -> bool {
        match self {
            Plan::Diverge => true,
            Plan::Fork(c) => c.iter().any(Plan::has_diverging),
            _ => false,
        }
    }
}

fn planted(rng: &mut ChaCha8Rng, n0: u64, depth: u32, force_diverge: bool) -> Plan {
    if depth == 0 || (!force_diverge && rng.gen_bool(0.3)) {
        return Plan::Leaf(n0, rng.gen_range(0..4));
    }
    let mut kids: [Plan; 3] = std::array::from_fn(|_| planted(rng, n0, depth - 1, false));
    if force_diverge || rng.gen_bool(0.6) {
        let slot = rng.gen_range(0..3);
        kids[slot] = match if force_diverge { 0 } else { rng.gen_range(0..4) } {
            0 => Plan::Diverge,
            1 => Plan::Stuck,
            2 => Plan::Leaf(n0 + rng.gen_range(1..4), 0),
            _ => planted(rng, n0 + 1, depth - 1, false),
        };
    }
    Plan::Fork(Box::new(kids))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fuel = 2_000_000;
    let cfg = OracleConfig::collector();
    let mut diverging = 0;
    for case in 0..100 {
        let n0 = rng.gen_range(0..12);
        let depth = rng.gen_range(1..=5);
        let plan = planted(&mut rng, n0, depth, case == 0);
        ensure(plan.value() == Some(n0), || format!("case {case}: generator planted {:?}", plan.value()))?;
        diverging += plan.has_diverging() as usize;
        let report = if case % 2 == 0 {
            extract_process(proc(plan.term(), Stack::empty()), fuel, &cfg)
        } else {
            // the same tree behind a λ-abstracted oracle: θ ⋆ δ·π0
            let body = plan.term().to_string().replace("delta", "d");
            let theta = abstract_eliminate(&rzm::syntax::parse_lambda(&format!("\\d. {body}")).unwrap()).unwrap();
            extract_witness(&theta, fuel, "delta")
        };
        ensure(report.value() == Some(n0), || format!("case {case}: planted {n0}, got {}", report.result))?;
    }
    ensure(diverging >= 1, || "no diverging instance".into())?;

    // γ ⋆ A·B·C·π0 with n = 3, n0 = 5
    let n = |v| Plan::Leaf(v, 0);
    let fork = |a, b, c| Plan::Fork(Box::new([a, b, c]));
    let a = fork(n(3), n(3), n(5));
    let b = fork(n(5), n(3), n(5));
    let c = fork(n(3), n(5), n(5));
    let expected = fork(a.clone(), b.clone(), c.clone()).value();
    ensure(expected == Some(5), || format!("hand fold gives {expected:?}"))?;
    let p = proc(Term::FORK, stack([a.term(), b.term(), c.term()]));
    let text = "gamma (gamma (delta n:3) (delta n:3) (delta n:5)) (gamma (delta n:5) (delta n:3) (delta n:5)) (gamma (delta n:3) (delta n:5) (delta n:5))";
    let from_text = proc(parse_term(text).unwrap(), Stack::empty());
    for q in [p, from_text] {
        let r = extract_process(q, fuel, &cfg);
        ensure(r.value() == Some(5), || format!("fork example gave {}", r.result))?;
    }

    // θ″ = θ′(γ) applied to two realizers answering 0 and 1
    let zero = abstract_eliminate(&rzm::syntax::parse_lambda("\\x. x n:0").unwrap()).unwrap();
    let one = abstract_eliminate(&rzm::syntax::parse_lambda("\\x. x n:1").unwrap()).unwrap();
    let theta2 = apply(theta_prime(&Term::FORK), [zero, one]);
    let r = extract_witness(&theta2, fuel, "delta");
    let want = ExtractResult::Ambiguous { values: BTreeSet::from([0, 1]) };
    ensure(r.result == want, || format!("θ″ gave {}", r.result))?;
    Ok(format!("100 planted trees ({diverging} with a diverging branch); fork example 5; θ″ ambiguous {{0,1}}"))
}

// 6

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = OracleConfig::none();
    for case in 0..200 {
        let i = rng.gen_range(0..4);
        let j = if rng.gen_bool(0.5) { i } else { rng.gen_range(0..4) };
        let (u, v) = (rand_term(&mut rng, 2), rand_term(&mut rng, 2));
        let pi = rand_stack(&mut rng, 4);
        let p = proc(Term::E, pi.clone().pushed(v.clone()).pushed(u.clone()).pushed(Term::H(j)).pushed(Term::H(i)));
        let (want_head, want_rule) = if i == j { (v, Rule::ElimSame) } else { (u, Rule::ElimDistinct) };
        let got = step(&p, &cfg);
        ensure(got == StepResult::Next(proc(want_head, pi), want_rule), || format!("case {case}: {p} gave {got:?}"))?;
    }
    for case in 0..200 {
        let head = rand_term(&mut rng, 2);
        let pi = rand_stack(&mut rng, 5);
        let p = proc(Term::KAPPA, pi.pushed(head));
        let f = oracle_fresh(&p);
        let StepResult::Next(q, Rule::Intro) = step(&p, &cfg) else {
            return Err(format!("case {case}: κ did not introduce"));
        };
        let Some(Term::H(got)) = q.stack.top() else {
            return Err(format!("case {case}: no constant on top of {q}"));
        };
        let mut used = HashSet::new();
        collect_h(&p.head, &mut used);
        p.stack.iter().for_each(|t| collect_h(t, &mut used));
        ensure(!used.contains(got) && *got == f, || format!("case {case}: κ chose h{got}, least fresh is h{f}"))?;
    }
    Ok("200 e discriminations, 200 κ introductions fresh and least".into())
}

// 7

fn proof_like_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    const PL: &[&str] = &["B", "C", "I", "K", "W", "cc", "gamma", "kappa", "e", "chi", "chi'"];
    if depth == 0 || rng.gen_bool(0.35) {
        return parse_term(PL.choose(rng).unwrap()).unwrap();
    }
    app(proof_like_term(rng, depth - 1), proof_like_term(rng, depth - 1))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = OracleConfig::none();
    let mut nodes = 0;
    for case in 0..50 {
        let theta = proof_like_term(&mut rng, 6);
        ensure(is_proof_like(&theta), || format!("{theta} should be proof-like"))?;
        let tree = exec_tree(proc(theta.clone(), Stack::empty()), 10_000, &cfg);
        nodes += tree.nodes.len();
        ensure(tree.accepts().is_empty(), || format!("case {case}: {theta} ⋆ π0 accepted"))?;
    }
    Ok(format!("50 proof-like terms, {nodes} states explored, no acceptance"))
}

// 8

fn criterion_8() -> Check {
    let mut out = Vec::new();
    for (i, law) in StarLaw::ALL.into_iter().enumerate() {
        let r = verify_star_law(law, 500, 80 + i as u64);
        ensure(r.matched == 500, || format!("{law}: {}/500, first failure {:?}", r.matched, r.failures.first()))?;
        out.push(format!("{law} {}/500 (<= {} steps)", r.matched, r.max_steps));
    }
    Ok(out.join(", "))
}

// 9

fn cohen_compatible_oracle(seq: &CondSeq) -> bool {
    let mut seen = std::collections::HashMap::new();
    for c in seq.conditions() {
        if let Condition::Cohen(cc) = c {
            for (k, b) in cc.entries() {
                if *seen.entry(k).or_insert(b) != b {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_9() -> Check {
    let fuel = 1000;
    let mut summary = Vec::new();
    for name in ["cohen", "trivial"] {
        let cs = ConditionSystem::from_name(name).map_err(|e| e.to_string())?;
        let report = check_closure_laws(&cs, 500, fuel, 9);
        for l in &report.laws {
            ensure(l.violations.is_empty(), || format!("{name} {}: {}", l.law, l.violations[0]))?;
            ensure(l.premises_certified > l.vacuous, || format!("{name} {}: no non-vacuous premise", l.law))?;
        }
        let certified: usize = report.laws.iter().map(|l| l.premises_certified - l.vacuous).sum();
        summary.push(format!("{name}: 8x500, {certified} non-vacuous premises"));
    }
    let cs = ConditionSystem::from_name("cohen").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut compatible = 0;
    for case in 0..1000 {
        let [p, q, r, t, u, v, w] = [(); 7].map(|_| {
            let len = rng.gen_range(0..=2);
            cs.random_seq(&mut rng, len)
        });
        let big = CondSeq::join([&p, &q, &r, &t, &u, &v, &w]);
        let small = CondSeq::join([&p, &t, &r, &u, &u, &v]);
        ensure(cs.compatible(&big) == cohen_compatible_oracle(&big), || format!("case {case}: compatible({big})"))?;
        ensure(cs.compatible(&small) == cohen_compatible_oracle(&small), || format!("case {case}: {small}"))?;
        if cs.compatible(&big) {
            compatible += 1;
            ensure(cs.compatible(&small), || format!("case {case}: {big} compatible but not {small}"))?;
            let c = app(Term::FRAK, Term::cert(big.clone()));
            ensure(cert_valid(&c, &small, &cs), || format!("case {case}: 𝔠 transfer from {big}"))?;
        }
    }
    summary.push(format!("monotonicity 1000 tuples ({compatible} compatible)"));
    Ok(summary.join("; "))
}

// 10

fn oracle_chi(ps: &PropStructure, base: &BaseTerms) -> (Term, Term) {
    // λxλy (o)(x)(i)y eliminates to B (B o) (C B i)
    let node = |o: Term, i: Term| apply(Term::B, [app(Term::B, o), apply(Term::C, [Term::B, i])]);
    match ps {
        PropStructure::Atom(a) => {
            let (q, qp) = match a {
                Atom::In => base.on_in.clone(),
                Atom::Sub => base.on_sub.clone(),
            };
            (apply(Term::B, [Term::CHI, q]), apply(Term::B, [qp, Term::CHI_PRIME]))
        }
        PropStructure::Imp(l, r) => {
            let (cl, cpl) = oracle_chi(l, base);
            let (cr, cpr) = oracle_chi(r, base);
            (node(cr, cpl), node(cpr, cl))
        }
    }
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..50 {
        let ps = PropStructure::random(&mut rng, 5);
        ensure(ps.depth() <= 5, || format!("depth {}", ps.depth()))?;
        ensure(PropStructure::parse(&ps.to_string()).as_ref() == Ok(&ps), || format!("{ps} does not reparse"))?;
        let base = BaseTerms {
            on_in: (proof_like_term(&mut rng, 2), proof_like_term(&mut rng, 2)),
            on_sub: (proof_like_term(&mut rng, 2), proof_like_term(&mut rng, 2)),
        };
        let (chi, chi_p) = chi_transformers(&ps, &base);
        ensure(is_proof_like(&chi) && is_proof_like(&chi_p), || format!("case {case}: not proof-like"))?;
        let want = oracle_chi(&ps, &base);
        ensure((chi, chi_p) == want, || format!("case {case}: shape mismatch for {ps}"))?;
    }
    let worked = PropStructure::parse("((O_∈→O_∈)→O_∈)→O_∈").map_err(|e| e.to_string())?;
    ensure(worked.depth() == 3, || "worked structure depth".into())?;
    let base = BaseTerms { on_in: (Term::K, Term::W), on_sub: (Term::I, Term::C) };
    ensure(chi_transformers(&worked, &base) == oracle_chi(&worked, &base), || "worked structure".into())?;
    Ok("50 random structures of depth <= 5 and the worked structure".into())
}

type Criterion = (&'static str, fn() -> Check, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rule conformance", criterion_1, Duration::from_secs(5)),
        ("numeral roundtrip", criterion_2, Duration::from_secs(2)),
        ("continuation restoration", criterion_3, Duration::from_secs(5)),
        ("translation soundness", criterion_4, Duration::from_secs(60)),
        ("witness extraction", criterion_5, Duration::from_secs(60)),
        ("kappa/e semantics", criterion_6, Duration::from_secs(2)),
        ("coherence smoke", criterion_7, Duration::from_secs(30)),
        ("star reductions", criterion_8, Duration::from_secs(30)),
        ("closure laws", criterion_9, Duration::from_secs(120)),
        ("chi transformers", criterion_10, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, run, bound)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= bound => (true, d),
            Ok(d) => (false, format!("{d}; over the time bound")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "criterion {:>2} {:<26} {}  {:>7.2}s (bound {}s)  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            bound.as_secs(),
            detail
        );
    }
    if failed == 0 {
        println!("acceptance: 10/10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
