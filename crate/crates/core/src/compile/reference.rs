//! Environment-based call-by-name machine over λ-terms. It implements the same
//! instruction rules as the combinator machine but runs binders directly, and
//! serves as the reference semantics for abstraction elimination.

use std::collections::{HashSet, VecDeque};
use std::rc::Rc;
use std::sync::Arc;

use super::lambda::LambdaTerm;
use crate::machine::{AcceptKind, Observable, OracleConfig, OracleMode};
use crate::syntax::{Instr, Stack, Term};

/// λ-term annotated with its free variables.
#[derive(Debug)]
enum Node {
    Var(Arc<str>),
    Lam(Arc<str>, Rc<Code>),
    App(Rc<Code>, Rc<Code>),
    Const(Term),
}

#[derive(Debug)]
struct Code {
    node: Node,
    free: Vec<Arc<str>>,
}

fn annotate(t: &LambdaTerm) -> Rc<Code> {
    let (node, mut free) = match t {
        LambdaTerm::Var(x) => (Node::Var(x.clone()), vec![x.clone()]),
        LambdaTerm::Const(c) => (Node::Const(c.clone()), Vec::new()),
        LambdaTerm::Lam(x, b) => {
            let body = annotate(b);
            let free = body.free.iter().filter(|y| *y != x).cloned().collect();
            (Node::Lam(x.clone(), body), free)
        }
        LambdaTerm::LApp(f, a) => {
            let (f, a) = (annotate(f), annotate(a));
            let mut free = f.free.clone();
            free.extend(a.free.iter().cloned());
            (Node::App(f, a), free)
        }
    };
    free.sort();
    free.dedup();
    Rc::new(Code { node, free })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Probe {
    Tick,
    Done,
}

type Env = Rc<Vec<(Arc<str>, Rc<Clo>)>>;

#[derive(Debug)]
enum Clo {
    /// Code under an environment binding exactly its free variables.
    Code(Rc<Code>, Env),
    /// A binder-free term.
    Term(Term),
    App(Rc<Clo>, Rc<Clo>),
    /// Saved stack, restored when invoked.
    Cont(VecDeque<Rc<Clo>>),
    Probe(Probe),
}

fn lookup(env: &Env, x: &str) -> Rc<Clo> {
    env.iter()
        .find(|(y, _)| &**y == x)
        .map(|(_, c)| c.clone())
        .expect("environments bind the free variables")
}

fn restrict(env: &Env, code: &Code) -> Env {
    if code.free.len() == env.len() {
        return env.clone();
    }
    Rc::new(code.free.iter().map(|x| (x.clone(), lookup(env, x))).collect())
}

/// Builds the closure for code in an environment, resolving variables and
/// constants right away.
fn close(code: &Rc<Code>, env: &Env) -> Rc<Clo> {
    match &code.node {
        Node::Var(x) => lookup(env, x),
        Node::Const(t) => Rc::new(Clo::Term(t.clone())),
        _ => Rc::new(Clo::Code(code.clone(), restrict(env, code))),
    }
}

fn as_h(c: &Clo) -> Option<u32> {
    match c {
        Clo::Term(Term::H(i)) => Some(*i),
        _ => None,
    }
}

fn collect_h(c: &Rc<Clo>, seen: &mut HashSet<*const Clo>, terms: &mut HashSet<*const Term>, out: &mut HashSet<u32>) {
    let mut todo = vec![c.clone()];
    while let Some(c) = todo.pop() {
        if !seen.insert(Rc::as_ptr(&c)) {
            continue;
        }
        match &*c {
            Clo::Code(code, env) => {
                collect_code_h(code, out);
                todo.extend(env.iter().map(|(_, c)| c.clone()));
            }
            Clo::Term(t) => t.visit_shared(terms, &mut |n| {
                if let Term::H(i) = n {
                    out.insert(*i);
                }
            }),
            Clo::App(f, x) => {
                todo.push(f.clone());
                todo.push(x.clone());
            }
            Clo::Cont(items) => todo.extend(items.iter().cloned()),
            Clo::Probe(_) => {}
        }
    }
}

fn collect_code_h(code: &Code, out: &mut HashSet<u32>) {
    match &code.node {
        Node::Var(_) => {}
        Node::Const(t) => t.visit_shared(&mut HashSet::new(), &mut |n| {
            if let Term::H(i) = n {
                out.insert(*i);
            }
        }),
        Node::Lam(_, b) => collect_code_h(b, out),
        Node::App(f, a) => {
            collect_code_h(f, out);
            collect_code_h(a, out);
        }
    }
}

enum Step {
    Next,
    Fork([State; 3]),
    Accept(AcceptKind),
    Stuck,
}

#[derive(Clone)]
struct State {
    head: Rc<Clo>,
    stack: VecDeque<Rc<Clo>>,
}

impl State {
    fn fresh_index(&self) -> u32 {
        let mut seen = HashSet::new();
        let mut terms = HashSet::new();
        let mut used = HashSet::new();
        for c in std::iter::once(&self.head).chain(self.stack.iter()) {
            collect_h(c, &mut seen, &mut terms, &mut used);
        }
        (0..).find(|i| !used.contains(i)).expect("finitely many constants")
    }

    fn step(&mut self, cfg: &OracleConfig) -> Step {
        let head = self.head.clone();
        match &*head {
            Clo::Code(code, env) => match &code.node {
                Node::Var(x) => self.head = lookup(env, x),
                Node::Const(t) => self.head = Rc::new(Clo::Term(t.clone())),
                Node::Lam(x, body) => {
                    let Some(arg) = self.stack.pop_front() else { return Step::Stuck };
                    let mut bound: Vec<(Arc<str>, Rc<Clo>)> = Vec::with_capacity(body.free.len());
                    for y in &body.free {
                        let c = if y == x { arg.clone() } else { lookup(env, y) };
                        bound.push((y.clone(), c));
                    }
                    self.head = Rc::new(Clo::Code(body.clone(), Rc::new(bound)));
                }
                Node::App(f, a) => {
                    self.stack.push_front(close(a, env));
                    self.head = close(f, env);
                }
            },
            Clo::App(f, x) => {
                self.stack.push_front(x.clone());
                self.head = f.clone();
            }
            Clo::Cont(saved) => {
                let Some(xi) = self.stack.pop_front() else { return Step::Stuck };
                self.head = xi;
                self.stack = saved.clone();
            }
            Clo::Probe(_) => return Step::Stuck,
            Clo::Term(Term::App(f, x)) => {
                self.stack.push_front(Rc::new(Clo::Term((**x).clone())));
                self.head = Rc::new(Clo::Term((**f).clone()));
            }
            Clo::Term(Term::Oracle(name)) => return self.oracle(name, cfg),
            Clo::Term(Term::H(_) | Term::Cert(_)) => return Step::Stuck,
            Clo::Term(Term::Instr(i)) => return self.instruction(*i),
        }
        Step::Next
    }

    fn pop<const N: usize>(&mut self) -> Option<[Rc<Clo>; N]> {
        if self.stack.len() < N {
            return None;
        }
        Some(std::array::from_fn(|_| self.stack.pop_front().expect("length checked")))
    }

    fn instruction(&mut self, i: Instr) -> Step {
        macro_rules! args {
            ($n:literal) => {
                match self.pop::<$n>() {
                    Some(a) => a,
                    None => return Step::Stuck,
                }
            };
        }
        match i {
            Instr::Stop => return Step::Accept(AcceptKind::Stop),
            Instr::Abort => {
                let [xi] = args!(1);
                self.head = xi;
                self.stack.clear();
            }
            Instr::Fork => {
                let [xi, eta, zeta] = args!(3);
                let rest = std::mem::take(&mut self.stack);
                let branch = |h: Rc<Clo>| State { head: h, stack: rest.clone() };
                return Step::Fork([branch(xi), branch(eta), branch(zeta)]);
            }
            Instr::E => {
                if self.stack.len() < 4 {
                    return Step::Stuck;
                }
                let (Some(a), Some(b)) = (as_h(&self.stack[0]), as_h(&self.stack[1])) else {
                    return Step::Stuck;
                };
                let [_, _, u, v] = args!(4);
                self.head = if a == b { v } else { u };
            }
            Instr::Kappa => {
                if self.stack.is_empty() {
                    return Step::Stuck;
                }
                let fresh = self.fresh_index();
                let [xi] = args!(1);
                self.stack.push_front(Rc::new(Clo::Term(Term::H(fresh))));
                self.head = xi;
            }
            Instr::I => {
                let [xi] = args!(1);
                self.head = xi;
            }
            Instr::K => {
                let [xi, _] = args!(2);
                self.head = xi;
            }
            Instr::W => {
                let [xi, eta] = args!(2);
                self.stack.push_front(eta.clone());
                self.stack.push_front(eta);
                self.head = xi;
            }
            Instr::C => {
                let [xi, eta, zeta] = args!(3);
                self.stack.push_front(eta);
                self.stack.push_front(zeta);
                self.head = xi;
            }
            Instr::B => {
                let [xi, eta, zeta] = args!(3);
                self.stack.push_front(Rc::new(Clo::App(eta, zeta)));
                self.head = xi;
            }
            Instr::Cc => {
                let [xi] = args!(1);
                self.stack.push_front(Rc::new(Clo::Cont(self.stack.clone())));
                self.head = xi;
            }
            Instr::Chi => {
                if self.stack.len() < 2 {
                    return Step::Stuck;
                }
                let [xi] = args!(1);
                let tau = self.stack.pop_back().expect("length checked");
                self.stack.push_front(tau);
                self.head = xi;
            }
            Instr::ChiPrime => {
                let [tau, xi] = args!(2);
                self.stack.push_back(tau);
                self.head = xi;
            }
            Instr::Frak => return Step::Stuck,
        }
        Step::Next
    }

    fn oracle(&mut self, name: &str, cfg: &OracleConfig) -> Step {
        if name != &*cfg.oracle || cfg.mode == OracleMode::None {
            return Step::Stuck;
        }
        let Some(arg) = self.stack.front() else { return Step::Stuck };
        match decode(arg.clone(), cfg.decode_fuel) {
            Some(v) if matches!(cfg.mode, OracleMode::Checker(t) if t != v) => Step::Stuck,
            Some(v) => Step::Accept(AcceptKind::Oracle { name: name.to_string(), payload: v }),
            None => Step::Stuck,
        }
    }
}

/// Probing decoder over closures, mirroring the combinator machine's.
fn decode(c: Rc<Clo>, fuel: u64) -> Option<u64> {
    let mut st = State {
        head: c,
        stack: VecDeque::from([Rc::new(Clo::Probe(Probe::Tick)), Rc::new(Clo::Probe(Probe::Done))]),
    };
    let cfg = OracleConfig::none();
    let mut count = 0;
    for _ in 0..fuel {
        match &*st.head {
            Clo::Probe(Probe::Done) => return Some(count),
            Clo::Probe(Probe::Tick) => {
                st.head = st.stack.pop_front()?;
                count += 1;
                continue;
            }
            _ => {}
        }
        match st.step(&cfg) {
            Step::Next => {}
            _ => return None,
        }
    }
    None
}

/// Oracle acceptances of a reference run, with the observable outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefOutcome {
    pub observable: Observable,
    /// `(oracle name, payload)` in the order the branches were explored.
    pub events: Vec<(String, u64)>,
}

/// Runs the closed λ-term `t` against `stack`. Fork children are explored
/// depth first, each from the fuel its elder siblings left over.
pub fn ref_run(t: &LambdaTerm, stack: &Stack, fuel: u64, cfg: &OracleConfig) -> RefOutcome {
    let code = annotate(t);
    assert!(code.free.is_empty(), "ref_run expects a closed term");
    let st = State {
        head: Rc::new(Clo::Code(code, Rc::new(Vec::new()))),
        stack: stack.iter().map(|t| Rc::new(Clo::Term(t.clone()))).collect(),
    };
    let mut left = fuel;
    let mut events = Vec::new();
    let observable = run_branch(st, &mut left, cfg, &mut events);
    RefOutcome { observable, events }
}

fn run_branch(mut st: State, fuel: &mut u64, cfg: &OracleConfig, events: &mut Vec<(String, u64)>) -> Observable {
    loop {
        if *fuel == 0 {
            return Observable::Fuel;
        }
        match st.step(cfg) {
            Step::Next => *fuel -= 1,
            Step::Stuck => return Observable::Stuck,
            Step::Accept(kind) => {
                *fuel -= 1;
                if let AcceptKind::Oracle { name, payload } = &kind {
                    events.push((name.clone(), *payload));
                }
                return Observable::Accept(kind);
            }
            Step::Fork(children) => {
                *fuel -= 1;
                let [a, b, c] = children;
                let oa = run_branch(a, fuel, cfg, events);
                let ob = run_branch(b, fuel, cfg, events);
                let oc = run_branch(c, fuel, cfg, events);
                return Observable::Fork(Box::new([oa, ob, oc]));
            }
        }
    }
}
