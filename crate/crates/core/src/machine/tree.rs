//! Execution trees and the dovetailing scheduler.
//!
//! Open branches sit in one round-robin queue and each visit performs a single
//! step, so a diverging branch cannot starve its siblings. A fork is decided by
//! [`majority`] over its three children as soon as two of them agree.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use serde::Serialize;

use super::step::{try_step, AcceptKind, OracleConfig, Rule, StepResult, StuckReason};
use crate::extract::{majority, Partial};
use crate::syntax::Process;

/// How a branch of the schedule ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "end")]
pub enum BranchEnd {
    Accept { accept: AcceptKind },
    Stuck { reason: StuckReason },
    /// Rule 3 split the branch; its children continue the path.
    Fork,
    /// Still open when the budget ran out.
    Fuel,
    /// Abandoned because an enclosing fork was already decided.
    Pruned,
}

/// One linear segment of the schedule, from its start state up to an end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchSummary {
    /// Child indices from the root, dot separated; empty for the root.
    pub path: String,
    pub start: String,
    pub steps: u64,
    #[serde(flatten)]
    pub end: BranchEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Running,
    Accepted,
    Stuck,
    Forked(usize),
    Pruned,
}

struct Branch<V> {
    path: Vec<u8>,
    start: Process,
    current: Option<Process>,
    steps: u64,
    status: Status,
    end: Option<BranchEnd>,
    result: Partial<V>,
    parent: Option<(usize, usize)>,
    /// Tip of this branch in the recorded tree.
    node: usize,
}

struct Fork<V> {
    branch: usize,
    children: [usize; 3],
    results: [Partial<V>; 3],
    decided: bool,
}

/// Outcome of one scheduler run.
pub(crate) struct Schedule<V> {
    pub verdict: Partial<V>,
    pub steps: u64,
    pub branches: Vec<BranchSummary>,
    /// Results of the children of the first fork on the root's path, if any.
    pub first_fork: Option<[Partial<V>; 3]>,
    pub tree: Option<ExecTree>,
}

pub(crate) struct Options {
    /// Keep every intermediate state.
    pub record: bool,
    /// Stop as soon as the root is decided and drop branches under decided forks.
    pub short_circuit: bool,
}

pub(crate) fn schedule<V: Clone + Eq>(
    root: Process,
    fuel: u64,
    cfg: &OracleConfig,
    leaf: impl Fn(&AcceptKind) -> Partial<V>,
    opts: Options,
) -> Schedule<V> {
    let mut nodes: Vec<ExecNode> = Vec::new();
    if opts.record {
        nodes.push(ExecNode::new(root.clone()));
    }
    let mut branches = vec![Branch {
        path: Vec::new(),
        start: root.clone(),
        current: Some(root),
        steps: 0,
        status: Status::Running,
        end: None,
        result: Partial::Pending,
        parent: None,
        node: 0,
    }];
    let mut forks: Vec<Fork<V>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut used = 0u64;
    let mut root_verdict = Partial::Pending;

    while let Some(b) = queue.pop_front() {
        if branches[b].status != Status::Running {
            continue;
        }
        if opts.short_circuit && root_verdict != Partial::Pending {
            break;
        }
        if used >= fuel {
            queue.push_front(b);
            break;
        }
        let p = branches[b].current.take().expect("running branch has a state");
        let settled = match try_step(p, cfg) {
            Ok(StepResult::Next(q, rule)) => {
                used += 1;
                branches[b].steps += 1;
                if opts.record {
                    let id = nodes.len();
                    nodes.push(ExecNode::new(q.clone()));
                    let tip = &mut nodes[branches[b].node];
                    tip.rule = Some(rule);
                    tip.children.push(id);
                    branches[b].node = id;
                }
                branches[b].current = Some(q);
                queue.push_back(b);
                None
            }
            Ok(StepResult::Branch3(children)) => {
                used += 1;
                branches[b].steps += 1;
                let fork_id = forks.len();
                let mut ids = [0; 3];
                for (slot, child) in children.into_iter().enumerate() {
                    let id = branches.len();
                    let node = if opts.record {
                        let n = nodes.len();
                        nodes.push(ExecNode::new(child.clone()));
                        nodes[branches[b].node].children.push(n);
                        n
                    } else {
                        0
                    };
                    let mut path = branches[b].path.clone();
                    path.push(slot as u8);
                    branches.push(Branch {
                        path,
                        start: child.clone(),
                        current: Some(child),
                        steps: 0,
                        status: Status::Running,
                        end: None,
                        result: Partial::Pending,
                        parent: Some((fork_id, slot)),
                        node,
                    });
                    ids[slot] = id;
                    queue.push_back(id);
                }
                if opts.record {
                    nodes[branches[b].node].rule = Some(Rule::Fork);
                }
                forks.push(Fork { branch: b, children: ids, results: Default::default(), decided: false });
                branches[b].status = Status::Forked(fork_id);
                branches[b].end = Some(BranchEnd::Fork);
                None
            }
            Ok(StepResult::Accept(kind)) => {
                used += 1;
                branches[b].steps += 1;
                if opts.record {
                    let tip = &mut nodes[branches[b].node];
                    tip.rule = Some(if kind == AcceptKind::Stop { Rule::Stop } else { Rule::Oracle });
                    tip.leaf = Some(Leaf::Accept(kind.clone()));
                }
                branches[b].status = Status::Accepted;
                let v = leaf(&kind);
                branches[b].end = Some(BranchEnd::Accept { accept: kind });
                Some(v)
            }
            Ok(StepResult::Stuck(reason)) | Err((reason, _)) => {
                if opts.record {
                    nodes[branches[b].node].leaf = Some(Leaf::Stuck(reason));
                }
                branches[b].status = Status::Stuck;
                branches[b].end = Some(BranchEnd::Stuck { reason });
                Some(Partial::Failed)
            }
        };
        if let Some(v) = settled {
            // propagate upwards while forks become decided
            let mut cur = b;
            let mut val = v;
            loop {
                branches[cur].result = val.clone();
                match branches[cur].parent {
                    None => {
                        root_verdict = val;
                        break;
                    }
                    Some((f, slot)) => {
                        forks[f].results[slot] = val;
                        if forks[f].decided {
                            break;
                        }
                        let m = majority(&forks[f].results);
                        if m == Partial::Pending {
                            break;
                        }
                        forks[f].decided = true;
                        if opts.short_circuit {
                            prune(&mut branches, &forks, f);
                        }
                        cur = forks[f].branch;
                        val = m;
                    }
                }
            }
        }
    }

    let first_fork = first_fork_on_root_path(&branches, &forks);
    let mut summaries = Vec::with_capacity(branches.len());
    for b in &branches {
        let end = match (&b.end, b.status) {
            (_, Status::Pruned) => BranchEnd::Pruned,
            (Some(e), _) => e.clone(),
            (None, _) => BranchEnd::Fuel,
        };
        if opts.record && end == BranchEnd::Fuel {
            nodes[b.node].leaf = Some(Leaf::Fuel);
        }
        summaries.push(BranchSummary {
            path: b.path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("."),
            start: b.start.to_string(),
            steps: b.steps,
            end,
        });
    }
    Schedule {
        verdict: root_verdict,
        steps: used,
        branches: summaries,
        first_fork,
        tree: opts.record.then_some(ExecTree { nodes }),
    }
}

fn prune<V>(branches: &mut [Branch<V>], forks: &[Fork<V>], f: usize) {
    let mut todo = vec![f];
    while let Some(f) = todo.pop() {
        for &c in &forks[f].children {
            match branches[c].status {
                Status::Running => {
                    branches[c].status = Status::Pruned;
                    branches[c].current = None;
                }
                Status::Forked(g) => todo.push(g),
                _ => {}
            }
        }
    }
}

fn first_fork_on_root_path<V: Clone>(branches: &[Branch<V>], forks: &[Fork<V>]) -> Option<[Partial<V>; 3]> {
    match branches.first()?.status {
        Status::Forked(f) => Some(forks[f].results.clone()),
        _ => None,
    }
}

/// Leaf status of an execution-tree node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Accept(AcceptKind),
    Stuck(StuckReason),
    Fuel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecNode {
    pub process: Process,
    /// Rule applied at this node; for accepting leaves, the accepting rule.
    pub rule: Option<Rule>,
    pub children: Vec<usize>,
    pub leaf: Option<Leaf>,
}

impl ExecNode {
    fn new(process: Process) -> Self {
        ExecNode { process, rule: None, children: Vec::new(), leaf: None }
    }
}

/// The execution of a process. Node 0 is the root; a node has three children
/// exactly when its rule is the fork, and at most one otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecTree {
    pub nodes: Vec<ExecNode>,
}

impl ExecTree {
    pub fn root(&self) -> &ExecNode {
        &self.nodes[0]
    }

    /// Accepting leaves in depth-first, left-to-right order.
    pub fn accepts(&self) -> Vec<&AcceptKind> {
        let mut out = Vec::new();
        let mut todo = vec![0];
        while let Some(i) = todo.pop() {
            let n = &self.nodes[i];
            if let Some(Leaf::Accept(k)) = &n.leaf {
                out.push(k);
            }
            todo.extend(n.children.iter().rev());
        }
        out
    }

    /// Nested JSON `{"node", "rule", "children", "leaf"}` built without recursion,
    /// so arbitrarily long linear runs serialize safely.
    pub fn to_json(&self) -> String {
        enum Task {
            Open(usize),
            Text(&'static str),
        }
        let mut out = String::new();
        let mut todo = vec![Task::Open(0)];
        while let Some(task) = todo.pop() {
            let i = match task {
                Task::Text(s) => {
                    out.push_str(s);
                    continue;
                }
                Task::Open(i) => i,
            };
            let n = &self.nodes[i];
            out.push_str("{\"node\":");
            out.push_str(&json_str(&n.process.to_string()));
            out.push_str(",\"rule\":");
            match n.rule {
                Some(r) => out.push_str(&json_str(&r.label())),
                None => out.push_str("null"),
            }
            out.push_str(",\"leaf\":");
            match &n.leaf {
                None => out.push_str("null"),
                Some(Leaf::Fuel) => out.push_str("{\"status\":\"fuel\"}"),
                Some(Leaf::Stuck(r)) => {
                    let _ = write!(out, "{{\"status\":\"stuck\",\"reason\":\"{r}\"}}");
                }
                Some(Leaf::Accept(AcceptKind::Stop)) => out.push_str("{\"status\":\"accept\",\"kind\":\"stop\"}"),
                Some(Leaf::Accept(AcceptKind::Oracle { name, payload })) => {
                    let _ = write!(
                        out,
                        "{{\"status\":\"accept\",\"kind\":\"oracle\",\"name\":{},\"payload\":{payload}}}",
                        json_str(name)
                    );
                }
            }
            out.push_str(",\"children\":[");
            todo.push(Task::Text("]}"));
            for (k, &c) in n.children.iter().enumerate().rev() {
                todo.push(Task::Open(c));
                if k > 0 {
                    todo.push(Task::Text(","));
                }
            }
        }
        out
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

impl fmt::Display for ExecTree {
    /// One line per node. Linear runs stay at one indentation level; fork
    /// children are indented under a `[i]` marker.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut todo = vec![(0usize, 0usize, None::<usize>)];
        while let Some((i, depth, slot)) = todo.pop() {
            let n = &self.nodes[i];
            let pad = "  ".repeat(depth);
            let marker = slot.map(|s| format!("[{s}] ")).unwrap_or_default();
            write!(f, "{pad}{marker}{}", n.process)?;
            if let Some(r) = n.rule {
                write!(f, "  [rule {r}]")?;
            }
            match &n.leaf {
                Some(Leaf::Accept(k)) => write!(f, "  accept({k})")?,
                Some(Leaf::Stuck(r)) => write!(f, "  stuck({r})")?,
                Some(Leaf::Fuel) => f.write_str("  fuel")?,
                None => {}
            }
            writeln!(f)?;
            if n.children.len() == 3 {
                for (s, &c) in n.children.iter().enumerate().rev() {
                    todo.push((c, depth + 1, Some(s)));
                }
            } else if let Some(&c) = n.children.first() {
                todo.push((c, depth, None));
            }
        }
        Ok(())
    }
}

/// Full execution tree of `p` under a global, round-robin step budget.
pub fn exec_tree(p: Process, fuel: u64, cfg: &OracleConfig) -> ExecTree {
    let s = schedule(p, fuel, cfg, |_| Partial::Value(()), Options { record: true, short_circuit: false });
    s.tree.expect("recorded")
}

/// Pole membership, decided as far as the budget allows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoleVerdict {
    /// The evaluated tree certifies membership.
    Yes(Vec<BranchSummary>),
    /// The budget ran out first.
    Unknown { steps: u64 },
    /// Every way of certifying failed.
    NoEvidence(Vec<BranchSummary>),
}

impl PoleVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PoleVerdict::Yes(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            PoleVerdict::Yes(_) => "yes",
            PoleVerdict::Unknown { .. } => "unknown",
            PoleVerdict::NoEvidence(_) => "no-evidence",
        }
    }
}

pub fn in_pole(p: Process, fuel: u64, cfg: &OracleConfig) -> PoleVerdict {
    let s = schedule(p, fuel, cfg, |_| Partial::Value(()), Options { record: false, short_circuit: true });
    match s.verdict {
        Partial::Value(()) => PoleVerdict::Yes(s.branches),
        Partial::Failed => PoleVerdict::NoEvidence(s.branches),
        Partial::Pending => PoleVerdict::Unknown { steps: s.steps },
    }
}
